/*
 * Copyright 2026 The cohortxai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cohortxai/classifier.h"

#include <vector>

#include "cohortxai/error.h"

namespace cohortxai {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double scaled_call(const Scaler& scaler, std::span<const double> x,
                   const auto& fn) {
  std::vector<double> buf(x.size());
  scaler.transform_row(x, buf);
  return fn(std::span<const double>(buf));
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kForest:
      return "forest";
    case ModelKind::kSvm:
      return "svm";
    case ModelKind::kMlp:
      return "mlp";
  }
  return "forest";
}

std::string_view display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kForest:
      return "Random Forest";
    case ModelKind::kSvm:
      return "SVM";
    case ModelKind::kMlp:
      return "Neural Network";
  }
  return "Random Forest";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "forest" || text == "rf") return ModelKind::kForest;
  if (text == "svm") return ModelKind::kSvm;
  if (text == "mlp" || text == "nn") return ModelKind::kMlp;
  throw InvalidArgument("unknown model kind '" + std::string(text) + "'");
}

ModelKind kind_of(const TrainedModel& model) {
  return std::visit(
      Overloaded{[](const ForestModel&) { return ModelKind::kForest; },
                 [](const ScaledSvm&) { return ModelKind::kSvm; },
                 [](const ScaledMlp&) { return ModelKind::kMlp; }},
      model);
}

std::size_t feature_count(const TrainedModel& model) {
  return std::visit(
      Overloaded{[](const ForestModel& m) { return m.n_features; },
                 [](const ScaledSvm& m) { return m.svm.n_features; },
                 [](const ScaledMlp& m) { return m.mlp.n_features; }},
      model);
}

double predict_score(const TrainedModel& model, std::span<const double> x) {
  return std::visit(
      Overloaded{
          [&](const ForestModel& m) { return m.predict(x); },
          [&](const ScaledSvm& m) {
            return scaled_call(m.scaler, x, [&](std::span<const double> z) {
              return m.svm.decision(z);
            });
          },
          [&](const ScaledMlp& m) {
            return scaled_call(m.scaler, x, [&](std::span<const double> z) {
              return m.mlp.predict(z);
            });
          }},
      model);
}

int predict_label(const TrainedModel& model, std::span<const double> x) {
  const double score = predict_score(model, x);
  return kind_of(model) == ModelKind::kSvm ? (score >= 0.0 ? 1 : 0)
                                           : (score >= 0.5 ? 1 : 0);
}

TrainedModel train_model(ModelKind kind, const Matrix& x, std::span<const int> y,
                         const ModelHyper& hyper, std::uint64_t seed,
                         Execution exec) {
  switch (kind) {
    case ModelKind::kForest:
      return fit_forest(x, y, hyper.forest, seed, exec);
    case ModelKind::kSvm: {
      ScaledSvm m;
      m.scaler = fit_scaler(x);
      m.svm = fit_svm_smo(m.scaler.transform(x), to_signed_labels(y), hyper.svm);
      return m;
    }
    case ModelKind::kMlp: {
      ScaledMlp m;
      m.scaler = fit_scaler(x);
      MlpHyper h = hyper.mlp;
      h.seed = seed;
      m.mlp = fit_mlp(m.scaler.transform(x), y, h);
      return m;
    }
  }
  throw InvalidArgument("unknown model kind");
}

}  // namespace cohortxai
