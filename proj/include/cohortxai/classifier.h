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

#ifndef COHORTXAI_CLASSIFIER_H_
#define COHORTXAI_CLASSIFIER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cohortxai/forest.h"
#include "cohortxai/matrix.h"
#include "cohortxai/mlp.h"
#include "cohortxai/scaler.h"
#include "cohortxai/svm.h"

namespace cohortxai {

enum class ModelKind { kForest, kSvm, kMlp };

std::string_view to_string(ModelKind kind);
std::string_view display_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

// Margin and gradient models consume standardized inputs; the scaler travels
// with them so every classifier maps raw feature rows to a score.
struct ScaledSvm {
  Scaler scaler;
  SvmModel svm;
};

struct ScaledMlp {
  Scaler scaler;
  MlpModel mlp;
};

using TrainedModel = std::variant<ForestModel, ScaledSvm, ScaledMlp>;

struct ModelHyper {
  ForestParams forest;
  SvmParams svm;
  MlpHyper mlp;
};

ModelKind kind_of(const TrainedModel& model);
std::size_t feature_count(const TrainedModel& model);

// Raw output on an unscaled row: forest probability, SVM decision value, or
// MLP regression score.
double predict_score(const TrainedModel& model, std::span<const double> x);
int predict_label(const TrainedModel& model, std::span<const double> x);

// Fits the scaler (SVM/MLP) and the model on `x`. `seed` overrides the seed
// fields in `hyper`.
TrainedModel train_model(ModelKind kind, const Matrix& x, std::span<const int> y,
                         const ModelHyper& hyper, std::uint64_t seed,
                         Execution exec = Execution::kParallel);

}  // namespace cohortxai

#endif  // COHORTXAI_CLASSIFIER_H_
