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

#include <gtest/gtest.h>

#include <random>

#include "cohortxai/error.h"
#include "cohortxai/model_io.h"

namespace cohortxai {
namespace {

Matrix data(std::vector<int>& y) {
  std::mt19937_64 gen(15);
  std::normal_distribution<double> normal;
  Matrix x(50, 3);
  y.assign(50, 0);
  for (std::size_t r = 0; r < 50; ++r) {
    y[r] = static_cast<int>(r % 2);
    for (std::size_t c = 0; c < 3; ++c) x(r, c) = normal(gen) * 1e3 + y[r] * 700.0;
  }
  return x;
}

TEST(ModelKindNames, ParseAndPrint) {
  for (ModelKind k : {ModelKind::kForest, ModelKind::kSvm, ModelKind::kMlp}) {
    EXPECT_EQ(parse_model_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_model_kind("rf"), ModelKind::kForest);
  EXPECT_EQ(parse_model_kind("nn"), ModelKind::kMlp);
  EXPECT_EQ(display_name(ModelKind::kMlp), "Neural Network");
  EXPECT_THROW(parse_model_kind("xgboost"), InvalidArgument);
}

TEST(ModelIo, RoundTripPreservesPredictionsExactly) {
  std::vector<int> y;
  const Matrix x = data(y);
  ModelHyper hyper;
  hyper.forest.n_trees = 8;
  hyper.mlp.epochs = 5;
  for (ModelKind kind : {ModelKind::kForest, ModelKind::kSvm, ModelKind::kMlp}) {
    const SavedModel saved{train_model(kind, x, y, hyper, 3), {"a", "b", "c"}};
    // Through text, as on disk.
    const SavedModel back =
        model_from_json(nlohmann::json::parse(model_to_json(saved).dump()));
    EXPECT_EQ(kind_of(back.model), kind);
    EXPECT_EQ(back.feature_names, saved.feature_names);
    EXPECT_EQ(feature_count(back.model), 3u);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      EXPECT_EQ(predict_score(back.model, x.row(r)), predict_score(saved.model, x.row(r)))
          << to_string(kind) << " row " << r;
    }
  }
}

TEST(ModelIo, RejectsForeignDocuments) {
  EXPECT_THROW(model_from_json(nlohmann::json::parse(R"({"format":"other"})")), Error);
  EXPECT_THROW(model_from_json(nlohmann::json::parse("[1,2]")), Error);
}

TEST(ModelIo, HyperRoundTrip) {
  ModelHyper h;
  h.forest.n_trees = 17;
  h.forest.bootstrap = false;
  h.svm.c = 2.5;
  h.svm.gamma = 0.125;
  h.mlp.learning_rate = 0.003;
  h.mlp.hidden_width = 9;
  const ModelHyper back = hyper_from_json(to_json(h));
  EXPECT_EQ(back.forest, h.forest);
  EXPECT_EQ(back.svm.gamma, h.svm.gamma);
  EXPECT_EQ(back.svm.c, h.svm.c);
  EXPECT_EQ(back.mlp.learning_rate, h.mlp.learning_rate);
  EXPECT_EQ(back.mlp.hidden_width, h.mlp.hidden_width);
  EXPECT_FALSE(hyper_from_json(to_json(ModelHyper{})).svm.gamma.has_value());
}

TEST(TrainModel, ScaledModelsAcceptRawRows) {
  std::vector<int> y;
  const Matrix x = data(y);
  ModelHyper hyper;
  const TrainedModel svm = train_model(ModelKind::kSvm, x, y, hyper, 1);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < x.rows(); ++r) correct += predict_label(svm, x.row(r)) == y[r];
  EXPECT_GT(correct, 30u);
  EXPECT_THROW(predict_score(svm, std::vector<double>{1.0}), InvalidArgument);
}

}  // namespace
}  // namespace cohortxai
