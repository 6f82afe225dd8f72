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

#ifndef COHORTXAI_FOREST_H_
#define COHORTXAI_FOREST_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cohortxai/matrix.h"
#include "cohortxai/parallel.h"
#include "cohortxai/tree.h"

namespace cohortxai {

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t min_leaf_size = 2;
  std::size_t features_per_split = 0;  // 0: ceil(sqrt(p))
  bool bootstrap = true;

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

struct ForestModel {
  std::vector<Tree> trees;
  ForestParams params;
  std::uint64_t seed = 0;
  std::size_t n_features = 0;

  // Mean of the reached leaf values, in [0, 1]. Throws InvalidArgument on a
  // dimension mismatch.
  double predict(std::span<const double> x) const;
  int predict_label(std::span<const double> x) const {
    return predict(x) >= 0.5 ? 1 : 0;
  }
  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

// Tree t draws its bootstrap sample and feature choices from the substream
// derive_seed(seed, {t}), so trees can be fit in any order or concurrently.
ForestModel fit_forest(const Matrix& x, std::span<const int> y,
                       const ForestParams& params, std::uint64_t seed,
                       Execution exec = Execution::kParallel);

}  // namespace cohortxai

#endif  // COHORTXAI_FOREST_H_
