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

#ifndef COHORTXAI_EXPLAIN_H_
#define COHORTXAI_EXPLAIN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cohortxai/classifier.h"
#include "cohortxai/forest.h"
#include "cohortxai/matrix.h"
#include "cohortxai/parallel.h"
#include "cohortxai/tree.h"

namespace cohortxai {

// Additive attribution of one prediction:
//   base_value + sum(contributions) == model_output.
struct ShapExplanation {
  double base_value = 0.0;
  std::vector<double> contributions;
  double model_output = 0.0;

  double local_accuracy_error() const;
};

inline constexpr double kLocalAccuracyTolerance = 1e-8;

// Every explanation produced by this module is checked against
// kLocalAccuracyTolerance and counted here.
struct LocalAccuracyStats {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  double max_error = 0.0;
};
LocalAccuracyStats local_accuracy_stats();
void reset_local_accuracy_stats();

// Path-dependent conditional expectation of the tree output given that the
// features with in_coalition[j] set take x's values. Splits on features
// outside the coalition average both children by cover.
double tree_value_function(const Tree& tree, std::span<const double> x,
                           const std::vector<bool>& in_coalition);

inline constexpr std::size_t kOracleMaxFeatures = 20;

// Brute-force Shapley values over all 2^p coalitions of the cover-based value
// function (forest: mean of tree values). p = x.size() <= kOracleMaxFeatures.
ShapExplanation exact_shap_oracle(const Tree& tree, std::span<const double> x);
ShapExplanation exact_shap_oracle(const ForestModel& forest,
                                  std::span<const double> x);

// Polynomial-time path-dependent TreeSHAP. p = x.size().
ShapExplanation tree_shap(const Tree& tree, std::span<const double> x);
// Mean of the per-tree explanations, summed in tree order.
ShapExplanation forest_shap(const ForestModel& forest,
                            std::span<const double> x);

using PredictFn = std::function<double(std::span<const double>)>;

struct SamplingOptions {
  std::size_t n_permutations = 32;
  std::uint64_t seed = 0;
  Execution exec = Execution::kParallel;
};

// Monte-Carlo permutation estimator of interventional Shapley values.
// Permutation k draws its ordering and its background row from the substream
// derive_seed(seed, {k}) and walks from the background row to x one feature
// at a time. base_value is the mean prediction over the drawn background rows,
// so local accuracy holds exactly for any permutation budget.
ShapExplanation sampling_shap(const PredictFn& predict,
                              std::span<const double> x,
                              const Matrix& background,
                              const SamplingOptions& options);

// Explains one row with the model-appropriate explainer: TreeSHAP for forests,
// the sampling estimator (with `background`) otherwise.
ShapExplanation explain_row(const TrainedModel& model,
                            std::span<const double> x, const Matrix& background,
                            const SamplingOptions& options);

// Per-feature mean of |contribution| over `rows`.
std::vector<double> mean_abs_shap(const TrainedModel& model, const Matrix& rows,
                                  const Matrix& background,
                                  const SamplingOptions& options);

}  // namespace cohortxai

#endif  // COHORTXAI_EXPLAIN_H_
