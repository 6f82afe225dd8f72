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

#include "cohortxai/forest.h"

#include <exception>
#include <numeric>
#include <random>

#include "cohortxai/error.h"
#include "cohortxai/random.h"

namespace cohortxai {

double ForestModel::predict(std::span<const double> x) const {
  if (x.size() != n_features) {
    throw InvalidArgument("forest expects " + std::to_string(n_features) +
                          " features, got " + std::to_string(x.size()));
  }
  double sum = 0.0;
  for (const Tree& tree : trees) sum += tree.predict(x);
  return sum / static_cast<double>(trees.size());
}

ForestModel fit_forest(const Matrix& x, std::span<const int> y,
                       const ForestParams& params, std::uint64_t seed,
                       Execution exec) {
  if (params.n_trees == 0) throw InvalidArgument("fit_forest: n_trees must be >= 1");
  if (x.rows() == 0) throw InvalidArgument("fit_forest: no training rows");

  ForestModel model;
  model.params = params;
  model.seed = seed;
  model.n_features = x.cols();
  model.trees.resize(params.n_trees);
  const TreeParams tree_params{params.min_leaf_size, params.features_per_split};
  const std::size_t n = x.rows();
  const auto n_trees = static_cast<std::ptrdiff_t>(params.n_trees);

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::kParallel)
  for (std::ptrdiff_t t = 0; t < n_trees; ++t) {
    try {
      Rng rng = make_rng(seed, {static_cast<std::uint64_t>(t)});
      std::vector<std::size_t> rows(n);
      if (params.bootstrap) {
        std::uniform_int_distribution<std::size_t> draw(0, n - 1);
        for (auto& r : rows) r = draw(rng);
      } else {
        std::iota(rows.begin(), rows.end(), 0);
      }
      model.trees[t] = fit_tree(x, y, rows, tree_params, rng);
    } catch (...) {
#pragma omp critical(cohortxai_forest_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return model;
}

}  // namespace cohortxai
