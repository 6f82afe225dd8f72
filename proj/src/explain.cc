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

#include "cohortxai/explain.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>

#include "cohortxai/error.h"
#include "cohortxai/random.h"

namespace cohortxai {
namespace {

// ------------------------------------------------------ local accuracy --

std::atomic<std::uint64_t> g_checked{0};
std::atomic<std::uint64_t> g_violations{0};
std::mutex g_max_mutex;
double g_max_error = 0.0;

void record(const ShapExplanation& e) {
  const double err = e.local_accuracy_error();
  g_checked.fetch_add(1, std::memory_order_relaxed);
  if (!(err < kLocalAccuracyTolerance)) {
    g_violations.fetch_add(1, std::memory_order_relaxed);
  }
  std::lock_guard lock(g_max_mutex);
  if (!(err <= g_max_error)) g_max_error = err;
}

// ------------------------------------------------------- value function --

void check_covers(const Tree& tree) {
  if (tree.nodes.empty()) throw InvalidArgument("tree has no nodes");
}

double node_cover(const Tree& tree, int id) {
  const double cover = tree.nodes[id].cover;
  if (!(cover > 0.0)) {
    throw InvalidArgument("tree node " + std::to_string(id) +
                          " has zero cover");
  }
  return cover;
}

template <class InCoalition>
double conditional_value(const Tree& tree, int id, std::span<const double> x,
                         const InCoalition& in_coalition) {
  const TreeNode& node = tree.nodes[id];
  if (node.is_leaf()) return node.value;
  if (in_coalition(node.feature)) {
    return conditional_value(
        tree, x[node.feature] <= node.threshold ? node.left : node.right, x,
        in_coalition);
  }
  const double cover = node_cover(tree, id);
  return (tree.nodes[node.left].cover *
              conditional_value(tree, node.left, x, in_coalition) +
          tree.nodes[node.right].cover *
              conditional_value(tree, node.right, x, in_coalition)) /
         cover;
}

// Cover-weighted mean of the leaves, v(empty set).
double expected_value(const Tree& tree) {
  std::vector<double> value(tree.nodes.size(), 0.0);
  // Children always follow their parent.
  for (std::size_t i = tree.nodes.size(); i-- > 0;) {
    const TreeNode& node = tree.nodes[i];
    if (node.is_leaf()) {
      value[i] = node.value;
    } else {
      const double cover = node_cover(tree, static_cast<int>(i));
      value[i] = (tree.nodes[node.left].cover * value[node.left] +
                  tree.nodes[node.right].cover * value[node.right]) /
                 cover;
    }
  }
  return value[0];
}

void check_tree_features(const Tree& tree, std::size_t p) {
  for (const TreeNode& node : tree.nodes) {
    if (!node.is_leaf() && static_cast<std::size_t>(node.feature) >= p) {
      throw InvalidArgument("tree splits on feature " +
                            std::to_string(node.feature) + " but x has " +
                            std::to_string(p) + " features");
    }
  }
}

// Coalition values v(S) for every bitmask S over p features.
std::vector<double> coalition_values(const Tree& tree,
                                     std::span<const double> x) {
  const std::size_t p = x.size();
  std::vector<double> values(std::size_t{1} << p);
  for (std::size_t mask = 0; mask < values.size(); ++mask) {
    values[mask] = conditional_value(tree, 0, x, [mask](int f) {
      return ((mask >> f) & 1U) != 0;
    });
  }
  return values;
}

ShapExplanation shapley_from_values(const std::vector<double>& v,
                                    std::size_t p) {
  // weight[s] = s! (p - s - 1)! / p!
  std::vector<double> weight(p, 0.0);
  for (std::size_t s = 0; s < p; ++s) {
    weight[s] = std::exp(std::lgamma(static_cast<double>(s) + 1) +
                         std::lgamma(static_cast<double>(p - s)) -
                         std::lgamma(static_cast<double>(p) + 1));
  }
  ShapExplanation e;
  e.contributions.assign(p, 0.0);
  e.base_value = v[0];
  e.model_output = v.back();
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    double phi = 0.0;
    for (std::size_t mask = 0; mask < v.size(); ++mask) {
      if (mask & bit) continue;
      phi += weight[std::popcount(mask)] * (v[mask | bit] - v[mask]);
    }
    e.contributions[j] = phi;
  }
  return e;
}

void check_oracle_size(std::size_t p) {
  if (p == 0) throw InvalidArgument("exact_shap_oracle: no features");
  if (p > kOracleMaxFeatures) {
    throw InvalidArgument("exact_shap_oracle: p = " + std::to_string(p) +
                          " exceeds " + std::to_string(kOracleMaxFeatures));
  }
}

// -------------------------------------------------------------- TreeSHAP --

struct PathElement {
  int feature;
  double zero_fraction;
  double one_fraction;
  double weight;
};

void extend_path(PathElement* path, int depth, double zero_fraction,
                 double one_fraction, int feature) {
  path[depth] = {feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
  for (int i = depth - 1; i >= 0; --i) {
    path[i + 1].weight += one_fraction * path[i].weight * (i + 1) /
                          static_cast<double>(depth + 1);
    path[i].weight = zero_fraction * path[i].weight * (depth - i) /
                     static_cast<double>(depth + 1);
  }
}

void unwind_path(PathElement* path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next = path[depth].weight;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double saved = path[i].weight;
      path[i].weight = next * (depth + 1) / ((i + 1) * one);
      next = saved - path[i].weight * zero * (depth - i) /
                         static_cast<double>(depth + 1);
    } else {
      path[i].weight = path[i].weight * (depth + 1) / (zero * (depth - i));
    }
  }
  for (int i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

// Total permutation weight of the path with element `index` removed.
double unwound_path_sum(const PathElement* path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next = path[depth].weight;
  double total = 0.0;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double w = next * (depth + 1) / ((i + 1) * one);
      total += w;
      next = path[i].weight -
             w * zero * (depth - i) / static_cast<double>(depth + 1);
    } else {
      total += path[i].weight * (depth + 1) / (zero * (depth - i));
    }
  }
  return total;
}

class TreeShapRecursion {
 public:
  TreeShapRecursion(const Tree& tree, std::span<const double> x,
                    std::vector<double>& phi)
      : tree_(tree), x_(x), phi_(phi) {
    const auto depth = static_cast<std::size_t>(tree.depth());
    buffer_.resize((depth + 2) * (depth + 3) / 2 + 1);
  }

  void run() { recurse(0, buffer_.data(), 0, 1.0, 1.0, -1); }

 private:
  void recurse(int id, PathElement* parent_path, int depth,
               double zero_fraction, double one_fraction, int feature) {
    PathElement* path = parent_path + depth + 1;
    std::copy(parent_path, parent_path + depth + 1, path);
    extend_path(path, depth, zero_fraction, one_fraction, feature);

    const TreeNode& node = tree_.nodes[id];
    if (node.is_leaf()) {
      for (int i = 1; i <= depth; ++i) {
        const double w = unwound_path_sum(path, depth, i);
        const PathElement& el = path[i];
        phi_[el.feature] += w * (el.one_fraction - el.zero_fraction) * node.value;
      }
      return;
    }

    const bool go_left = x_[node.feature] <= node.threshold;
    const int hot = go_left ? node.left : node.right;
    const int cold = go_left ? node.right : node.left;
    const double cover = node_cover(tree_, id);
    const double hot_zero = tree_.nodes[hot].cover / cover;
    const double cold_zero = tree_.nodes[cold].cover / cover;

    double incoming_zero = 1.0;
    double incoming_one = 1.0;
    int k = 0;
    while (k <= depth && path[k].feature != node.feature) ++k;
    if (k <= depth) {
      incoming_zero = path[k].zero_fraction;
      incoming_one = path[k].one_fraction;
      unwind_path(path, depth, k);
      --depth;
    }
    recurse(hot, path, depth + 1, hot_zero * incoming_zero, incoming_one,
            node.feature);
    recurse(cold, path, depth + 1, cold_zero * incoming_zero, 0.0,
            node.feature);
  }

  const Tree& tree_;
  std::span<const double> x_;
  std::vector<double>& phi_;
  std::vector<PathElement> buffer_;
};

ShapExplanation tree_shap_unrecorded(const Tree& tree,
                                     std::span<const double> x) {
  check_covers(tree);
  check_tree_features(tree, x.size());
  ShapExplanation e;
  e.contributions.assign(x.size(), 0.0);
  TreeShapRecursion(tree, x, e.contributions).run();
  e.base_value = expected_value(tree);
  e.model_output = tree.predict(x);
  return e;
}

}  // namespace

double ShapExplanation::local_accuracy_error() const {
  double sum = base_value;
  for (double c : contributions) sum += c;
  return std::abs(sum - model_output);
}

LocalAccuracyStats local_accuracy_stats() {
  std::lock_guard lock(g_max_mutex);
  return {g_checked.load(), g_violations.load(), g_max_error};
}

void reset_local_accuracy_stats() {
  std::lock_guard lock(g_max_mutex);
  g_checked = 0;
  g_violations = 0;
  g_max_error = 0.0;
}

double tree_value_function(const Tree& tree, std::span<const double> x,
                           const std::vector<bool>& in_coalition) {
  check_covers(tree);
  check_tree_features(tree, x.size());
  if (in_coalition.size() != x.size()) {
    throw InvalidArgument("coalition mask length does not match x");
  }
  return conditional_value(tree, 0, x,
                           [&](int f) { return in_coalition[f]; });
}

ShapExplanation exact_shap_oracle(const Tree& tree, std::span<const double> x) {
  check_oracle_size(x.size());
  check_covers(tree);
  check_tree_features(tree, x.size());
  ShapExplanation e = shapley_from_values(coalition_values(tree, x), x.size());
  record(e);
  return e;
}

ShapExplanation exact_shap_oracle(const ForestModel& forest,
                                  std::span<const double> x) {
  check_oracle_size(x.size());
  if (forest.trees.empty()) throw InvalidArgument("forest has no trees");
  if (x.size() != forest.n_features) {
    throw InvalidArgument("forest expects " + std::to_string(forest.n_features) +
                          " features, got " + std::to_string(x.size()));
  }
  std::vector<double> v(std::size_t{1} << x.size(), 0.0);
  for (const Tree& tree : forest.trees) {
    check_tree_features(tree, x.size());
    const auto tv = coalition_values(tree, x);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += tv[i];
  }
  const auto n = static_cast<double>(forest.trees.size());
  for (double& value : v) value /= n;
  ShapExplanation e = shapley_from_values(v, x.size());
  e.model_output = forest.predict(x);
  record(e);
  return e;
}

ShapExplanation tree_shap(const Tree& tree, std::span<const double> x) {
  ShapExplanation e = tree_shap_unrecorded(tree, x);
  record(e);
  return e;
}

ShapExplanation forest_shap(const ForestModel& forest,
                            std::span<const double> x) {
  if (forest.trees.empty()) throw InvalidArgument("forest has no trees");
  if (x.size() != forest.n_features) {
    throw InvalidArgument("forest expects " + std::to_string(forest.n_features) +
                          " features, got " + std::to_string(x.size()));
  }
  ShapExplanation e;
  e.contributions.assign(x.size(), 0.0);
  for (const Tree& tree : forest.trees) {
    const ShapExplanation t = tree_shap_unrecorded(tree, x);
    e.base_value += t.base_value;
    for (std::size_t j = 0; j < x.size(); ++j) {
      e.contributions[j] += t.contributions[j];
    }
  }
  const auto n = static_cast<double>(forest.trees.size());
  e.base_value /= n;
  for (double& c : e.contributions) c /= n;
  e.model_output = forest.predict(x);
  record(e);
  return e;
}

ShapExplanation sampling_shap(const PredictFn& predict,
                              std::span<const double> x,
                              const Matrix& background,
                              const SamplingOptions& options) {
  if (background.rows() == 0) {
    throw InvalidArgument("sampling_shap: empty background");
  }
  if (background.cols() != x.size()) {
    throw InvalidArgument("sampling_shap: background width does not match x");
  }
  if (options.n_permutations == 0) {
    throw InvalidArgument("sampling_shap: need at least one permutation");
  }
  const std::size_t p = x.size();
  const auto k_total = static_cast<std::ptrdiff_t>(options.n_permutations);
  Matrix per_permutation(options.n_permutations, p);
  std::vector<double> start_values(options.n_permutations);

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (options.exec == Execution::kParallel)
  for (std::ptrdiff_t k = 0; k < k_total; ++k) {
    try {
      Rng rng = make_rng(options.seed, {static_cast<std::uint64_t>(k)});
      std::vector<std::size_t> order(p);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      std::uniform_int_distribution<std::size_t> pick(0, background.rows() - 1);
      const auto z = background.row(pick(rng));
      std::vector<double> hybrid(z.begin(), z.end());
      double previous = predict(hybrid);
      start_values[k] = previous;
      auto contrib = per_permutation.row(k);
      for (std::size_t j : order) {
        hybrid[j] = x[j];
        const double current = predict(hybrid);
        contrib[j] = current - previous;
        previous = current;
      }
    } catch (...) {
#pragma omp critical(cohortxai_sampling_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  ShapExplanation e;
  e.contributions.assign(p, 0.0);
  for (std::size_t k = 0; k < options.n_permutations; ++k) {
    e.base_value += start_values[k];
    const auto contrib = per_permutation.row(k);
    for (std::size_t j = 0; j < p; ++j) e.contributions[j] += contrib[j];
  }
  const auto n = static_cast<double>(options.n_permutations);
  e.base_value /= n;
  for (double& c : e.contributions) c /= n;
  e.model_output = predict(x);
  record(e);
  return e;
}

ShapExplanation explain_row(const TrainedModel& model,
                            std::span<const double> x, const Matrix& background,
                            const SamplingOptions& options) {
  if (const auto* forest = std::get_if<ForestModel>(&model)) {
    return forest_shap(*forest, x);
  }
  return sampling_shap(
      [&model](std::span<const double> row) { return predict_score(model, row); },
      x, background, options);
}

std::vector<double> mean_abs_shap(const TrainedModel& model, const Matrix& rows,
                                  const Matrix& background,
                                  const SamplingOptions& options) {
  if (rows.rows() == 0) throw InvalidArgument("mean_abs_shap: no rows");
  const std::size_t p = rows.cols();
  Matrix magnitudes(rows.rows(), p);
  const auto n_rows = static_cast<std::ptrdiff_t>(rows.rows());
  const bool is_forest = std::holds_alternative<ForestModel>(model);

  std::exception_ptr failure;
  // Sampling explanations parallelize over permutations instead.
#pragma omp parallel for schedule(dynamic) if (is_forest && options.exec == Execution::kParallel)
  for (std::ptrdiff_t r = 0; r < n_rows; ++r) {
    try {
      SamplingOptions row_options = options;
      row_options.seed = derive_seed(options.seed, {static_cast<std::uint64_t>(r)});
      const ShapExplanation e = explain_row(model, rows.row(r), background, row_options);
      auto out = magnitudes.row(r);
      for (std::size_t j = 0; j < p; ++j) out[j] = std::abs(e.contributions[j]);
    } catch (...) {
#pragma omp critical(cohortxai_importance_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> importance(p, 0.0);
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const auto m = magnitudes.row(r);
    for (std::size_t j = 0; j < p; ++j) importance[j] += m[j];
  }
  for (double& v : importance) v /= static_cast<double>(rows.rows());
  return importance;
}

}  // namespace cohortxai
