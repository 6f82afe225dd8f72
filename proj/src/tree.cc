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

#include "cohortxai/tree.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "cohortxai/error.h"

namespace cohortxai {
namespace {

// Splits whose scores differ by less than this are ties.
constexpr double kScoreEpsilon = 1e-12;

// n * gini for integer counts: n - (pos^2 + neg^2) / n.
double weighted_gini(double pos, double n) {
  const double neg = n - pos;
  return n - (pos * pos + neg * neg) / n;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const int> y, const TreeParams& params,
              Rng& rng)
      : x_(x),
        y_(y),
        min_leaf_(std::max<std::size_t>(1, params.min_leaf_size)),
        mtry_(resolve_features_per_split(params.features_per_split, x.cols())),
        rng_(rng),
        feature_pool_(x.cols()) {
    std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
  }

  Tree build(std::vector<std::size_t> rows) {
    rows_ = std::move(rows);
    nodes_.clear();
    grow(0, rows_.size());
    return Tree{std::move(nodes_)};
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;  // cover-weighted child impurity times cover
  };

  int grow(std::size_t begin, std::size_t end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const std::size_t n = end - begin;
    std::size_t positives = 0;
    for (std::size_t i = begin; i < end; ++i) positives += y_[rows_[i]] == 1;
    nodes_[id].cover = static_cast<double>(n);
    nodes_[id].value = static_cast<double>(positives) / static_cast<double>(n);

    if (positives == 0 || positives == n || n < 2 * min_leaf_) return id;
    const Split split = best_split(begin, end);
    const double parent = weighted_gini(static_cast<double>(positives),
                                        static_cast<double>(n));
    if (split.feature < 0 || parent - split.score <= kScoreEpsilon * n) {
      return id;
    }

    const auto mid_it = std::partition(
        rows_.begin() + begin, rows_.begin() + end, [&](std::size_t r) {
          return x_(r, split.feature) <= split.threshold;
        });
    const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());
    // Thresholds lie strictly between observed values, so both sides keep at
    // least min_leaf rows.
    const int left = grow(begin, mid);
    const int right = grow(mid, end);
    TreeNode& node = nodes_[id];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  Split best_split(std::size_t begin, std::size_t end) {
    const std::size_t p = feature_pool_.size();
    for (std::size_t i = 0; i < mtry_; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, p - 1);
      std::swap(feature_pool_[i], feature_pool_[pick(rng_)]);
    }
    std::vector<std::size_t> candidates(feature_pool_.begin(),
                                        feature_pool_.begin() + mtry_);
    std::ranges::sort(candidates);

    const std::size_t n = end - begin;
    Split best;
    best.score = std::numeric_limits<double>::infinity();
    scratch_.resize(n);
    for (std::size_t f : candidates) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = rows_[begin + i];
        scratch_[i] = {x_(r, f), y_[r]};
      }
      // Label order among equal values does not affect any boundary count.
      std::sort(scratch_.begin(), scratch_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (scratch_.front().first == scratch_.back().first) continue;
      double pos_left = 0.0;
      double pos_total = 0.0;
      for (const auto& s : scratch_) pos_total += s.second;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        pos_left += scratch_[i].second;
        const double lo = scratch_[i].first;
        const double hi = scratch_[i + 1].first;
        if (lo == hi) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < min_leaf_ || n_right < min_leaf_) continue;
        const double score =
            weighted_gini(pos_left, static_cast<double>(n_left)) +
            weighted_gini(pos_total - pos_left, static_cast<double>(n_right));
        if (score < best.score - kScoreEpsilon * n) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(threshold < hi)) threshold = lo;
          best = {static_cast<int>(f), threshold, score};
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const int> y_;
  std::size_t min_leaf_;
  std::size_t mtry_;
  Rng& rng_;
  std::vector<std::size_t> feature_pool_;
  std::vector<std::size_t> rows_;
  std::vector<TreeNode> nodes_;
  std::vector<std::pair<double, int>> scratch_;
};

}  // namespace

double gini_impurity(double positives, double negatives) {
  if (positives < 0 || negatives < 0) {
    throw InvalidArgument("gini_impurity: negative count");
  }
  const double n = positives + negatives;
  if (n <= 0) throw InvalidArgument("gini_impurity: zero total");
  const double p = positives / n;
  const double q = negatives / n;
  return 1.0 - p * p - q * q;
}

std::size_t resolve_features_per_split(std::size_t requested, std::size_t p) {
  if (requested == 0) {
    requested = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p))));
  }
  return std::clamp<std::size_t>(requested, 1, std::max<std::size_t>(p, 1));
}

int Tree::leaf_index(std::span<const double> x) const {
  int id = 0;
  while (!nodes[id].is_leaf()) {
    const TreeNode& node = nodes[id];
    id = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return id;
}

std::size_t Tree::depth() const {
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  // Children always follow their parent in the node vector.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[nodes[i].left] = level[i] + 1;
      level[nodes[i].right] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(
      std::ranges::count_if(nodes, [](const TreeNode& n) { return n.is_leaf(); }));
}

Tree fit_tree(const Matrix& x, std::span<const int> y,
              std::span<const std::size_t> rows, const TreeParams& params,
              Rng& rng) {
  if (rows.empty() || x.rows() == 0) {
    throw InvalidArgument("fit_tree: no training rows");
  }
  if (x.cols() == 0) throw InvalidArgument("fit_tree: no features");
  if (y.size() != x.rows()) {
    throw InvalidArgument("fit_tree: label count does not match rows");
  }
  for (std::size_t r : rows) {
    if (r >= x.rows()) throw InvalidArgument("fit_tree: row index out of range");
    for (double v : x.row(r)) {
      if (!std::isfinite(v)) {
        throw InvalidArgument("fit_tree: non-finite feature value in row " +
                              std::to_string(r));
      }
    }
  }
  TreeBuilder builder(x, y, params, rng);
  return builder.build(std::vector<std::size_t>(rows.begin(), rows.end()));
}

Tree fit_tree(const Matrix& x, std::span<const int> y, const TreeParams& params,
              Rng& rng) {
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), 0);
  return fit_tree(x, y, rows, params, rng);
}

}  // namespace cohortxai
