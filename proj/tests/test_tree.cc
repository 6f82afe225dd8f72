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

#include <limits>
#include <random>

#include "cohortxai/error.h"
#include "cohortxai/forest.h"
#include "cohortxai/random.h"
#include "cohortxai/tree.h"
#include "test_util.h"

namespace cohortxai {
namespace {

using testing::make_matrix;

TEST(Gini, ClosedForms) {
  EXPECT_DOUBLE_EQ(gini_impurity(2, 2), 0.5);
  EXPECT_DOUBLE_EQ(gini_impurity(4, 0), 0.0);
  EXPECT_DOUBLE_EQ(gini_impurity(3, 1), 0.375);
  EXPECT_THROW(gini_impurity(0, 0), InvalidArgument);
}

TEST(FitTree, FourPointSplitAtMidpoint) {
  const Matrix x = make_matrix(4, 1, {0, 1, 10, 11});
  const std::vector<int> y{0, 0, 1, 1};
  Rng rng(1);
  const Tree t = fit_tree(x, y, TreeParams{2, 1}, rng);
  ASSERT_EQ(t.nodes.size(), 3u);
  const TreeNode& root = t.nodes[0];
  EXPECT_EQ(root.feature, 0);
  EXPECT_EQ(root.threshold, 5.5);
  const TreeNode& l = t.nodes[root.left];
  const TreeNode& r = t.nodes[root.right];
  EXPECT_TRUE(l.is_leaf());
  EXPECT_TRUE(r.is_leaf());
  EXPECT_EQ(l.value, 0.0);
  EXPECT_EQ(l.cover, 2.0);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.cover, 2.0);
}

TEST(FitTree, PureRootIsLeaf) {
  const Matrix x = make_matrix(3, 2, {1, 2, 3, 4, 5, 6});
  Rng rng(1);
  const Tree t = fit_tree(x, std::vector<int>{1, 1, 1}, TreeParams{}, rng);
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_EQ(t.nodes[0].value, 1.0);
}

TEST(FitTree, ConstantFeaturesGiveFractionLeaf) {
  const Matrix x(8, 3, 2.5);
  Rng rng(1);
  const Tree t = fit_tree(x, std::vector<int>{1, 0, 0, 1, 0, 0, 1, 0}, TreeParams{}, rng);
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_DOUBLE_EQ(t.nodes[0].value, 3.0 / 8.0);
  EXPECT_EQ(t.nodes[0].cover, 8.0);
}

TEST(FitTree, TiesPickLowestFeature) {
  // Columns 0 and 1 are identical, so both give the same best split.
  const Matrix x = make_matrix(4, 2, {0, 0, 1, 1, 10, 10, 11, 11});
  Rng rng(3);
  const Tree t = fit_tree(x, std::vector<int>{0, 0, 1, 1}, TreeParams{2, 2}, rng);
  EXPECT_EQ(t.nodes[0].feature, 0);
}

// Cover-weighted Gini, n_l*g_l + n_r*g_r, written from the definition.
double split_cost(const Matrix& x, std::span<const int> y, std::size_t f,
                  double thr) {
  double nl = 0, pl = 0, nr = 0, pr = 0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    if (x(r, f) <= thr) {
      nl += 1;
      pl += y[r];
    } else {
      nr += 1;
      pr += y[r];
    }
  }
  auto g = [](double p, double n) { return n == 0 ? 0.0 : n * gini_impurity(p, n - p); };
  return g(pl, nl) + g(pr, nr);
}

TEST(FitTree, RootSplitMatchesExhaustiveEnumeration) {
  std::mt19937_64 gen(2024);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 30)(gen);
    const std::size_t p = std::uniform_int_distribution<std::size_t>(1, 4)(gen);
    Matrix x(n, p);
    std::vector<int> y(n);
    std::uniform_int_distribution<int> small(0, 6);  // many ties
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < p; ++c) x(r, c) = small(gen);
      y[r] = static_cast<int>(gen() & 1);
    }
    const std::size_t min_leaf = 2;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < p; ++f) {
      std::vector<double> vals;
      for (std::size_t r = 0; r < n; ++r) vals.push_back(x(r, f));
      std::ranges::sort(vals);
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        const double thr = (vals[i] + vals[i + 1]) / 2.0;
        std::size_t left = 0;
        for (std::size_t r = 0; r < n; ++r) left += x(r, f) <= thr;
        if (left < min_leaf || n - left < min_leaf) continue;
        best = std::min(best, split_cost(x, y, f, thr));
      }
    }
    Rng rng(trial);
    const Tree t = fit_tree(x, y, TreeParams{min_leaf, p}, rng);
    double pos = 0;
    for (int v : y) pos += v;
    const double parent = n * gini_impurity(pos, n - pos);
    if (t.nodes[0].is_leaf()) {
      // No admissible split lowers impurity.
      EXPECT_TRUE(!(best < parent - 1e-9)) << "trial " << trial;
      continue;
    }
    const double chosen = split_cost(x, y, t.nodes[0].feature, t.nodes[0].threshold);
    EXPECT_NEAR(chosen, best, 1e-9) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

Matrix noisy_data(std::size_t n, std::size_t p, std::uint64_t seed,
                  std::vector<int>& y) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Matrix x(n, p);
  y.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    y[r] = static_cast<int>(r % 2);
    for (std::size_t c = 0; c < p; ++c) x(r, c) = normal(gen) + (c == 0 ? y[r] : 0);
  }
  return x;
}

void check_covers(const Tree& t, const Matrix& x, std::span<const std::size_t> rows,
                  std::size_t min_leaf) {
  for (const TreeNode& node : t.nodes) {
    if (!node.is_leaf()) {
      EXPECT_EQ(t.nodes[node.left].cover + t.nodes[node.right].cover, node.cover);
    }
  }
  std::vector<double> reached(t.nodes.size(), 0.0);
  for (std::size_t r : rows) {
    const int leaf = t.leaf_index(x.row(r));
    EXPECT_GE(t.nodes[leaf].cover, static_cast<double>(min_leaf));
    reached[leaf] += 1;
  }
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    if (t.nodes[i].is_leaf()) {
      EXPECT_EQ(reached[i], t.nodes[i].cover);
    }
  }
}

TEST(FitTree, CoversAreConsistentWithRouting) {
  std::vector<int> y;
  const Matrix x = noisy_data(200, 6, 5, y);
  for (std::size_t min_leaf : {1u, 2u, 5u}) {
    Rng rng(min_leaf);
    std::vector<std::size_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), 0);
    const Tree t = fit_tree(x, y, rows, TreeParams{min_leaf, 0}, rng);
    EXPECT_GT(t.leaf_count(), 1u);
    check_covers(t, x, rows, min_leaf);
  }
}

TEST(FitForest, SingleTreeWithoutBootstrapMatchesFitTree) {
  std::vector<int> y;
  const Matrix x = noisy_data(60, 5, 9, y);
  ForestParams params;
  params.n_trees = 1;
  params.bootstrap = false;
  const ForestModel forest = fit_forest(x, y, params, 77);
  Rng rng = make_rng(77, {0});
  const Tree tree = fit_tree(x, y, TreeParams{params.min_leaf_size, 0}, rng);
  EXPECT_EQ(forest.trees[0], tree);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    EXPECT_EQ(forest.predict(x.row(r)), tree.predict(x.row(r)));
  }
}

TEST(FitForest, Deterministic) {
  std::vector<int> y;
  const Matrix x = noisy_data(80, 4, 1, y);
  ForestParams params;
  params.n_trees = 15;
  const ForestModel a = fit_forest(x, y, params, 5);
  const ForestModel b = fit_forest(x, y, params, 5);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == fit_forest(x, y, params, 6));
}

TEST(FitForest, SerialAndParallelBitIdentical) {
  std::vector<int> y;
  const Matrix x = noisy_data(120, 7, 4, y);
  ForestParams params;
  params.n_trees = 24;
  EXPECT_EQ(fit_forest(x, y, params, 3, Execution::kSerial),
            fit_forest(x, y, params, 3, Execution::kParallel));
}

TEST(FitForest, BootstrapCoversMatchResampledRows) {
  std::vector<int> y;
  const Matrix x = noisy_data(50, 3, 2, y);
  ForestParams params;
  params.n_trees = 5;
  const ForestModel f = fit_forest(x, y, params, 10);
  for (std::size_t t = 0; t < f.trees.size(); ++t) {
    Rng rng = make_rng(10, {t});
    std::uniform_int_distribution<std::size_t> draw(0, x.rows() - 1);
    std::vector<std::size_t> rows(x.rows());
    for (auto& r : rows) r = draw(rng);
    EXPECT_EQ(f.trees[t].nodes[0].cover, 50.0);
    check_covers(f.trees[t], x, rows, params.min_leaf_size);
  }
}

TEST(FitForest, ConstantPositiveLabels) {
  const Matrix x = make_matrix(4, 2, {1, 2, 3, 4, 5, 6, 7, 8});
  ForestParams params;
  params.n_trees = 7;
  const ForestModel f = fit_forest(x, std::vector<int>{1, 1, 1, 1}, params, 1);
  for (double v : {-100.0, 0.0, 3.0, 1e6}) {
    const std::vector<double> q{v, v};
    EXPECT_EQ(f.predict(q), 1.0);
  }
}

Tree leaf(double value, double cover = 1.0) {
  Tree t;
  t.nodes.push_back({-1, 0.0, -1, -1, cover, value});
  return t;
}

TEST(ForestPredict, AveragesTrees) {
  ForestModel f;
  f.n_features = 1;
  f.trees = {leaf(0.2), leaf(0.6)};
  const std::vector<double> q{0.0};
  EXPECT_DOUBLE_EQ(f.predict(q), 0.4);
  EXPECT_EQ(f.predict_label(q), 0);
  f.trees = {leaf(1.0), leaf(1.0), leaf(1.0)};
  EXPECT_EQ(f.predict(q), 1.0);
}

TEST(ForestPredict, DimensionMismatch) {
  ForestModel f;
  f.n_features = 3;
  f.trees = {leaf(0.5)};
  EXPECT_THROW(f.predict(std::vector<double>{1.0}), InvalidArgument);
  EXPECT_THROW(f.predict(std::vector<double>{}), InvalidArgument);
}

TEST(FitForest, InvalidParams) {
  const Matrix x(2, 1);
  ForestParams params;
  params.n_trees = 0;
  EXPECT_THROW(fit_forest(x, std::vector<int>{0, 1}, params, 1), InvalidArgument);
}

TEST(FeaturesPerSplit, DefaultIsCeilSqrt) {
  EXPECT_EQ(resolve_features_per_split(0, 93), 10u);
  EXPECT_EQ(resolve_features_per_split(0, 105), 11u);
  EXPECT_EQ(resolve_features_per_split(0, 12), 4u);
  EXPECT_EQ(resolve_features_per_split(50, 4), 4u);
}

TEST(Seeds, DerivationIsStableAndCoordinateSensitive) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {2}), derive_seed(1, {2, 0}));
  EXPECT_NE(derive_seed(1, {2}), derive_seed(2, {2}));
  EXPECT_NE(stream_tag("folds"), stream_tag("model"));
}

}  // namespace
}  // namespace cohortxai
