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

#ifndef COHORTXAI_TREE_H_
#define COHORTXAI_TREE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "cohortxai/matrix.h"
#include "cohortxai/random.h"

namespace cohortxai {

// A node of a binary decision tree. Internal nodes send x to `left` when
// x[feature] <= threshold. Leaves hold the fraction of positive training
// samples that reached them. `cover` is the training-sample count at the
// node (bootstrap duplicates counted).
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double cover = 0.0;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Node 0 is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  int leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const {
    return nodes[leaf_index(x)].value;
  }
  std::size_t depth() const;
  std::size_t leaf_count() const;
  friend bool operator==(const Tree&, const Tree&) = default;
};

struct TreeParams {
  std::size_t min_leaf_size = 2;
  // Candidate features sampled per node; 0 means ceil(sqrt(p)).
  std::size_t features_per_split = 0;
};

// 1 - p+^2 - p-^2. Throws InvalidArgument on a zero total.
double gini_impurity(double positives, double negatives);

std::size_t resolve_features_per_split(std::size_t requested, std::size_t p);

// Greedy CART on the rows listed in `rows` (repeats allowed). Each node
// samples features_per_split candidate features without replacement and takes
// the (feature, midpoint threshold) with the lowest cover-weighted child Gini,
// ties going to the lower feature index, then the lower threshold. A node
// stays a leaf when pure, when no admissible split strictly lowers impurity,
// or when every split would leave a child below min_leaf_size.
Tree fit_tree(const Matrix& x, std::span<const int> y,
              std::span<const std::size_t> rows, const TreeParams& params,
              Rng& rng);

// Fits on every row.
Tree fit_tree(const Matrix& x, std::span<const int> y, const TreeParams& params,
              Rng& rng);

}  // namespace cohortxai

#endif  // COHORTXAI_TREE_H_
