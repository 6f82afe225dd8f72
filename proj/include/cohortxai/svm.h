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

#ifndef COHORTXAI_SVM_H_
#define COHORTXAI_SVM_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cohortxai/matrix.h"

namespace cohortxai {

struct SvmParams {
  double c = 1.0;
  // RBF width; unset selects default_gamma() of the training matrix.
  std::optional<double> gamma;
  double tol = 1e-3;
  int max_passes = 5;
  // Hard stop for pathological inputs; the trace records whether it hit.
  std::size_t max_sweeps = 100000;
};

// Soft-margin RBF SVM: f(x) = sum_i alpha_i y_i k(x_i, x) + b with
// k(u, v) = exp(-gamma |u - v|^2). Only alpha_i > 0 are retained.
struct SvmModel {
  Matrix support_vectors;
  std::vector<double> alpha;
  std::vector<int> labels;  // +1 / -1
  double bias = 0.0;
  double gamma = 1.0;
  double c = 1.0;
  std::size_t n_features = 0;

  double decision(std::span<const double> x) const;
  int predict_label(std::span<const double> x) const {
    return decision(x) >= 0.0 ? 1 : 0;
  }
  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

struct SvmTrace {
  std::vector<double> alpha;  // all n multipliers, training order
  std::vector<double> dual_objective;  // after every sweep
  std::size_t sweeps = 0;
  std::size_t pair_updates = 0;
  bool converged = false;
};

double rbf_kernel(std::span<const double> u, std::span<const double> v,
                  double gamma);

// Gamma default: 1 / (p * mean per-feature population variance), or 1 when the
// variance is zero.
double default_gamma(const Matrix& x);

// Sequential minimal optimization on the dual. A sweep visits every index;
// an index violating the KKT conditions by more than tol is paired with the
// most violating partner and the pair is solved analytically. Training stops
// after max_passes consecutive sweeps without a violation.
// y must be +1/-1 with both classes present; c and gamma must be positive.
SvmModel fit_svm_smo(const Matrix& x, std::span<const int> y,
                     const SvmParams& params, SvmTrace* trace = nullptr);

// Maps 0/1 labels to -1/+1.
std::vector<int> to_signed_labels(std::span<const int> y01);

}  // namespace cohortxai

#endif  // COHORTXAI_SVM_H_
