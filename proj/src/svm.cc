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

#include "cohortxai/svm.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cohortxai/error.h"

namespace cohortxai {
namespace {

constexpr double kTau = 1e-12;  // floor on the pair curvature

// Dual state in LIBSVM form: minimize f(a) = 1/2 a'Qa - sum(a) subject to
// 0 <= a <= C and y'a = 0, with Q_ij = y_i y_j K_ij and gradient G = Qa - 1.
// "Up" indices can move along +y_i, "low" ones along -y_i.
class SmoSolver {
 public:
  SmoSolver(const Matrix& x, std::span<const int> y, double c, double gamma)
      : n_(x.rows()), y_(y), c_(c), kernel_(n_, n_), alpha_(n_, 0.0),
        grad_(n_, -1.0) {
    for (std::size_t i = 0; i < n_; ++i) {
      kernel_(i, i) = 1.0;
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double k = rbf_kernel(x.row(i), x.row(j), gamma);
        kernel_(i, j) = k;
        kernel_(j, i) = k;
      }
    }
  }

  void solve(const SvmParams& params, SvmTrace& trace) {
    int clean_passes = 0;
    while (clean_passes < params.max_passes && trace.sweeps < params.max_sweeps) {
      bool changed = false;
      for (std::size_t i = 0; i < n_; ++i) {
        const Extremes e = extremes();
        if (!e.violated(params.tol)) break;
        std::size_t up, low;
        if (in_up(i) && score(i) > e.min_low + params.tol) {
          up = i;
          low = e.low;
        } else if (in_low(i) && score(i) < e.max_up - params.tol) {
          up = e.up;
          low = i;
        } else {
          continue;
        }
        if (take_step(up, low)) {
          changed = true;
          ++trace.pair_updates;
        }
      }
      ++trace.sweeps;
      trace.dual_objective.push_back(dual_objective());
      clean_passes = changed ? 0 : clean_passes + 1;
    }
    trace.converged = !extremes().violated(params.tol);
    trace.alpha = alpha_;
  }

  double bias() const {
    double sum = 0.0;
    std::size_t free = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha_[i] > 0.0 && alpha_[i] < c_) {
        sum += score(i);
        ++free;
      }
    }
    if (free > 0) return sum / static_cast<double>(free);
    const Extremes e = extremes();
    if (!e.has_up) return e.min_low;
    if (!e.has_low) return e.max_up;
    return 0.5 * (e.max_up + e.min_low);
  }

  const std::vector<double>& alpha() const { return alpha_; }

 private:
  struct Extremes {
    double max_up = -std::numeric_limits<double>::infinity();
    double min_low = std::numeric_limits<double>::infinity();
    std::size_t up = 0;
    std::size_t low = 0;
    bool has_up = false;
    bool has_low = false;

    bool violated(double tol) const {
      return has_up && has_low && max_up - min_low > tol;
    }
  };

  bool in_up(std::size_t i) const {
    return y_[i] > 0 ? alpha_[i] < c_ : alpha_[i] > 0.0;
  }
  bool in_low(std::size_t i) const {
    return y_[i] > 0 ? alpha_[i] > 0.0 : alpha_[i] < c_;
  }
  double score(std::size_t i) const { return -y_[i] * grad_[i]; }

  Extremes extremes() const {
    Extremes e;
    for (std::size_t i = 0; i < n_; ++i) {
      const double s = score(i);
      if (in_up(i) && s > e.max_up) {
        e.max_up = s;
        e.up = i;
        e.has_up = true;
      }
      if (in_low(i) && s < e.min_low) {
        e.min_low = s;
        e.low = i;
        e.has_low = true;
      }
    }
    return e;
  }

  // Moves alpha_up by +y_up t and alpha_low by -y_low t, t >= 0, minimizing
  // f along that feasible direction.
  bool take_step(std::size_t up, std::size_t low) {
    if (up == low) return false;
    const double eta = std::max(
        kernel_(up, up) + kernel_(low, low) - 2.0 * kernel_(up, low), kTau);
    const double step = (score(up) - score(low)) / eta;
    if (!(step > 0.0)) return false;
    const double room_up = y_[up] > 0 ? c_ - alpha_[up] : alpha_[up];
    const double room_low = y_[low] > 0 ? alpha_[low] : c_ - alpha_[low];
    const double t = std::min({step, room_up, room_low});
    if (!(t > 0.0)) return false;

    alpha_[up] += y_[up] * t;
    alpha_[low] -= y_[low] * t;
    if (t == room_up) alpha_[up] = y_[up] > 0 ? c_ : 0.0;
    if (t == room_low) alpha_[low] = y_[low] > 0 ? 0.0 : c_;
    alpha_[up] = std::clamp(alpha_[up], 0.0, c_);
    alpha_[low] = std::clamp(alpha_[low], 0.0, c_);

    for (std::size_t k = 0; k < n_; ++k) {
      grad_[k] += y_[k] * t * (kernel_(k, up) - kernel_(k, low));
    }
    return true;
  }

  // 1/2 sum_i a_i (1 - G_i), the dual objective in maximization form.
  double dual_objective() const {
    double d = 0.0;
    for (std::size_t i = 0; i < n_; ++i) d += alpha_[i] * (1.0 - grad_[i]);
    return 0.5 * d;
  }

  std::size_t n_;
  std::span<const int> y_;
  double c_;
  Matrix kernel_;
  std::vector<double> alpha_;
  std::vector<double> grad_;
};

}  // namespace

double rbf_kernel(std::span<const double> u, std::span<const double> v,
                  double gamma) {
  double d2 = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double d = u[j] - v[j];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double default_gamma(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0) return 1.0;
  const auto n = static_cast<double>(x.rows());
  double total_variance = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, j);
    mean /= n;
    double var = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const double d = x(r, j) - mean;
      var += d * d;
    }
    total_variance += var / n;
  }
  // p * mean variance == sum of variances.
  return total_variance > 0.0 ? 1.0 / total_variance : 1.0;
}

double SvmModel::decision(std::span<const double> x) const {
  if (x.size() != n_features) {
    throw InvalidArgument("svm expects " + std::to_string(n_features) +
                          " features, got " + std::to_string(x.size()));
  }
  double f = bias;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    f += alpha[i] * labels[i] * rbf_kernel(support_vectors.row(i), x, gamma);
  }
  return f;
}

std::vector<int> to_signed_labels(std::span<const int> y01) {
  std::vector<int> out(y01.size());
  std::ranges::transform(y01, out.begin(), [](int y) { return y == 1 ? 1 : -1; });
  return out;
}

SvmModel fit_svm_smo(const Matrix& x, std::span<const int> y,
                     const SvmParams& params, SvmTrace* trace) {
  if (x.rows() == 0) throw InvalidArgument("fit_svm_smo: no training rows");
  if (y.size() != x.rows()) {
    throw InvalidArgument("fit_svm_smo: label count does not match rows");
  }
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw InvalidArgument("fit_svm_smo: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) {
    throw InvalidArgument("fit_svm_smo: both classes must be present");
  }
  if (!(params.c > 0.0)) throw InvalidArgument("fit_svm_smo: C must be positive");
  const double gamma = params.gamma.value_or(default_gamma(x));
  if (!(gamma > 0.0)) {
    throw InvalidArgument("fit_svm_smo: gamma must be positive");
  }
  if (!(params.tol > 0.0)) {
    throw InvalidArgument("fit_svm_smo: tol must be positive");
  }

  SvmTrace local;
  SvmTrace& t = trace ? *trace : local;
  t = SvmTrace{};
  SmoSolver solver(x, y, params.c, gamma);
  solver.solve(params, t);

  SvmModel model;
  model.bias = solver.bias();
  model.gamma = gamma;
  model.c = params.c;
  model.n_features = x.cols();
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (solver.alpha()[i] > 0.0) kept.push_back(i);
  }
  model.support_vectors = select_rows(x, kept);
  for (std::size_t i : kept) {
    model.alpha.push_back(solver.alpha()[i]);
    model.labels.push_back(y[i]);
  }
  return model;
}

}  // namespace cohortxai
