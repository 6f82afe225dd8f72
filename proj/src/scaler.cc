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

#include "cohortxai/scaler.h"

#include <cmath>

#include "cohortxai/error.h"

namespace cohortxai {

Scaler fit_scaler(const Matrix& train) {
  if (train.rows() == 0) throw InvalidArgument("fit_scaler: no rows");
  const std::size_t p = train.cols();
  const auto n = static_cast<double>(train.rows());
  Scaler s;
  s.mean.assign(p, 0.0);
  s.scale.assign(p, 0.0);
  for (std::size_t r = 0; r < train.rows(); ++r) {
    for (std::size_t j = 0; j < p; ++j) s.mean[j] += train(r, j);
  }
  for (double& m : s.mean) m /= n;
  for (std::size_t r = 0; r < train.rows(); ++r) {
    for (std::size_t j = 0; j < p; ++j) {
      const double d = train(r, j) - s.mean[j];
      s.scale[j] += d * d;
    }
  }
  for (double& v : s.scale) v = std::sqrt(v / n);
  return s;
}

void Scaler::transform_row(std::span<const double> in,
                           std::span<double> out) const {
  if (in.size() != mean.size() || out.size() != mean.size()) {
    throw InvalidArgument("scaler expects " + std::to_string(mean.size()) +
                          " features, got " + std::to_string(in.size()));
  }
  for (std::size_t j = 0; j < in.size(); ++j) {
    out[j] = scale[j] > 0.0 ? (in[j] - mean[j]) / scale[j] : 0.0;
  }
}

Matrix Scaler::transform(const Matrix& x) const {
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) transform_row(x.row(r), out.row(r));
  return out;
}

}  // namespace cohortxai
