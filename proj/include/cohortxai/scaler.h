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

#ifndef COHORTXAI_SCALER_H_
#define COHORTXAI_SCALER_H_

#include <span>
#include <vector>

#include "cohortxai/matrix.h"

namespace cohortxai {

// Per-feature standardization fit on training rows only.
struct Scaler {
  std::vector<double> mean;
  // Population standard deviation. Zero for constant features, which then
  // transform to 0.
  std::vector<double> scale;

  Matrix transform(const Matrix& x) const;
  void transform_row(std::span<const double> in, std::span<double> out) const;
};

Scaler fit_scaler(const Matrix& train);

}  // namespace cohortxai

#endif  // COHORTXAI_SCALER_H_
