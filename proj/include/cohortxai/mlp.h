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

#ifndef COHORTXAI_MLP_H_
#define COHORTXAI_MLP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cohortxai/matrix.h"

namespace cohortxai {

struct MlpHyper {
  double learning_rate = 0.01;
  std::size_t epochs = 200;
  std::size_t batch = 32;
  std::uint64_t seed = 0;
  std::size_t hidden_width = 32;
  // 2: two ReLU hidden layers. 1: a single hidden layer.
  std::size_t hidden_layers = 2;
};

struct DenseLayer {
  Matrix weights;  // out x in
  std::vector<double> bias;
  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// ReLU hidden layers followed by an affine scalar head trained as a
// regressor on the 0/1 label.
struct MlpModel {
  std::vector<DenseLayer> hidden;
  std::vector<double> output_weights;
  double output_bias = 0.0;
  std::size_t n_features = 0;

  double predict(std::span<const double> x) const;
  int predict_label(std::span<const double> x) const {
    return predict(x) >= 0.5 ? 1 : 0;
  }
  std::size_t parameter_count() const;
  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

// Glorot-uniform weights, zero biases.
MlpModel init_mlp(std::size_t n_features, const MlpHyper& hyper);

// Parameter order: per hidden layer weights (row-major) then bias, then the
// output weights, then the output bias.
std::vector<double> flatten_parameters(const MlpModel& model);
void assign_parameters(MlpModel& model, std::span<const double> flat);

// Mean over `rows` of (f(x) - y)^2. When `gradient` is non-null it receives
// d loss / d parameter in flatten_parameters order.
double mlp_loss(const MlpModel& model, const Matrix& x,
                std::span<const double> y, std::span<const std::size_t> rows,
                std::vector<double>* gradient = nullptr);

// Mini-batch SGD on mean squared error. Throws TrainingError naming the epoch
// if the loss stops being finite.
MlpModel fit_mlp(const Matrix& x, std::span<const int> y,
                 const MlpHyper& hyper);

}  // namespace cohortxai

#endif  // COHORTXAI_MLP_H_
