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

#include "cohortxai/mlp.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cohortxai/error.h"
#include "cohortxai/random.h"

namespace cohortxai {
namespace {

// Same shape as the model; used as the gradient accumulator.
MlpModel zeros_like(const MlpModel& model) {
  MlpModel g;
  g.n_features = model.n_features;
  for (const auto& layer : model.hidden) {
    g.hidden.push_back({Matrix(layer.weights.rows(), layer.weights.cols()),
                        std::vector<double>(layer.bias.size(), 0.0)});
  }
  g.output_weights.assign(model.output_weights.size(), 0.0);
  return g;
}

struct Activations {
  std::vector<std::vector<double>> pre;   // per hidden layer
  std::vector<std::vector<double>> post;  // ReLU outputs
  double output = 0.0;
};

void forward(const MlpModel& model, std::span<const double> x,
             Activations& act) {
  act.pre.resize(model.hidden.size());
  act.post.resize(model.hidden.size());
  std::span<const double> input = x;
  for (std::size_t l = 0; l < model.hidden.size(); ++l) {
    const DenseLayer& layer = model.hidden[l];
    auto& z = act.pre[l];
    auto& h = act.post[l];
    z.assign(layer.bias.begin(), layer.bias.end());
    for (std::size_t o = 0; o < z.size(); ++o) {
      const auto w = layer.weights.row(o);
      double sum = 0.0;
      for (std::size_t i = 0; i < input.size(); ++i) sum += w[i] * input[i];
      z[o] += sum;
    }
    h.resize(z.size());
    for (std::size_t o = 0; o < z.size(); ++o) h[o] = z[o] > 0.0 ? z[o] : 0.0;
    input = h;
  }
  double out = model.output_bias;
  for (std::size_t i = 0; i < input.size(); ++i) {
    out += model.output_weights[i] * input[i];
  }
  act.output = out;
}

// Adds d(scale * (f(x) - y)^2) / d theta into `grad` and returns
// (f(x) - y)^2.
double backward(const MlpModel& model, std::span<const double> x, double y,
                double scale, Activations& act, MlpModel& grad) {
  forward(model, x, act);
  const double residual = act.output - y;
  const double d_out = 2.0 * residual * scale;
  const std::size_t layers = model.hidden.size();

  grad.output_bias += d_out;
  std::vector<double> delta(model.output_weights.size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    grad.output_weights[i] += d_out * act.post[layers - 1][i];
    delta[i] = act.pre[layers - 1][i] > 0.0 ? d_out * model.output_weights[i]
                                            : 0.0;
  }
  for (std::size_t l = layers; l-- > 0;) {
    const DenseLayer& layer = model.hidden[l];
    DenseLayer& g = grad.hidden[l];
    const std::span<const double> input =
        l == 0 ? x : std::span<const double>(act.post[l - 1]);
    for (std::size_t o = 0; o < delta.size(); ++o) {
      if (delta[o] == 0.0) continue;
      g.bias[o] += delta[o];
      auto gw = g.weights.row(o);
      for (std::size_t i = 0; i < input.size(); ++i) gw[i] += delta[o] * input[i];
    }
    if (l == 0) break;
    std::vector<double> prev(layer.weights.cols(), 0.0);
    for (std::size_t o = 0; o < delta.size(); ++o) {
      if (delta[o] == 0.0) continue;
      const auto w = layer.weights.row(o);
      for (std::size_t i = 0; i < prev.size(); ++i) prev[i] += w[i] * delta[o];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (act.pre[l - 1][i] <= 0.0) prev[i] = 0.0;
    }
    delta = std::move(prev);
  }
  return residual * residual;
}

void sgd_step(MlpModel& model, const MlpModel& grad, double lr) {
  for (std::size_t l = 0; l < model.hidden.size(); ++l) {
    auto w = model.hidden[l].weights.data();
    const auto gw = grad.hidden[l].weights.data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * gw[i];
    auto& b = model.hidden[l].bias;
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= lr * grad.hidden[l].bias[i];
  }
  for (std::size_t i = 0; i < model.output_weights.size(); ++i) {
    model.output_weights[i] -= lr * grad.output_weights[i];
  }
  model.output_bias -= lr * grad.output_bias;
}

void check_input(const MlpModel& model, const Matrix& x) {
  if (x.cols() != model.n_features) {
    throw InvalidArgument("mlp expects " + std::to_string(model.n_features) +
                          " features, got " + std::to_string(x.cols()));
  }
}

}  // namespace

double MlpModel::predict(std::span<const double> x) const {
  if (x.size() != n_features) {
    throw InvalidArgument("mlp expects " + std::to_string(n_features) +
                          " features, got " + std::to_string(x.size()));
  }
  Activations act;
  forward(*this, x, act);
  return act.output;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t count = output_weights.size() + 1;
  for (const auto& layer : hidden) {
    count += layer.weights.data().size() + layer.bias.size();
  }
  return count;
}

MlpModel init_mlp(std::size_t n_features, const MlpHyper& hyper) {
  if (hyper.hidden_layers < 1 || hyper.hidden_layers > 2) {
    throw InvalidArgument("mlp supports one or two hidden layers");
  }
  if (hyper.hidden_width == 0 || n_features == 0) {
    throw InvalidArgument("mlp needs non-zero input and hidden widths");
  }
  Rng rng = make_rng(hyper.seed, {stream_tag("mlp-init")});
  auto glorot = [&](std::size_t fan_in, std::size_t fan_out) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    return std::uniform_real_distribution<double>(-limit, limit);
  };
  MlpModel model;
  model.n_features = n_features;
  std::size_t fan_in = n_features;
  for (std::size_t l = 0; l < hyper.hidden_layers; ++l) {
    DenseLayer layer{Matrix(hyper.hidden_width, fan_in),
                     std::vector<double>(hyper.hidden_width, 0.0)};
    auto dist = glorot(fan_in, hyper.hidden_width);
    for (double& w : layer.weights.data()) w = dist(rng);
    model.hidden.push_back(std::move(layer));
    fan_in = hyper.hidden_width;
  }
  auto dist = glorot(fan_in, 1);
  model.output_weights.resize(fan_in);
  for (double& w : model.output_weights) w = dist(rng);
  return model;
}

std::vector<double> flatten_parameters(const MlpModel& model) {
  std::vector<double> flat;
  flat.reserve(model.parameter_count());
  for (const auto& layer : model.hidden) {
    flat.insert(flat.end(), layer.weights.data().begin(),
                layer.weights.data().end());
    flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
  }
  flat.insert(flat.end(), model.output_weights.begin(),
              model.output_weights.end());
  flat.push_back(model.output_bias);
  return flat;
}

void assign_parameters(MlpModel& model, std::span<const double> flat) {
  if (flat.size() != model.parameter_count()) {
    throw InvalidArgument("parameter vector has the wrong length");
  }
  std::size_t k = 0;
  for (auto& layer : model.hidden) {
    for (double& w : layer.weights.data()) w = flat[k++];
    for (double& b : layer.bias) b = flat[k++];
  }
  for (double& w : model.output_weights) w = flat[k++];
  model.output_bias = flat[k];
}

double mlp_loss(const MlpModel& model, const Matrix& x,
                std::span<const double> y, std::span<const std::size_t> rows,
                std::vector<double>* gradient) {
  check_input(model, x);
  if (rows.empty()) throw InvalidArgument("mlp_loss: no rows");
  const double scale = 1.0 / static_cast<double>(rows.size());
  MlpModel grad = zeros_like(model);
  Activations act;
  double loss = 0.0;
  for (std::size_t r : rows) {
    loss += backward(model, x.row(r), y[r], scale, act, grad);
  }
  if (gradient) *gradient = flatten_parameters(grad);
  return loss * scale;
}

MlpModel fit_mlp(const Matrix& x, std::span<const int> y,
                 const MlpHyper& hyper) {
  if (x.rows() == 0) throw InvalidArgument("fit_mlp: no training rows");
  if (y.size() != x.rows()) {
    throw InvalidArgument("fit_mlp: label count does not match rows");
  }
  if (hyper.batch == 0) throw InvalidArgument("fit_mlp: batch must be >= 1");
  MlpModel model = init_mlp(x.cols(), hyper);
  Rng rng = make_rng(hyper.seed, {stream_tag("mlp-shuffle")});
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  MlpModel grad = zeros_like(model);
  Activations act;

  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += hyper.batch) {
      const std::size_t end = std::min(order.size(), start + hyper.batch);
      const double scale = 1.0 / static_cast<double>(end - start);
      grad = zeros_like(model);
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t r = order[i];
        epoch_loss += backward(model, x.row(r), static_cast<double>(y[r]),
                               scale, act, grad);
      }
      sgd_step(model, grad, hyper.learning_rate);
    }
    epoch_loss /= static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss)) {
      throw TrainingError("mlp training diverged at epoch " +
                          std::to_string(epoch + 1) + " (loss not finite)");
    }
  }
  for (double v : flatten_parameters(model)) {
    if (!std::isfinite(v)) {
      throw TrainingError("mlp training produced non-finite parameters");
    }
  }
  return model;
}

}  // namespace cohortxai
