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

#include <cmath>
#include <random>

#include "cohortxai/error.h"
#include "cohortxai/mlp.h"
#include "cohortxai/scaler.h"
#include "test_util.h"

namespace cohortxai {
namespace {

using testing::make_matrix;

TEST(Scaler, TwoPointColumn) {
  const Matrix x = make_matrix(2, 1, {1.0, 3.0});
  const Scaler s = fit_scaler(x);
  EXPECT_EQ(s.mean[0], 2.0);
  EXPECT_EQ(s.scale[0], 1.0);
  const Matrix t = s.transform(x);
  EXPECT_EQ(t(0, 0), -1.0);
  EXPECT_EQ(t(1, 0), 1.0);
}

TEST(Scaler, ConstantColumnMapsToZero) {
  const Matrix x = make_matrix(3, 2, {4.0, 1.0, 4.0, 2.0, 4.0, 3.0});
  const Matrix t = fit_scaler(x).transform(x);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(t(r, 0), 0.0);
  const std::vector<double> q{99.0, 2.0};
  std::vector<double> out(2);
  fit_scaler(x).transform_row(q, out);
  EXPECT_EQ(out[0], 0.0);
}

TEST(Scaler, TrainingColumnsCentered) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> normal(5.0, 3.0);
  Matrix x(57, 4);
  for (double& v : x.data()) v = normal(gen);
  const Matrix t = fit_scaler(x).transform(x);
  for (std::size_t c = 0; c < 4; ++c) {
    double mean = 0.0, sq = 0.0;
    for (std::size_t r = 0; r < 57; ++r) mean += t(r, c);
    mean /= 57;
    for (std::size_t r = 0; r < 57; ++r) sq += (t(r, c) - mean) * (t(r, c) - mean);
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(sq / 57, 1.0, 1e-12);
  }
}

MlpModel zero_model(std::size_t p) {
  MlpHyper h;
  MlpModel m = init_mlp(p, h);
  std::vector<double> zeros(m.parameter_count(), 0.0);
  assign_parameters(m, zeros);
  return m;
}

TEST(MlpPredict, BiasOnly) {
  MlpModel m = zero_model(3);
  m.output_bias = 0.7;
  const std::vector<double> x{1.0, -2.0, 3.0};
  EXPECT_EQ(m.predict(x), 0.7);
  EXPECT_EQ(m.predict_label(x), 1);
}

TEST(MlpPredict, ReluBlocksNegativePreactivations) {
  MlpModel m = zero_model(2);
  // First layer: every unit sees -(x0 + x1) - 1, negative for positive x.
  for (std::size_t o = 0; o < m.hidden[0].weights.rows(); ++o) {
    m.hidden[0].weights(o, 0) = -1.0;
    m.hidden[0].weights(o, 1) = -1.0;
    m.hidden[0].bias[o] = -1.0;
    m.hidden[1].weights(o % m.hidden[1].weights.rows(), o) = 5.0;
  }
  for (std::size_t o = 0; o < m.hidden[1].bias.size(); ++o) {
    m.hidden[1].bias[o] = 0.01 * static_cast<double>(o);
    m.output_weights[o] = 1.0 + static_cast<double>(o);
  }
  m.output_bias = -0.2;
  double expected = m.output_bias;
  for (std::size_t o = 0; o < m.hidden[1].bias.size(); ++o) {
    expected += m.output_weights[o] * std::max(0.0, m.hidden[1].bias[o]);
  }
  EXPECT_DOUBLE_EQ(m.predict(std::vector<double>{0.5, 2.0}), expected);
  EXPECT_DOUBLE_EQ(m.predict(std::vector<double>{3.0, 0.1}), expected);
}

TEST(MlpPredict, DimensionMismatch) {
  const MlpModel m = init_mlp(4, MlpHyper{});
  EXPECT_THROW(m.predict(std::vector<double>{1.0}), InvalidArgument);
}

TEST(MlpShape, ParameterCount) {
  const MlpModel m = init_mlp(10, MlpHyper{});
  EXPECT_EQ(m.parameter_count(), (10 * 32 + 32) + (32 * 32 + 32) + (32 + 1));
  EXPECT_EQ(flatten_parameters(m).size(), m.parameter_count());
}

TEST(FitMlp, ZeroEpochsReturnsInitialization) {
  const Matrix x = make_matrix(2, 2, {0, 1, 1, 0});
  MlpHyper h;
  h.epochs = 0;
  h.seed = 12;
  EXPECT_EQ(fit_mlp(x, std::vector<int>{0, 1}, h), init_mlp(2, h));
}

TEST(FitMlp, OverfitsSinglePoint) {
  const Matrix x = make_matrix(1, 3, {0.3, -0.5, 1.2});
  MlpHyper h;
  h.epochs = 500;
  h.seed = 2;
  const MlpModel m = fit_mlp(x, std::vector<int>{1}, h);
  const double r = m.predict(x.row(0)) - 1.0;
  EXPECT_LT(r * r, 1e-3);
}

TEST(FitMlp, Deterministic) {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> normal;
  Matrix x(40, 3);
  std::vector<int> y(40);
  for (std::size_t r = 0; r < 40; ++r) {
    y[r] = static_cast<int>(r % 2);
    for (std::size_t c = 0; c < 3; ++c) x(r, c) = normal(gen);
  }
  MlpHyper h;
  h.epochs = 5;
  h.seed = 7;
  EXPECT_EQ(fit_mlp(x, y, h), fit_mlp(x, y, h));
}

// Central differences on the mean squared error; relative error per
// coordinate with a floor on the denominator for exactly-flat directions.
TEST(MlpGradient, MatchesCentralDifferences) {
  std::mt19937_64 gen(123);
  std::normal_distribution<double> normal;
  const double eps = 1e-5;
  double worst = 0.0;
  for (int draw = 0; draw < 12; ++draw) {
    const std::size_t p = 2 + draw % 4;
    const std::size_t n = 3 + draw % 5;
    MlpHyper h;
    h.seed = 1000 + draw;
    h.hidden_width = 6 + draw % 3;
    MlpModel m = init_mlp(p, h);
    std::vector<double> theta = flatten_parameters(m);
    for (double& t : theta) t += 0.1 * normal(gen);
    assign_parameters(m, theta);
    Matrix x(n, p);
    for (double& v : x.data()) v = normal(gen);
    std::vector<double> y(n);
    for (double& v : y) v = static_cast<double>(gen() & 1);
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);

    std::vector<double> grad;
    mlp_loss(m, x, y, rows, &grad);
    ASSERT_EQ(grad.size(), theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
      std::vector<double> t = theta;
      t[k] = theta[k] + eps;
      assign_parameters(m, t);
      const double up = mlp_loss(m, x, y, rows);
      t[k] = theta[k] - eps;
      assign_parameters(m, t);
      const double down = mlp_loss(m, x, y, rows);
      const double fd = (up - down) / (2 * eps);
      const double rel = std::abs(grad[k] - fd) / std::max(std::abs(grad[k]) + std::abs(fd), 1e-7);
      worst = std::max(worst, rel);
      EXPECT_LT(rel, 1e-4) << "draw " << draw << " parameter " << k
                           << " analytic " << grad[k] << " numeric " << fd;
    }
    assign_parameters(m, theta);
  }
  std::printf("worst relative gradient error %.3g\n", worst);
}

}  // namespace
}  // namespace cohortxai
