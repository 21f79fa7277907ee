/*
 * Copyright 2026 The uios Authors.
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

#include "uios/backbone.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "uios/errors.hpp"
#include "uios/losses.hpp"
#include "uios/random.hpp"

namespace uios {
namespace {

Matrix RandomBatch(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal(0.0, 1.5);
  return m;
}

TEST(Matmul, SmallProduct) {
  const Matrix a(2, 3, {1, 2, 3, 4, 5, 6});
  const Matrix b(3, 2, {7, 8, 9, 10, 11, 12});
  const Matrix c = matmul(a, b);
  EXPECT_EQ(c, Matrix(2, 2, {58, 64, 139, 154}));
  EXPECT_THROW(matmul(a, a), ShapeError);
}

TEST(Matrix, SelectRows) {
  const Matrix a(3, 2, {1, 2, 3, 4, 5, 6});
  const std::vector<std::size_t> idx{2, 0};
  EXPECT_EQ(a.select_rows(idx), Matrix(2, 2, {5, 6, 1, 2}));
}

TEST(MlpConfig, Validation) {
  MlpConfig cfg{.input_dim = 2, .hidden_dims = {4}, .output_dim = 3};
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.layer_widths(), (std::vector<std::size_t>{2, 4, 3}));
  cfg.hidden_dims = {4, 0};
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg.hidden_dims = {4};
  cfg.dropout_rate = 1.0;
  EXPECT_THROW(cfg.validate(), UsageError);
}

TEST(InitParams, HeScaleAndZeroBias) {
  MlpConfig cfg{.input_dim = 200, .hidden_dims = {300}, .output_dim = 5, .seed = 9};
  const MlpParams p = init_params(cfg);
  ASSERT_EQ(p.layers.size(), 2u);
  EXPECT_EQ(p.parameter_count(), 200u * 300 + 300 + 300 * 5 + 5);
  double sq = 0.0;
  for (double w : p.layers[0].weight.data()) sq += w * w;
  EXPECT_NEAR(sq / p.layers[0].weight.size(), 2.0 / 200.0, 0.0005);
  for (double b : p.layers[0].bias) EXPECT_EQ(b, 0.0);
  EXPECT_EQ(init_params(cfg), p);
}

TEST(Forward, HandComputedRelu) {
  MlpParams p;
  p.layers.push_back({Matrix(2, 2, {1, -1, 2, 1}), {0.5, -4.0}});
  p.layers.push_back({Matrix(2, 1, {1, 3}), {0.25}});
  const Matrix x(1, 2, {1, 1});
  // hidden pre = [1 + 2 + 0.5, -1 + 1 - 4] = [3.5, -4] -> relu [3.5, 0]
  const Matrix out = forward_output(p, x);
  EXPECT_EQ(out(0, 0), 3.5 + 0.25);
  EXPECT_THROW(forward_output(p, Matrix(1, 3)), ShapeError);
}

TEST(Backward, MatchesFiniteDifferencesForEveryLoss) {
  const std::vector<int> labels{0, 2, 1, 2, 0, 1};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    MlpConfig cfg{.input_dim = 3, .hidden_dims = {5, 4}, .output_dim = 3, .seed = seed};
    const MlpParams params = init_params(cfg);
    const Matrix batch = RandomBatch(labels.size(), 3, seed + 100);
    for (LossKind kind : {LossKind::kCe, LossKind::kUnce, LossKind::kKl, LossKind::kUn, LossKind::kTce,
                          LossKind::kTun}) {
      const ScheduleState schedule = ScheduleState::at(4, 10);
      auto loss = [&](const Matrix& out) { return batch_loss(kind, out, labels, schedule); };
      EXPECT_LT(finite_diff_check(params, batch, loss), 1e-4) << to_string(kind) << " seed " << seed;
    }
  }
}

TEST(Backward, RejectsMismatchedTrace) {
  MlpConfig cfg{.input_dim = 2, .hidden_dims = {3}, .output_dim = 2};
  const MlpParams p = init_params(cfg);
  const auto fwd = forward(p, RandomBatch(4, 2, 1));
  EXPECT_THROW(backward(fwd.trace, p, Matrix(3, 2)), ShapeError);
  MlpConfig other = cfg;
  other.hidden_dims = {3, 3};
  EXPECT_THROW(backward(fwd.trace, init_params(other), Matrix(4, 2)), ShapeError);
}

TEST(Dropout, MaskIsScaledAndRespectsRate) {
  MlpConfig cfg{.input_dim = 2, .hidden_dims = {100}, .output_dim = 2};
  const MlpParams p = init_params(cfg);
  Rng rng(5);
  const DropoutMask mask = sample_dropout_mask(p, 200, 0.25, rng);
  ASSERT_EQ(mask.keep.size(), 1u);
  std::size_t zeros = 0;
  for (double v : mask.keep[0].data()) {
    EXPECT_TRUE(v == 0.0 || std::abs(v - 1.0 / 0.75) < 1e-15);
    zeros += v == 0.0;
  }
  EXPECT_NEAR(static_cast<double>(zeros) / mask.keep[0].size(), 0.25, 0.01);
}

TEST(Dropout, GradientsMatchWithFixedMask) {
  MlpConfig cfg{.input_dim = 3, .hidden_dims = {6, 6}, .output_dim = 3, .seed = 11};
  const MlpParams params = init_params(cfg);
  const Matrix batch = RandomBatch(5, 3, 12);
  Rng rng(13);
  const DropoutMask mask = sample_dropout_mask(params, 5, 0.3, rng);
  const std::vector<int> labels{0, 1, 2, 1, 0};
  const auto fwd = forward(params, batch, &mask);
  const auto lg = batch_loss(LossKind::kTun, fwd.output, labels, ScheduleState::at(3));
  const MlpGrads g = backward(fwd.trace, params, lg.grad);
  // Spot check one weight by central differences through the same mask.
  MlpParams plus = params, minus = params;
  const double h = 1e-5;
  plus.layers[0].weight(1, 2) += h;
  minus.layers[0].weight(1, 2) -= h;
  const double lp = batch_loss(LossKind::kTun, forward_output(plus, batch, &mask), labels, ScheduleState::at(3)).loss;
  const double lm = batch_loss(LossKind::kTun, forward_output(minus, batch, &mask), labels, ScheduleState::at(3)).loss;
  const double numeric = (lp - lm) / (2 * h);
  EXPECT_NEAR(g.layers[0].weight(1, 2), numeric, 1e-6 * std::max(1.0, std::abs(numeric)));
}

}  // namespace
}  // namespace uios
