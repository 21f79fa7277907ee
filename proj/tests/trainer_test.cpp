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

#include "uios/trainer.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "uios/datagen.hpp"
#include "uios/errors.hpp"

namespace uios {
namespace {

Dataset SmallBlobs(std::uint64_t seed = 3) {
  BlobSpec spec;
  spec.classes = 3;
  spec.n_per_class = 60;
  spec.sigma = 0.6;
  spec.seed = seed;
  return gen_blobs(spec);
}

TrainConfig QuickConfig(Objective obj) {
  TrainConfig cfg;
  cfg.objective = obj;
  cfg.epochs = 40;
  cfg.learning_rate = 1e-2;
  cfg.batch_size = 16;
  cfg.hidden_dims = {16};
  cfg.snapshot_count = 3;
  return cfg;
}

TEST(Objective, ParseRoundTrip) {
  for (Objective o : {Objective::kStandardCe, Objective::kUn, Objective::kTun}) {
    EXPECT_EQ(parse_objective(to_string(o)), o);
  }
  EXPECT_THROW(parse_objective("adam"), UsageError);
  EXPECT_FALSE(is_evidential(Objective::kStandardCe));
  EXPECT_TRUE(is_evidential(Objective::kTun));
  EXPECT_EQ(output_loss_for(Objective::kUn), LossKind::kUn);
}

TEST(TrainConfig, Defaults) {
  const TrainConfig cfg;
  EXPECT_EQ(cfg.learning_rate, 1e-4);
  EXPECT_EQ(cfg.weight_decay, 1e-4);
  EXPECT_EQ(cfg.batch_size, 64u);
  EXPECT_EQ(cfg.anneal_epochs, 10);
  EXPECT_EQ(cfg.objective, Objective::kTun);
  TrainConfig bad = cfg;
  bad.learning_rate = 0.0;
  EXPECT_THROW(bad.validate(), UsageError);
  bad = cfg;
  bad.epochs = -1;
  EXPECT_THROW(bad.validate(), UsageError);
}

TEST(AdamStep, FirstStepMovesByLearningRate) {
  MlpParams p;
  p.layers.push_back({Matrix(1, 2, {1.0, -2.0}), {0.5}});
  MlpGrads g = p.zeros_like();
  g.layers[0].weight = Matrix(1, 2, {3.0, -0.25});
  g.layers[0].bias = {0.0};
  auto state = OptimizerState::for_params(p);
  adam_step(p, g, state, 0.1, 0.0);
  EXPECT_NEAR(p.layers[0].weight(0, 0), 0.9, 1e-8);
  EXPECT_NEAR(p.layers[0].weight(0, 1), -1.9, 1e-7);
  EXPECT_EQ(p.layers[0].bias[0], 0.5);
  EXPECT_EQ(state.step, 1u);
}

TEST(AdamStep, WeightDecayIsAddedToGradient) {
  MlpParams p;
  p.layers.push_back({Matrix(1, 1, {2.0}), {0.0}});
  MlpGrads g = p.zeros_like();
  auto state = OptimizerState::for_params(p);
  adam_step(p, g, state, 0.1, 0.5);
  // Gradient is 0 + 0.5 * 2 > 0, so the weight shrinks by ~lr.
  EXPECT_NEAR(p.layers[0].weight(0, 0), 1.9, 1e-8);
}

TEST(AdamStep, RejectsNonFiniteGradient) {
  MlpParams p;
  p.layers.push_back({Matrix(1, 1, {2.0}), {0.0}});
  MlpGrads g = p.zeros_like();
  g.layers[0].weight(0, 0) = std::numeric_limits<double>::quiet_NaN();
  auto state = OptimizerState::for_params(p);
  EXPECT_THROW(adam_step(p, g, state, 0.1, 0.0), NumericError);
  EXPECT_EQ(p.layers[0].weight(0, 0), 2.0);
}

TEST(SnapshotSchedule, EvenlySpacedOverSecondHalf) {
  EXPECT_EQ(snapshot_schedule(100, 5), (std::vector<int>{60, 70, 80, 90, 100}));
  EXPECT_EQ(snapshot_schedule(10, 2), (std::vector<int>{8, 10}));
  EXPECT_TRUE(snapshot_schedule(0, 5).empty());
  EXPECT_TRUE(snapshot_schedule(10, 0).empty());
}

TEST(Train, LearnsSeparableBlobs) {
  const Dataset data = SmallBlobs();
  for (Objective obj : {Objective::kStandardCe, Objective::kUn, Objective::kTun}) {
    const auto result = train(data, &data, QuickConfig(obj));
    EXPECT_GT(accuracy(result.model, data), 0.9) << to_string(obj);
    ASSERT_EQ(result.log.size(), 40u);
    EXPECT_TRUE(result.log.back().val_accuracy.has_value());
    EXPECT_EQ(result.model.snapshots.size(), 3u);
    EXPECT_EQ(result.model.snapshot_epochs.back(), 40);
  }
}

TEST(Train, ScheduleFollowsEpochs) {
  const auto result = train(SmallBlobs(), nullptr, QuickConfig(Objective::kTun));
  EXPECT_EQ(result.log[0].lambda, 0.0);
  EXPECT_EQ(result.log[0].tau, 0.01);
  EXPECT_DOUBLE_EQ(result.log[5].lambda, 0.5);
  EXPECT_EQ(result.log[20].tau, 1.0);
  EXPECT_EQ(result.model.schedule, ScheduleState::at(40, 10));
}

TEST(Train, DeterministicForSeed) {
  const Dataset data = SmallBlobs();
  auto cfg = QuickConfig(Objective::kTun);
  cfg.dropout_rate = 0.2;
  const auto a = train(data, nullptr, cfg);
  const auto b = train(data, nullptr, cfg);
  EXPECT_EQ(a.model.params, b.model.params);
  cfg.seed = 43;
  const auto c = train(data, nullptr, cfg);
  EXPECT_NE(a.model.params, c.model.params);
}

TEST(Train, ZeroEpochsReturnsInitialisedModel) {
  auto cfg = QuickConfig(Objective::kTun);
  cfg.epochs = 0;
  const Dataset data = SmallBlobs();
  const auto result = train(data, nullptr, cfg);
  EXPECT_TRUE(result.log.empty());
  EXPECT_TRUE(result.model.snapshots.empty());
  MlpConfig mc{.input_dim = 2, .hidden_dims = {16}, .output_dim = 3, .seed = cfg.seed};
  EXPECT_EQ(result.model.params, init_params(mc));
}

TEST(Train, DivergenceIsNumericError) {
  auto cfg = QuickConfig(Objective::kStandardCe);
  cfg.learning_rate = 1e300;
  EXPECT_THROW(train(SmallBlobs(), nullptr, cfg), NumericError);
}

TEST(Train, RejectsUnlabelledRows) {
  Dataset data = SmallBlobs();
  data.labels[3] = kOodLabel;
  EXPECT_THROW(train(data, nullptr, QuickConfig(Objective::kTun)), DataError);
}

TEST(Predict, OpinionsNeedEvidentialModel) {
  const Dataset data = SmallBlobs();
  auto cfg = QuickConfig(Objective::kStandardCe);
  cfg.epochs = 2;
  const auto result = train(data, nullptr, cfg);
  EXPECT_THROW(predict_opinions(result.model, data.features), UsageError);
  const Matrix p = predict_softmax(result.model, data.features);
  double sum = 0.0;
  for (std::size_t k = 0; k < 3; ++k) sum += p(0, k);
  EXPECT_NEAR(sum, 1.0, 1e-14);
}

}  // namespace
}  // namespace uios
