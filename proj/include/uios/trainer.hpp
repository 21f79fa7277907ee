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

#ifndef UIOS_TRAINER_HPP_
#define UIOS_TRAINER_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "uios/backbone.hpp"
#include "uios/datagen.hpp"
#include "uios/evidential.hpp"
#include "uios/losses.hpp"

namespace uios {

// standard_ce: softmax head trained with cross-entropy.
// un:          evidential head, unce + lambda * kl.
// tun:         evidential head, un + temperature cross-entropy.
enum class Objective { kStandardCe, kUn, kTun };

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view name);
bool is_evidential(Objective objective);
LossKind output_loss_for(Objective objective);

struct TrainConfig {
  double learning_rate = 1e-4;
  double weight_decay = 1e-4;
  std::size_t batch_size = 64;
  int epochs = 300;
  int anneal_epochs = 10;
  Objective objective = Objective::kTun;
  std::uint64_t seed = 42;
  // Checkpoints kept from the second half of training for the snapshot
  // ensemble; 0 disables.
  std::size_t snapshot_count = 5;
  std::vector<std::size_t> hidden_dims{32, 32};
  // Inverted dropout on hidden layers during training (MC-dropout models).
  double dropout_rate = 0.0;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct OptimizerState {
  MlpParams first_moment;
  MlpParams second_moment;
  std::uint64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static OptimizerState for_params(const MlpParams& params);
};

// One Adam update in place. Weight decay is added to the gradient
// (grad + weight_decay * param) before the moment updates. Throws
// NumericError on a non-finite gradient, leaving params untouched.
void adam_step(MlpParams& params, const MlpGrads& grads, OptimizerState& state,
               double learning_rate, double weight_decay);

struct Model {
  MlpConfig config;
  MlpParams params;
  Objective objective = Objective::kTun;
  // Schedule after the final epoch advancement.
  ScheduleState schedule;
  std::vector<MlpParams> snapshots;
  std::vector<int> snapshot_epochs;

  std::size_t classes() const { return config.output_dim; }
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double lambda = 0.0;
  double tau = 0.0;
  std::optional<double> val_accuracy;
};

struct TrainResult {
  Model model;
  std::vector<EpochLog> log;
};

// Epochs at which snapshots are taken (1-based, after the epoch's last
// update): evenly spaced over the second half, ending at `epochs`.
std::vector<int> snapshot_schedule(int epochs, std::size_t count);

// Mini-batch Adam over `train`, shuffled each epoch with a seed derived
// from cfg.seed. The schedule is advanced once per epoch. `val`, when
// given, is scored after every epoch.
TrainResult train(const Dataset& train, const Dataset* val, const TrainConfig& cfg);

// Raw backbone outputs F_Out, no dropout.
Matrix predict_outputs(const MlpParams& params, const Matrix& features);

std::vector<SubjectiveOpinion> predict_opinions(const Model& model, const Matrix& features);

// Softmax distribution per row (standard models).
Matrix predict_softmax(const Model& model, const Matrix& features);

// Argmax class per row from whichever head the model was trained with.
std::vector<std::size_t> predict_classes(const Model& model, const Matrix& features);

// Fraction of labelled rows whose predicted class matches.
double accuracy(const Model& model, const Dataset& dataset);

}  // namespace uios

#endif  // UIOS_TRAINER_HPP_
