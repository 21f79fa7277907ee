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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uios/errors.hpp"
#include "uios/numerics.hpp"

namespace uios {

std::string_view to_string(Objective objective) {
  switch (objective) {
    case Objective::kStandardCe: return "standard_ce";
    case Objective::kUn: return "un";
    case Objective::kTun: return "tun";
  }
  return "?";
}

Objective parse_objective(std::string_view name) {
  if (name == "standard_ce") return Objective::kStandardCe;
  if (name == "un") return Objective::kUn;
  if (name == "tun") return Objective::kTun;
  throw UsageError("unknown objective '" + std::string(name) + "' (standard_ce, un, tun)");
}

bool is_evidential(Objective objective) { return objective != Objective::kStandardCe; }

LossKind output_loss_for(Objective objective) {
  switch (objective) {
    case Objective::kStandardCe: return LossKind::kCe;
    case Objective::kUn: return LossKind::kUn;
    case Objective::kTun: return LossKind::kTun;
  }
  return LossKind::kTun;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw UsageError("epochs must be >= 0");
  if (batch_size < 1) throw UsageError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw UsageError("learning_rate must be > 0");
  if (!(weight_decay >= 0.0)) throw UsageError("weight_decay must be >= 0");
  if (anneal_epochs < 0) throw UsageError("anneal_epochs must be >= 0");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw UsageError("dropout_rate must lie in [0, 1)");
}

OptimizerState OptimizerState::for_params(const MlpParams& params) {
  OptimizerState state;
  state.first_moment = params.zeros_like();
  state.second_moment = params.zeros_like();
  return state;
}

void adam_step(MlpParams& params, const MlpGrads& grads, OptimizerState& state,
               double learning_rate, double weight_decay) {
  auto p_blocks = params.blocks();
  const auto g_blocks = grads.blocks();
  auto m_blocks = state.first_moment.blocks();
  auto v_blocks = state.second_moment.blocks();
  if (g_blocks.size() != p_blocks.size() || m_blocks.size() != p_blocks.size()) {
    throw ShapeError("adam_step: gradient / state layout does not match parameters");
  }
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    if (g_blocks[b].size() != p_blocks[b].size() || m_blocks[b].size() != p_blocks[b].size()) {
      throw ShapeError("adam_step: block " + std::to_string(b) + " size mismatch");
    }
    for (double g : g_blocks[b]) {
      if (!std::isfinite(g)) throw NumericError("adam_step: non-finite gradient");
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    for (std::size_t i = 0; i < p_blocks[b].size(); ++i) {
      const double g = g_blocks[b][i] + weight_decay * p_blocks[b][i];
      double& m = m_blocks[b][i];
      double& v = v_blocks[b][i];
      m = state.beta1 * m + (1.0 - state.beta1) * g;
      v = state.beta2 * v + (1.0 - state.beta2) * g * g;
      const double m_hat = m / correction1;
      const double v_hat = v / correction2;
      p_blocks[b][i] -= learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

std::vector<int> snapshot_schedule(int epochs, std::size_t count) {
  std::vector<int> out;
  if (epochs <= 0 || count == 0) return out;
  const int half = epochs / 2;
  const int span = epochs - half;
  for (std::size_t i = 1; i <= count; ++i) {
    const auto num = static_cast<long long>(i) * span;
    const int e = half + static_cast<int>((num + static_cast<long long>(count) - 1) /
                                          static_cast<long long>(count));
    if (e >= 1 && (out.empty() || out.back() != e)) out.push_back(e);
  }
  return out;
}

TrainResult train(const Dataset& train_set, const Dataset* val, const TrainConfig& cfg) {
  cfg.validate();
  train_set.validate();
  if (train_set.size() == 0) throw DataError("train: empty training set");
  if (train_set.classes == 0) throw DataError("train: training set has no labelled classes");
  for (int label : train_set.labels) {
    if (label == kOodLabel) throw DataError("train: training set contains OOD rows");
  }
  if (val != nullptr && val->dim() != train_set.dim()) {
    throw DataError("train: validation features have " + std::to_string(val->dim()) +
                    " columns, training has " + std::to_string(train_set.dim()));
  }

  MlpConfig mlp;
  mlp.input_dim = train_set.dim();
  mlp.hidden_dims = cfg.hidden_dims;
  mlp.output_dim = train_set.classes;
  mlp.dropout_rate = cfg.dropout_rate;
  mlp.seed = cfg.seed;

  TrainResult result;
  Model& model = result.model;
  model.config = mlp;
  model.params = init_params(mlp);
  model.objective = cfg.objective;
  model.schedule = ScheduleState::at(0, cfg.anneal_epochs);

  const LossKind loss_kind = output_loss_for(cfg.objective);
  const auto snapshots = snapshot_schedule(cfg.epochs, cfg.snapshot_count);
  OptimizerState opt = OptimizerState::for_params(model.params);

  std::vector<std::size_t> order(train_set.size());
  std::vector<int> batch_labels;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const ScheduleState schedule = ScheduleState::at(epoch, cfg.anneal_epochs);
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const std::span<const std::size_t> idx(order.data() + start, stop - start);
      const Matrix batch = train_set.features.select_rows(idx);
      batch_labels.clear();
      for (std::size_t i : idx) batch_labels.push_back(train_set.labels[i]);

      std::optional<DropoutMask> mask;
      if (cfg.dropout_rate > 0.0) {
        mask = sample_dropout_mask(model.params, batch.rows(), cfg.dropout_rate, rng);
      }
      const auto fwd = forward(model.params, batch, mask ? &*mask : nullptr);
      for (double v : fwd.output.data()) {
        if (!std::isfinite(v)) throw NumericError("train: divergence at epoch " + std::to_string(epoch));
      }
      const auto lg = batch_loss(loss_kind, fwd.output, batch_labels, schedule);
      const auto grads = backward(fwd.trace, model.params, lg.grad);
      adam_step(model.params, grads, opt, cfg.learning_rate, cfg.weight_decay);
      loss_sum += lg.loss * static_cast<double>(idx.size());
    }

    EpochLog entry{epoch, loss_sum / static_cast<double>(order.size()), schedule.lambda,
                   schedule.tau, std::nullopt};
    if (!std::isfinite(entry.loss) || !model.params.all_finite()) {
      throw NumericError("train: divergence at epoch " + std::to_string(epoch));
    }
    model.schedule = ScheduleState::at(epoch + 1, cfg.anneal_epochs);
    if (val != nullptr && val->size() > 0) entry.val_accuracy = accuracy(model, *val);
    result.log.push_back(entry);

    if (std::find(snapshots.begin(), snapshots.end(), epoch + 1) != snapshots.end()) {
      model.snapshots.push_back(model.params);
      model.snapshot_epochs.push_back(epoch + 1);
    }
  }
  return result;
}

Matrix predict_outputs(const MlpParams& params, const Matrix& features) {
  return forward_output(params, features);
}

std::vector<SubjectiveOpinion> predict_opinions(const Model& model, const Matrix& features) {
  if (!is_evidential(model.objective)) {
    throw UsageError("predict_opinions: model was trained with standard_ce (no evidential head)");
  }
  const Matrix out = predict_outputs(model.params, features);
  std::vector<SubjectiveOpinion> ops;
  ops.reserve(out.rows());
  for (std::size_t r = 0; r < out.rows(); ++r) ops.push_back(opinion_from_features(out.row(r)));
  return ops;
}

Matrix predict_softmax(const Model& model, const Matrix& features) {
  Matrix out = predict_outputs(model.params, features);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const auto p = numerics::softmax(out.row(r));
    std::copy(p.begin(), p.end(), out.row(r).begin());
  }
  return out;
}

std::vector<std::size_t> predict_classes(const Model& model, const Matrix& features) {
  // softplus is monotone, so argmax of F_Out equals argmax of alpha.
  const Matrix out = predict_outputs(model.params, features);
  std::vector<std::size_t> classes(out.rows());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    classes[r] = is_evidential(model.objective) ? opinion_from_features(out.row(r)).predicted_class
                                                : numerics::argmax(out.row(r));
  }
  return classes;
}

double accuracy(const Model& model, const Dataset& dataset) {
  const auto pred = predict_classes(model, dataset.features);
  std::size_t correct = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (dataset.labels[i] == kOodLabel) continue;
    ++total;
    if (static_cast<int>(pred[i]) == dataset.labels[i]) ++correct;
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace uios
