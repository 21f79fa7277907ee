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

#ifndef UIOS_BASELINES_HPP_
#define UIOS_BASELINES_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "uios/backbone.hpp"
#include "uios/calibration.hpp"
#include "uios/datagen.hpp"
#include "uios/trainer.hpp"

namespace uios {

// uios:     evidential head, u = K / S (one forward pass)
// entropy:  softmax head, u = H(p) / ln K
// mc_drop:  T passes with fresh dropout masks, normalized entropy of the mean
// ensemble: snapshot checkpoints, normalized entropy of the mean
// tta:      T passes over Gaussian-jittered inputs, mean per-class variance / (1/4)
enum class Method { kUios, kEntropy, kMcDrop, kEnsemble, kTta };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct ScorerParams {
  std::size_t passes = 10;
  // 0 means "use the rate the model was trained with".
  double dropout_rate = 0.0;
  double jitter_sigma = 0.1;
  std::uint64_t seed = 42;
};

// Per-sample class distribution plus a scalar uncertainty in [0, 1].
struct ScoredPrediction {
  std::vector<double> probs;
  double uncertainty = 0.0;
  std::size_t predicted_class = 0;
};

std::vector<ScoredPrediction> uios_predict(const Model& model, const Matrix& features);

std::vector<ScoredPrediction> entropy_uncertainty(const Model& model, const Matrix& features);

// rate == 0 logs a warning and falls back to entropy_uncertainty.
std::vector<ScoredPrediction> mc_dropout_predict(const Model& model, const Matrix& features,
                                                 std::size_t passes, double rate,
                                                 std::uint64_t seed);

// Throws UsageError with fewer than two checkpoints.
std::vector<ScoredPrediction> snapshot_ensemble_predict(std::span<const MlpParams> checkpoints,
                                                        const Matrix& features);

std::vector<ScoredPrediction> tta_predict(const Model& model, const Matrix& features,
                                          std::size_t passes, double jitter_sigma,
                                          std::uint64_t seed);

// Dispatch on method. Ensemble draws on model.snapshots.
std::vector<ScoredPrediction> score(Method method, const Model& model, const Matrix& features,
                                    const ScorerParams& params = {});

// Network evaluations per sample, the structural cost of each method.
std::size_t forward_passes_per_sample(Method method, const Model& model,
                                      const ScorerParams& params);

// Pairs scores with the dataset labels (OOD rows keep kOodLabel).
std::vector<PredictionRecord> to_records(std::span<const ScoredPrediction> scored,
                                         const Dataset& dataset);

}  // namespace uios

#endif  // UIOS_BASELINES_HPP_
