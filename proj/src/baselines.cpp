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

#include "uios/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "uios/errors.hpp"
#include "uios/numerics.hpp"

namespace uios {
namespace {

double NormalizedEntropy(std::span<const double> p) {
  if (p.size() < 2) return 0.0;
  const double h = numerics::entropy(p) / std::log(static_cast<double>(p.size()));
  return std::clamp(h, 0.0, 1.0);
}

ScoredPrediction FromProbs(std::vector<double> probs) {
  ScoredPrediction s;
  s.uncertainty = NormalizedEntropy(probs);
  s.predicted_class = numerics::argmax(probs);
  s.probs = std::move(probs);
  return s;
}

void CheckFeatures(const Model& model, const Matrix& features) {
  if (features.cols() != model.config.input_dim) {
    throw ShapeError("features have " + std::to_string(features.cols()) +
                     " columns, model expects " + std::to_string(model.config.input_dim));
  }
}

// Row-wise mean of softmax over several output matrices, accumulated in
// pass order.
std::vector<ScoredPrediction> MeanOfSoftmax(const std::vector<Matrix>& outputs) {
  const std::size_t rows = outputs.front().rows();
  const std::size_t k = outputs.front().cols();
  std::vector<ScoredPrediction> out;
  out.reserve(rows);
  const double inv = 1.0 / static_cast<double>(outputs.size());
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> mean(k, 0.0);
    for (const auto& o : outputs) {
      const auto p = numerics::softmax(o.row(r));
      for (std::size_t j = 0; j < k; ++j) mean[j] += p[j];
    }
    for (double& v : mean) v *= inv;
    out.push_back(FromProbs(std::move(mean)));
  }
  return out;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kUios: return "uios";
    case Method::kEntropy: return "entropy";
    case Method::kMcDrop: return "mc_drop";
    case Method::kEnsemble: return "ensemble";
    case Method::kTta: return "tta";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "uios") return Method::kUios;
  if (name == "entropy") return Method::kEntropy;
  if (name == "mc_drop") return Method::kMcDrop;
  if (name == "ensemble") return Method::kEnsemble;
  if (name == "tta") return Method::kTta;
  throw UsageError("unknown method '" + std::string(name) +
                   "' (uios, entropy, mc_drop, ensemble, tta)");
}

std::vector<ScoredPrediction> uios_predict(const Model& model, const Matrix& features) {
  CheckFeatures(model, features);
  const auto opinions = predict_opinions(model, features);
  std::vector<ScoredPrediction> out;
  out.reserve(opinions.size());
  for (const auto& op : opinions) out.push_back({op.probs, op.uncertainty, op.predicted_class});
  return out;
}

std::vector<ScoredPrediction> entropy_uncertainty(const Model& model, const Matrix& features) {
  CheckFeatures(model, features);
  const Matrix out = predict_outputs(model.params, features);
  std::vector<ScoredPrediction> scored;
  scored.reserve(out.rows());
  for (std::size_t r = 0; r < out.rows(); ++r) scored.push_back(FromProbs(numerics::softmax(out.row(r))));
  return scored;
}

std::vector<ScoredPrediction> mc_dropout_predict(const Model& model, const Matrix& features,
                                                 std::size_t passes, double rate,
                                                 std::uint64_t seed) {
  CheckFeatures(model, features);
  if (rate == 0.0) {
    std::cerr << "uios: warning: mc_drop with dropout rate 0 reduces to the entropy method\n";
    return entropy_uncertainty(model, features);
  }
  if (!(rate > 0.0 && rate < 1.0)) throw UsageError("mc_drop: dropout rate must lie in (0, 1)");
  if (passes < 2) throw UsageError("mc_drop: need at least 2 passes");
  std::vector<Matrix> outputs;
  outputs.reserve(passes);
  for (std::size_t t = 0; t < passes; ++t) {
    Rng rng(derive_seed(seed, t));
    const auto mask = sample_dropout_mask(model.params, features.rows(), rate, rng);
    outputs.push_back(forward_output(model.params, features, &mask));
  }
  return MeanOfSoftmax(outputs);
}

std::vector<ScoredPrediction> snapshot_ensemble_predict(std::span<const MlpParams> checkpoints,
                                                        const Matrix& features) {
  if (checkpoints.size() < 2) {
    throw UsageError("ensemble: need at least 2 checkpoints, got " +
                     std::to_string(checkpoints.size()));
  }
  std::vector<Matrix> outputs;
  outputs.reserve(checkpoints.size());
  for (const auto& params : checkpoints) outputs.push_back(forward_output(params, features));
  return MeanOfSoftmax(outputs);
}

std::vector<ScoredPrediction> tta_predict(const Model& model, const Matrix& features,
                                          std::size_t passes, double jitter_sigma,
                                          std::uint64_t seed) {
  CheckFeatures(model, features);
  if (!(jitter_sigma > 0.0)) throw UsageError("tta: jitter sigma must be > 0");
  if (passes < 2) throw UsageError("tta: need at least 2 passes");
  const std::size_t rows = features.rows();
  const std::size_t k = model.classes();

  std::vector<Matrix> probs;
  probs.reserve(passes);
  for (std::size_t t = 0; t < passes; ++t) {
    Rng rng(derive_seed(seed, t));
    Matrix jittered = features;
    for (double& v : jittered.data()) v += jitter_sigma * rng.normal();
    Matrix p = forward_output(model.params, jittered);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto sm = numerics::softmax(p.row(r));
      std::copy(sm.begin(), sm.end(), p.row(r).begin());
    }
    probs.push_back(std::move(p));
  }

  const double inv = 1.0 / static_cast<double>(passes);
  std::vector<ScoredPrediction> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> mean(k, 0.0);
    for (const auto& p : probs) {
      for (std::size_t j = 0; j < k; ++j) mean[j] += p(r, j);
    }
    for (double& v : mean) v *= inv;
    double var_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      double acc = 0.0;
      for (const auto& p : probs) acc += (p(r, j) - mean[j]) * (p(r, j) - mean[j]);
      var_sum += acc * inv;
    }
    ScoredPrediction s;
    s.uncertainty = std::clamp((var_sum / static_cast<double>(k)) / 0.25, 0.0, 1.0);
    s.predicted_class = numerics::argmax(mean);
    s.probs = std::move(mean);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ScoredPrediction> score(Method method, const Model& model, const Matrix& features,
                                    const ScorerParams& params) {
  switch (method) {
    case Method::kUios: return uios_predict(model, features);
    case Method::kEntropy: return entropy_uncertainty(model, features);
    case Method::kMcDrop: {
      const double rate = params.dropout_rate > 0.0 ? params.dropout_rate : model.config.dropout_rate;
      return mc_dropout_predict(model, features, params.passes, rate, params.seed);
    }
    case Method::kEnsemble:
      CheckFeatures(model, features);
      return snapshot_ensemble_predict(model.snapshots, features);
    case Method::kTta: return tta_predict(model, features, params.passes, params.jitter_sigma, params.seed);
  }
  throw UsageError("unknown method");
}

std::size_t forward_passes_per_sample(Method method, const Model& model,
                                      const ScorerParams& params) {
  switch (method) {
    case Method::kUios:
    case Method::kEntropy: return 1;
    case Method::kMcDrop: return params.passes;
    case Method::kEnsemble: return model.snapshots.size();
    case Method::kTta: return params.passes;
  }
  return 0;
}

std::vector<PredictionRecord> to_records(std::span<const ScoredPrediction> scored,
                                         const Dataset& dataset) {
  if (scored.size() != dataset.size()) throw ShapeError("to_records: size mismatch");
  std::vector<PredictionRecord> records;
  records.reserve(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    records.push_back({scored[i].predicted_class, dataset.labels[i], scored[i].uncertainty,
                       scored[i].probs});
  }
  return records;
}

}  // namespace uios
