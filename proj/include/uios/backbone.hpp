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

#ifndef UIOS_BACKBONE_HPP_
#define UIOS_BACKBONE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "uios/matrix.hpp"
#include "uios/random.hpp"

namespace uios {

enum class Activation { kRelu };

struct MlpConfig {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_dims{32, 32};
  // Number of classes K.
  std::size_t output_dim = 0;
  Activation activation = Activation::kRelu;
  // Only consulted by the MC-dropout baseline and dropout training.
  double dropout_rate = 0.0;
  std::uint64_t seed = 42;

  // Throws UsageError on zero-sized layers or a rate outside [0, 1).
  void validate() const;
  std::vector<std::size_t> layer_widths() const;

  bool operator==(const MlpConfig&) const = default;
};

// Weight is fan_in x fan_out; a batch (rows = samples) maps as
// out = in * W + b.
struct DenseLayer {
  Matrix weight;
  std::vector<double> bias;

  bool operator==(const DenseLayer&) const = default;
};

struct MlpParams {
  std::vector<DenseLayer> layers;

  std::size_t parameter_count() const;
  bool all_finite() const;
  // Every weight then every bias, layer by layer. The order is the
  // canonical flattening used by the optimizer and gradient checks.
  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;
  // Zero-filled copy with the same shapes.
  MlpParams zeros_like() const;

  bool operator==(const MlpParams&) const = default;
};

// Gradients share the parameter layout.
using MlpGrads = MlpParams;

// Per hidden layer keep-mask, already scaled: entries are 0 or 1/(1-rate).
struct DropoutMask {
  double rate = 0.0;
  std::vector<Matrix> keep;
};

DropoutMask sample_dropout_mask(const MlpParams& params, std::size_t batch_rows, double rate,
                                Rng& rng);

struct ForwardTrace {
  // Input to each layer; inputs[0] is the batch itself.
  std::vector<Matrix> inputs;
  std::vector<Matrix> pre_activations;
  std::optional<DropoutMask> dropout;
};

struct ForwardResult {
  // batch_size x K, the features F_Out fed to the evidential head (or to
  // softmax for the standard model).
  Matrix output;
  ForwardTrace trace;
};

// He-normal weights (stddev sqrt(2 / fan_in)), zero biases.
MlpParams init_params(const MlpConfig& cfg);

ForwardResult forward(const MlpParams& params, const Matrix& batch,
                      const DropoutMask* dropout = nullptr);

// Output only; no trace kept.
Matrix forward_output(const MlpParams& params, const Matrix& batch,
                      const DropoutMask* dropout = nullptr);

// Exact gradients of the traced forward pass given dLoss/dOutput.
MlpGrads backward(const ForwardTrace& trace, const MlpParams& params, const Matrix& grad_out);

struct LossAndGrad {
  double loss = 0.0;
  // dLoss/dOutput, same shape as the network output.
  Matrix grad;
};

using OutputLoss = std::function<LossAndGrad(const Matrix& output)>;

// Central differences (step h) over every parameter versus backward().
// Returns max |analytic - numeric| / (|numeric| + 1e-8).
double finite_diff_check(const MlpParams& params, const Matrix& batch, const OutputLoss& loss_fn,
                         double h = 1e-5);

}  // namespace uios

#endif  // UIOS_BACKBONE_HPP_
