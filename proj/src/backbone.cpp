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

#include <algorithm>
#include <cmath>
#include <string>

#include "uios/errors.hpp"

namespace uios {

void MlpConfig::validate() const {
  if (input_dim == 0) throw UsageError("MlpConfig: input_dim must be positive");
  if (output_dim == 0) throw UsageError("MlpConfig: output_dim must be positive");
  for (std::size_t h : hidden_dims) {
    if (h == 0) throw UsageError("MlpConfig: hidden layer of width 0");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw UsageError("MlpConfig: dropout_rate must lie in [0, 1)");
  }
}

std::vector<std::size_t> MlpConfig::layer_widths() const {
  std::vector<std::size_t> widths;
  widths.reserve(hidden_dims.size() + 2);
  widths.push_back(input_dim);
  widths.insert(widths.end(), hidden_dims.begin(), hidden_dims.end());
  widths.push_back(output_dim);
  return widths;
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.weight.size() + layer.bias.size();
  return n;
}

bool MlpParams::all_finite() const {
  for (const auto block : blocks()) {
    for (double v : block) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

std::vector<std::span<double>> MlpParams::blocks() {
  std::vector<std::span<double>> out;
  out.reserve(2 * layers.size());
  for (auto& layer : layers) {
    out.emplace_back(layer.weight.data());
    out.emplace_back(layer.bias);
  }
  return out;
}

std::vector<std::span<const double>> MlpParams::blocks() const {
  std::vector<std::span<const double>> out;
  out.reserve(2 * layers.size());
  for (const auto& layer : layers) {
    out.emplace_back(layer.weight.data());
    out.emplace_back(layer.bias);
  }
  return out;
}

MlpParams MlpParams::zeros_like() const {
  MlpParams out;
  out.layers.reserve(layers.size());
  for (const auto& layer : layers) {
    out.layers.push_back({Matrix(layer.weight.rows(), layer.weight.cols()),
                          std::vector<double>(layer.bias.size(), 0.0)});
  }
  return out;
}

MlpParams init_params(const MlpConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto widths = cfg.layer_widths();
  MlpParams params;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::size_t fan_in = widths[l];
    const std::size_t fan_out = widths[l + 1];
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    DenseLayer layer{Matrix(fan_in, fan_out), std::vector<double>(fan_out, 0.0)};
    for (double& w : layer.weight.data()) w = stddev * rng.normal();
    params.layers.push_back(std::move(layer));
  }
  return params;
}

DropoutMask sample_dropout_mask(const MlpParams& params, std::size_t batch_rows, double rate,
                                Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw UsageError("dropout rate must lie in [0, 1)");
  DropoutMask mask{rate, {}};
  const double scale = 1.0 / (1.0 - rate);
  for (std::size_t l = 0; l + 1 < params.layers.size(); ++l) {
    Matrix keep(batch_rows, params.layers[l].weight.cols());
    for (double& k : keep.data()) k = rng.uniform() < rate ? 0.0 : scale;
    mask.keep.push_back(std::move(keep));
  }
  return mask;
}

namespace {

void CheckMask(const DropoutMask& mask, const MlpParams& params, std::size_t rows) {
  if (mask.keep.size() + 1 != params.layers.size()) {
    throw ShapeError("dropout mask has the wrong number of layers");
  }
  for (std::size_t l = 0; l < mask.keep.size(); ++l) {
    if (mask.keep[l].rows() != rows || mask.keep[l].cols() != params.layers[l].weight.cols()) {
      throw ShapeError("dropout mask shape does not match layer " + std::to_string(l));
    }
  }
}

}  // namespace

ForwardResult forward(const MlpParams& params, const Matrix& batch, const DropoutMask* dropout) {
  if (params.layers.empty()) throw ShapeError("forward: network has no layers");
  if (batch.cols() != params.layers.front().weight.rows()) {
    throw ShapeError("forward: batch has " + std::to_string(batch.cols()) +
                     " columns, network expects " +
                     std::to_string(params.layers.front().weight.rows()));
  }
  if (dropout != nullptr) CheckMask(*dropout, params, batch.rows());

  ForwardTrace trace;
  trace.inputs.reserve(params.layers.size());
  trace.pre_activations.reserve(params.layers.size());
  if (dropout != nullptr) trace.dropout = *dropout;

  Matrix x = batch;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    Matrix z = matmul(x, layer.weight);
    for (std::size_t r = 0; r < z.rows(); ++r) {
      auto zr = z.row(r);
      for (std::size_t c = 0; c < zr.size(); ++c) zr[c] += layer.bias[c];
    }
    trace.inputs.push_back(std::move(x));
    const bool last = l + 1 == params.layers.size();
    if (last) {
      trace.pre_activations.push_back(z);
      return {std::move(z), std::move(trace)};
    }
    Matrix a(z.rows(), z.cols());
    for (std::size_t i = 0; i < z.size(); ++i) {
      a.data()[i] = z.data()[i] > 0.0 ? z.data()[i] : 0.0;
      if (dropout != nullptr) a.data()[i] *= dropout->keep[l].data()[i];
    }
    trace.pre_activations.push_back(std::move(z));
    x = std::move(a);
  }
  return {};  // unreachable
}

Matrix forward_output(const MlpParams& params, const Matrix& batch, const DropoutMask* dropout) {
  return forward(params, batch, dropout).output;
}

MlpGrads backward(const ForwardTrace& trace, const MlpParams& params, const Matrix& grad_out) {
  const std::size_t n_layers = params.layers.size();
  if (trace.inputs.size() != n_layers || trace.pre_activations.size() != n_layers) {
    throw ShapeError("backward: trace was produced by a different network");
  }
  const std::size_t rows = trace.inputs.front().rows();
  if (grad_out.rows() != rows || grad_out.cols() != params.layers.back().weight.cols()) {
    throw ShapeError("backward: grad_out shape does not match the traced output");
  }
  for (std::size_t l = 0; l < n_layers; ++l) {
    const auto& w = params.layers[l].weight;
    if (trace.inputs[l].cols() != w.rows() || trace.pre_activations[l].cols() != w.cols() ||
        trace.inputs[l].rows() != rows) {
      throw ShapeError("backward: stale trace for layer " + std::to_string(l));
    }
  }

  MlpGrads grads = params.zeros_like();
  Matrix g = grad_out;
  for (std::size_t l = n_layers; l-- > 0;) {
    const auto& x = trace.inputs[l];
    const auto& w = params.layers[l].weight;
    auto& dw = grads.layers[l].weight;
    auto& db = grads.layers[l].bias;
    for (std::size_t r = 0; r < rows; ++r) {
      const auto xr = x.row(r);
      const auto gr = g.row(r);
      for (std::size_t i = 0; i < xr.size(); ++i) {
        const double xi = xr[i];
        auto dw_row = dw.row(i);
        for (std::size_t j = 0; j < gr.size(); ++j) dw_row[j] += xi * gr[j];
      }
      for (std::size_t j = 0; j < gr.size(); ++j) db[j] += gr[j];
    }
    if (l == 0) break;

    // Propagate through W^T, then the dropout mask and ReLU of layer l-1.
    Matrix gx(rows, w.rows());
    for (std::size_t r = 0; r < rows; ++r) {
      const auto gr = g.row(r);
      auto gxr = gx.row(r);
      for (std::size_t i = 0; i < w.rows(); ++i) {
        const auto wi = w.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < gr.size(); ++j) acc += wi[j] * gr[j];
        gxr[i] = acc;
      }
    }
    const auto& z_prev = trace.pre_activations[l - 1];
    for (std::size_t i = 0; i < gx.size(); ++i) {
      double v = z_prev.data()[i] > 0.0 ? gx.data()[i] : 0.0;
      if (trace.dropout) v *= trace.dropout->keep[l - 1].data()[i];
      gx.data()[i] = v;
    }
    g = std::move(gx);
  }
  return grads;
}

double finite_diff_check(const MlpParams& params, const Matrix& batch, const OutputLoss& loss_fn,
                         double h) {
  const auto fwd = forward(params, batch);
  const auto analytic = backward(fwd.trace, params, loss_fn(fwd.output).grad);

  MlpParams probe = params;
  auto probe_blocks = probe.blocks();
  const auto analytic_blocks = analytic.blocks();
  double worst = 0.0;
  for (std::size_t b = 0; b < probe_blocks.size(); ++b) {
    for (std::size_t i = 0; i < probe_blocks[b].size(); ++i) {
      double& p = probe_blocks[b][i];
      const double saved = p;
      p = saved + h;
      const double up = loss_fn(forward_output(probe, batch)).loss;
      p = saved - h;
      const double down = loss_fn(forward_output(probe, batch)).loss;
      p = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double err = std::abs(analytic_blocks[b][i] - numeric) / (std::abs(numeric) + 1e-8);
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace uios
