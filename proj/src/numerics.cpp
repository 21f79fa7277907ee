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

#include "uios/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "uios/errors.hpp"

namespace uios::numerics {
namespace {

constexpr double kSoftplusCutoff = 30.0;
// Arguments below this are shifted upward before the asymptotic series.
constexpr double kAsymptoticFloor = 10.0;

void RequirePositive(double x, const char* fn) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(fn) + ": argument must be finite and > 0, got " +
                      std::to_string(x));
  }
}

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double softplus(double x) {
  if (x > kSoftplusCutoff) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_gamma(double x) {
  RequirePositive(x, "log_gamma");
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
  const double z = x - 1.0;
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    a += kLanczos[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(a);
}

double digamma(double x) {
  RequirePositive(x, "digamma");
  double shift = 0.0;
  while (x < kAsymptoticFloor) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli terms B_2n / (2n x^2n), Horner form in 1/x^2.
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 -
                                              inv2 * (691.0 / 32760 -
                                                      inv2 * (1.0 / 12)))))));
  return shift + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
  RequirePositive(x, "trigamma");
  double shift = 0.0;
  while (x < kAsymptoticFloor) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * inv2 *
      (1.0 / 6 -
       inv2 * (1.0 / 30 -
               inv2 * (1.0 / 42 -
                       inv2 * (1.0 / 30 -
                               inv2 * (5.0 / 66 - inv2 * (691.0 / 2730 - inv2 * (7.0 / 6)))))));
  return shift + inv + 0.5 * inv2 + series;
}

double log_multinomial_beta(std::span<const double> alpha) {
  if (alpha.empty()) throw DomainError("log_multinomial_beta: empty concentration vector");
  double sum = 0.0;
  double log_num = 0.0;
  for (double a : alpha) {
    log_num += log_gamma(a);
    sum += a;
  }
  return log_num - log_gamma(sum);
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw DomainError("softmax: empty input");
  double max = logits[0];
  for (double v : logits) {
    if (!std::isfinite(v)) throw DomainError("softmax: non-finite logit");
    max = std::max(max, v);
  }
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

double entropy(std::span<const double> p) {
  if (p.empty()) throw DomainError("entropy: empty distribution");
  double total = 0.0;
  double h = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("entropy: probabilities must be finite and non-negative");
    }
    total += v;
    if (v > 0.0) h -= v * std::log(v);
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw DomainError("entropy: probabilities sum to " + std::to_string(total) + ", not 1");
  }
  return std::max(h, 0.0);
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw DomainError("argmax: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace uios::numerics
