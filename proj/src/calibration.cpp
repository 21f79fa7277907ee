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

#include "uios/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "uios/errors.hpp"

namespace uios {

std::vector<int> wrong_labels(std::span<const PredictionRecord> records) {
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back(static_cast<int>(r.predicted_class) == r.true_label ? 0 : 1);
  }
  return out;
}

RocSweep roc_sweep(std::span<const double> uncertainty, std::span<const int> wrong) {
  if (uncertainty.size() != wrong.size()) {
    throw ShapeError("roc_sweep: " + std::to_string(uncertainty.size()) + " scores but " +
                     std::to_string(wrong.size()) + " labels");
  }
  std::size_t positives = 0;
  for (std::size_t i = 0; i < wrong.size(); ++i) {
    if (wrong[i] != 0 && wrong[i] != 1) throw CalibrationError("roc_sweep: labels must be 0 or 1");
    if (!std::isfinite(uncertainty[i])) throw CalibrationError("roc_sweep: non-finite uncertainty");
    positives += static_cast<std::size_t>(wrong[i]);
  }
  const std::size_t negatives = wrong.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw CalibrationError(
        positives == 0
            ? "calibration needs at least one wrong prediction; every validation sample is correct"
            : "calibration needs at least one correct prediction; every validation sample is wrong");
  }

  // Walk scores in descending order so counts of u >= theta accumulate.
  std::vector<std::size_t> order(uncertainty.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return uncertainty[a] > uncertainty[b];
  });

  RocSweep sweep;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double value = uncertainty[order[i]];
    while (i < order.size() && uncertainty[order[i]] == value) {
      if (wrong[order[i]] == 1) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    sweep.candidates.push_back(value);
    sweep.tpr.push_back(static_cast<double>(tp) / static_cast<double>(positives));
    sweep.fpr.push_back(static_cast<double>(fp) / static_cast<double>(negatives));
  }
  std::reverse(sweep.candidates.begin(), sweep.candidates.end());
  std::reverse(sweep.tpr.begin(), sweep.tpr.end());
  std::reverse(sweep.fpr.begin(), sweep.fpr.end());

  const double top = sweep.candidates.back();
  sweep.candidates.push_back(std::nextafter(top, std::numeric_limits<double>::infinity()));
  sweep.tpr.push_back(0.0);
  sweep.fpr.push_back(0.0);
  return sweep;
}

namespace {

// Rates are count ratios, so equal objectives can differ in the last bits.
constexpr double kTieTolerance = 1e-12;

}  // namespace

ThresholdCalibration select_threshold(const RocSweep& sweep, double tpr_weight, TieBreak tie_break) {
  const std::size_t n = sweep.candidates.size();
  if (n == 0 || sweep.tpr.size() != n || sweep.fpr.size() != n) {
    throw CalibrationError("select_threshold: malformed sweep");
  }
  ThresholdCalibration cal;
  cal.candidates = sweep.candidates;
  cal.tpr = sweep.tpr;
  cal.fpr = sweep.fpr;
  cal.tpr_weight = tpr_weight;
  cal.objective.resize(n);
  for (std::size_t i = 0; i < n; ++i) cal.objective[i] = tpr_weight * sweep.tpr[i] - sweep.fpr[i];

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const bool better = cal.objective[i] > cal.objective[best] + kTieTolerance;
    const bool tie = std::abs(cal.objective[i] - cal.objective[best]) <= kTieTolerance;
    if (better || (tie && tie_break == TieBreak::kLargestTheta)) best = i;
  }
  cal.selected = best;
  cal.theta = cal.candidates[best];
  return cal;
}

ThresholdCalibration calibrate(std::span<const PredictionRecord> records, double tpr_weight) {
  if (records.empty()) throw CalibrationError("calibrate: no validation records");
  std::vector<double> u;
  u.reserve(records.size());
  for (const auto& r : records) u.push_back(r.uncertainty);
  return select_threshold(roc_sweep(u, wrong_labels(records)), tpr_weight);
}

std::string_view to_string(Confidence c) {
  return c == Confidence::kHigh ? "high_confidence" : "low_confidence";
}

Confidence confidence_of(double uncertainty, double theta) {
  return uncertainty < theta ? Confidence::kHigh : Confidence::kLow;
}

}  // namespace uios
