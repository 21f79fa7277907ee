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

#ifndef UIOS_CALIBRATION_HPP_
#define UIOS_CALIBRATION_HPP_

#include <span>
#include <string_view>
#include <vector>

namespace uios {

// One scored prediction: the unit every metric and calibration consumes.
struct PredictionRecord {
  std::size_t predicted_class = 0;
  // kOodLabel (-1) for out-of-distribution rows.
  int true_label = 0;
  double uncertainty = 1.0;
  std::vector<double> probs;
};

// 1 where the prediction is wrong, 0 where it is right.
std::vector<int> wrong_labels(std::span<const PredictionRecord> records);

// ROC of "u >= theta" as a detector of wrong predictions. candidates are
// the sorted distinct uncertainty values followed by one sentinel above
// the maximum (the point flagging nothing). tpr/fpr are aligned with
// candidates and non-increasing.
struct RocSweep {
  std::vector<double> candidates;
  std::vector<double> tpr;
  std::vector<double> fpr;
};

// Throws CalibrationError unless `wrong` contains both 0s and 1s.
RocSweep roc_sweep(std::span<const double> uncertainty, std::span<const int> wrong);

struct ThresholdCalibration {
  std::vector<double> candidates;
  std::vector<double> tpr;
  std::vector<double> fpr;
  // tpr_weight * tpr - fpr per candidate.
  std::vector<double> objective;
  double theta = 1.0;
  double tpr_weight = 2.0;
  std::size_t selected = 0;

  double tpr_at_theta() const { return tpr[selected]; }
  double fpr_at_theta() const { return fpr[selected]; }
  double objective_at_theta() const { return objective[selected]; }
};

enum class TieBreak { kLargestTheta, kSmallestTheta };

// theta = argmax over candidates of tpr_weight * TPR - FPR. Equal
// objectives resolve to the largest theta by default, flagging the
// fewest samples.
ThresholdCalibration select_threshold(const RocSweep& sweep, double tpr_weight = 2.0,
                                      TieBreak tie_break = TieBreak::kLargestTheta);

// wrong_labels + roc_sweep + select_threshold.
ThresholdCalibration calibrate(std::span<const PredictionRecord> records, double tpr_weight = 2.0);

enum class Confidence { kHigh, kLow };

std::string_view to_string(Confidence c);

// u < theta is high confidence; u >= theta is low confidence (referred).
Confidence confidence_of(double uncertainty, double theta);

}  // namespace uios

#endif  // UIOS_CALIBRATION_HPP_
