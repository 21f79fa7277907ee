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

#ifndef UIOS_METRICS_HPP_
#define UIOS_METRICS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "uios/calibration.hpp"

namespace uios {

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes = 0)
      : classes_(classes), counts_(classes * classes, 0) {}

  std::size_t classes() const { return classes_; }
  std::size_t& at(std::size_t truth, std::size_t predicted) {
    return counts_[truth * classes_ + predicted];
  }
  std::size_t at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * classes_ + predicted];
  }
  std::size_t total() const;
  bool is_diagonal() const;

 private:
  std::size_t classes_;
  std::vector<std::size_t> counts_;
};

// Throws DataError if a label or prediction falls outside [0, classes).
ConfusionMatrix confusion(std::span<const PredictionRecord> records, std::size_t classes);

struct ClassMetrics {
  double precision = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  // False when the class never occurs and is never predicted.
  bool in_macro = true;
};

struct ClassificationMetrics {
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_sensitivity = 0.0;
  double macro_specificity = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

// One-vs-rest metrics. 0/0 precision or recall counts as 0; classes with
// TP + FP + FN = 0 are left out of the unweighted macro means. Throws
// DataError on an empty matrix.
ClassificationMetrics per_class_metrics(const ConfusionMatrix& cm);

// Mann-Whitney AUC with midranks for ties. Requires at least one
// positive and one negative (else std::nullopt).
std::optional<double> binary_auc(std::span<const double> scores, std::span<const int> positive);

struct AucResult {
  // Unset when no class had both positives and negatives.
  std::optional<double> macro;
  std::vector<std::optional<double>> per_class;
  std::vector<std::size_t> excluded;
};

// Per class k, scores = probs[k] and positives = (true_label == k).
AucResult ovr_auc(std::span<const PredictionRecord> records, std::size_t classes);

// |{u_i >= theta}| / n. Throws DataError on empty input.
double ood_detection_rate(std::span<const double> uncertainty, double theta);

struct MetricReport {
  std::size_t n_total = 0;
  std::size_t n_evaluated = 0;
  std::size_t n_referred = 0;
  double referral_rate = 0.0;
  // False when every record was referred; the fields below are then empty.
  bool available = false;
  ConfusionMatrix confusion;
  ClassificationMetrics metrics;
  AucResult auc;
};

// All records evaluated.
MetricReport full_report(std::span<const PredictionRecord> records, std::size_t classes);

// Records with u >= theta are referred for review and excluded; metrics
// are computed on the remainder.
MetricReport thresholded_report(std::span<const PredictionRecord> records, std::size_t classes,
                                double theta);

}  // namespace uios

#endif  // UIOS_METRICS_HPP_
