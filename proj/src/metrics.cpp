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

#include "uios/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "uios/errors.hpp"

namespace uios {

std::size_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

bool ConfusionMatrix::is_diagonal() const {
  for (std::size_t t = 0; t < classes_; ++t) {
    for (std::size_t p = 0; p < classes_; ++p) {
      if (t != p && at(t, p) != 0) return false;
    }
  }
  return true;
}

ConfusionMatrix confusion(std::span<const PredictionRecord> records, std::size_t classes) {
  ConfusionMatrix cm(classes);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.true_label < 0 || static_cast<std::size_t>(r.true_label) >= classes ||
        r.predicted_class >= classes) {
      throw DataError("confusion: record " + std::to_string(i) + " has label " +
                      std::to_string(r.true_label) + " / prediction " +
                      std::to_string(r.predicted_class) + " outside " + std::to_string(classes) +
                      " classes");
    }
    ++cm.at(static_cast<std::size_t>(r.true_label), r.predicted_class);
  }
  return cm;
}

namespace {

double Ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

ClassificationMetrics per_class_metrics(const ConfusionMatrix& cm) {
  const std::size_t k = cm.classes();
  const std::size_t total = cm.total();
  if (k == 0 || total == 0) throw DataError("per_class_metrics: empty confusion matrix");

  ClassificationMetrics out;
  out.per_class.resize(k);
  std::size_t correct = 0;
  std::size_t included = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t row = 0;
    std::size_t col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += cm.at(c, j);
      col += cm.at(j, c);
    }
    const auto tp = static_cast<double>(cm.at(c, c));
    const double fn = static_cast<double>(row) - tp;
    const double fp = static_cast<double>(col) - tp;
    const double tn = static_cast<double>(total) - tp - fn - fp;
    auto& m = out.per_class[c];
    m.support = row;
    m.precision = Ratio(tp, tp + fp);
    m.sensitivity = Ratio(tp, tp + fn);
    m.specificity = Ratio(tn, tn + fp);
    m.f1 = Ratio(2.0 * m.precision * m.sensitivity, m.precision + m.sensitivity);
    m.in_macro = tp + fp + fn > 0.0;
    correct += cm.at(c, c);
    if (!m.in_macro) continue;
    ++included;
    out.macro_precision += m.precision;
    out.macro_sensitivity += m.sensitivity;
    out.macro_specificity += m.specificity;
    out.macro_f1 += m.f1;
  }
  if (included > 0) {
    const auto n = static_cast<double>(included);
    out.macro_precision /= n;
    out.macro_sensitivity /= n;
    out.macro_specificity /= n;
    out.macro_f1 /= n;
  }
  out.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  return out;
}

std::optional<double> binary_auc(std::span<const double> scores, std::span<const int> positive) {
  if (scores.size() != positive.size()) throw ShapeError("binary_auc: size mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of midranks (1-based) of the positives.
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (positive[order[t]] != 0) {
        rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const auto p = static_cast<double>(n_pos);
  const auto q = static_cast<double>(n_neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

AucResult ovr_auc(std::span<const PredictionRecord> records, std::size_t classes) {
  AucResult out;
  out.per_class.resize(classes);
  std::vector<double> scores(records.size());
  std::vector<int> positive(records.size());
  double sum = 0.0;
  std::size_t eligible = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].probs.size() != classes) {
        throw ShapeError("ovr_auc: record " + std::to_string(i) + " has " +
                         std::to_string(records[i].probs.size()) + " class scores");
      }
      scores[i] = records[i].probs[c];
      positive[i] = records[i].true_label == static_cast<int>(c) ? 1 : 0;
    }
    out.per_class[c] = binary_auc(scores, positive);
    if (out.per_class[c]) {
      sum += *out.per_class[c];
      ++eligible;
    } else {
      out.excluded.push_back(c);
    }
  }
  if (eligible > 0) out.macro = sum / static_cast<double>(eligible);
  return out;
}

double ood_detection_rate(std::span<const double> uncertainty, double theta) {
  if (uncertainty.empty()) throw DataError("ood_detection_rate: no samples");
  const auto flagged = std::count_if(uncertainty.begin(), uncertainty.end(),
                                     [theta](double u) { return u >= theta; });
  return static_cast<double>(flagged) / static_cast<double>(uncertainty.size());
}

namespace {

MetricReport ReportOn(std::span<const PredictionRecord> kept, std::size_t classes,
                      std::size_t n_total) {
  MetricReport rep;
  rep.n_total = n_total;
  rep.n_evaluated = kept.size();
  rep.n_referred = n_total - kept.size();
  rep.referral_rate =
      n_total == 0 ? 0.0 : static_cast<double>(rep.n_referred) / static_cast<double>(n_total);
  rep.confusion = confusion(kept, classes);
  rep.available = !kept.empty();
  if (rep.available) {
    rep.metrics = per_class_metrics(rep.confusion);
    rep.auc = ovr_auc(kept, classes);
  }
  return rep;
}

}  // namespace

MetricReport full_report(std::span<const PredictionRecord> records, std::size_t classes) {
  return ReportOn(records, classes, records.size());
}

MetricReport thresholded_report(std::span<const PredictionRecord> records, std::size_t classes,
                                double theta) {
  std::vector<PredictionRecord> kept;
  kept.reserve(records.size());
  for (const auto& r : records) {
    if (confidence_of(r.uncertainty, theta) == Confidence::kHigh) kept.push_back(r);
  }
  return ReportOn(kept, classes, records.size());
}

}  // namespace uios
