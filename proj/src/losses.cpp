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

#include "uios/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uios/errors.hpp"
#include "uios/numerics.hpp"

namespace uios {

using numerics::digamma;
using numerics::log_gamma;
using numerics::trigamma;

OneHotLabel::OneHotLabel(std::size_t cls, std::size_t classes) : cls_(cls), classes_(classes) {
  if (cls >= classes) {
    throw DomainError("label " + std::to_string(cls) + " out of range for " +
                      std::to_string(classes) + " classes");
  }
}

OneHotLabel OneHotLabel::from_vector(std::span<const double> y) {
  std::size_t hot = y.size();
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k] == 1.0 && hot == y.size()) {
      hot = k;
    } else if (y[k] != 0.0) {
      throw DomainError("one-hot label must contain exactly one 1 and zeros elsewhere");
    }
  }
  if (hot == y.size()) throw DomainError("one-hot label has no hot entry");
  return OneHotLabel(hot, y.size());
}

std::vector<double> OneHotLabel::to_vector() const {
  std::vector<double> y(classes_, 0.0);
  y[cls_] = 1.0;
  return y;
}

ScheduleState ScheduleState::at(int epoch, int anneal_epochs) {
  const double progress =
      anneal_epochs <= 0 ? 1.0
                         : std::min(1.0, static_cast<double>(std::max(epoch, 0)) / anneal_epochs);
  return {progress, kTauStart + (kTauEnd - kTauStart) * progress, epoch, anneal_epochs};
}

namespace {

void CheckDims(std::size_t got, const OneHotLabel& y, const char* fn) {
  if (got != y.classes()) {
    throw ShapeError(std::string(fn) + ": " + std::to_string(got) + " classes but label has " +
                     std::to_string(y.classes()));
  }
}

void CheckAlpha(const DirichletParams& d, const char* fn) {
  for (double a : d.alpha) {
    if (!(a >= 1.0) || !std::isfinite(a)) {
      throw DomainError(std::string(fn) + ": concentration below 1 or non-finite");
    }
  }
}

double Strength(std::span<const double> alpha) {
  double s = 0.0;
  for (double a : alpha) s += a;
  return s;
}

struct Terms {
  double loss = 0.0;
  std::vector<double> grad;  // d/d alpha
};

// `evidence_c` is alpha_c - 1, passed separately so the feature path can
// supply softplus(f_c) without the cancellation of (1 + e) - 1.
Terms Evaluate(EvidentialLoss kind, std::span<const double> alpha, double evidence_c,
               std::size_t c, const ScheduleState& schedule) {
  const std::size_t k = alpha.size();
  const double s = Strength(alpha);
  Terms t{0.0, std::vector<double>(k, 0.0)};

  const bool want_unce = kind == EvidentialLoss::kUnce || kind == EvidentialLoss::kUn ||
                         kind == EvidentialLoss::kTun;
  const bool want_kl = kind == EvidentialLoss::kKl || kind == EvidentialLoss::kUn ||
                       kind == EvidentialLoss::kTun;
  const bool want_tce = kind == EvidentialLoss::kTce || kind == EvidentialLoss::kTun;
  const double kl_weight = kind == EvidentialLoss::kKl ? 1.0 : schedule.lambda;

  if (want_unce) {
    t.loss += digamma(s) - digamma(alpha[c]);
    const double tri_s = trigamma(s);
    for (std::size_t j = 0; j < k; ++j) t.grad[j] += tri_s;
    t.grad[c] -= trigamma(alpha[c]);
  }

  if (want_kl && kl_weight != 0.0) {
    double s_hat = 0.0;
    for (std::size_t j = 0; j < k; ++j) s_hat += j == c ? 1.0 : alpha[j];
    const double psi_s_hat = digamma(s_hat);
    const double tri_s_hat = trigamma(s_hat);
    double kl = log_gamma(s_hat) - log_gamma(static_cast<double>(k));
    for (std::size_t j = 0; j < k; ++j) {
      if (j == c || alpha[j] == 1.0) continue;  // exact zero contribution
      kl += -log_gamma(alpha[j]) + (alpha[j] - 1.0) * (digamma(alpha[j]) - psi_s_hat);
    }
    t.loss += kl_weight * kl;
    const double common = (s_hat - static_cast<double>(k)) * tri_s_hat;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == c) continue;
      t.grad[j] += kl_weight * ((alpha[j] - 1.0) * trigamma(alpha[j]) - common);
    }
  }

  if (want_tce) {
    if (!(schedule.tau > 0.0)) throw DomainError("tce: temperature must be > 0");
    const double b_c = evidence_c / s;
    if (b_c < kLogClampFloor) {
      t.loss += -std::log(kLogClampFloor / schedule.tau);
    } else {
      t.loss += -std::log(b_c / schedule.tau);
      for (std::size_t j = 0; j < k; ++j) t.grad[j] += 1.0 / s;
      t.grad[c] -= 1.0 / evidence_c;
    }
  }
  return t;
}

}  // namespace

double ce_loss(std::span<const double> p, const OneHotLabel& y) {
  CheckDims(p.size(), y, "ce_loss");
  return -std::log(std::clamp(p[y.cls()], kLogClampFloor, 1.0));
}

double unce_loss(const DirichletParams& alpha, const OneHotLabel& y) {
  CheckDims(alpha.classes(), y, "unce_loss");
  CheckAlpha(alpha, "unce_loss");
  return digamma(Strength(alpha.alpha)) - digamma(alpha.alpha[y.cls()]);
}

DirichletParams adjusted_alpha(const DirichletParams& alpha, const OneHotLabel& y) {
  CheckDims(alpha.classes(), y, "adjusted_alpha");
  DirichletParams out = alpha;
  out.alpha[y.cls()] = 1.0;
  out.strength = Strength(out.alpha);
  return out;
}

double kl_loss(const DirichletParams& alpha_hat) {
  CheckAlpha(alpha_hat, "kl_loss");
  const std::size_t k = alpha_hat.classes();
  if (k == 0) throw DomainError("kl_loss: no classes");
  const double s = Strength(alpha_hat.alpha);
  const double psi_s = digamma(s);
  double kl = log_gamma(s) - log_gamma(static_cast<double>(k));
  for (double a : alpha_hat.alpha) {
    if (a == 1.0) continue;
    kl += -log_gamma(a) + (a - 1.0) * (digamma(a) - psi_s);
  }
  return kl;
}

double un_loss(const DirichletParams& alpha, const OneHotLabel& y, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("un_loss: lambda must lie in [0, 1]");
  const double unce = unce_loss(alpha, y);
  if (lambda == 0.0) return unce;
  return unce + lambda * kl_loss(adjusted_alpha(alpha, y));
}

double tce_loss(const SubjectiveOpinion& opinion, const OneHotLabel& y, double tau) {
  CheckDims(opinion.beliefs.size(), y, "tce_loss");
  if (!(tau > 0.0)) throw DomainError("tce_loss: temperature must be > 0");
  const double b = std::max(opinion.beliefs[y.cls()], kLogClampFloor);
  return -std::log(b / tau);
}

double tun_loss(const DirichletParams& alpha, const SubjectiveOpinion& opinion,
                const OneHotLabel& y, const ScheduleState& schedule) {
  return un_loss(alpha, y, schedule.lambda) + tce_loss(opinion, y, schedule.tau);
}

double evidential_loss(EvidentialLoss kind, const DirichletParams& alpha, const OneHotLabel& y,
                       const ScheduleState& schedule) {
  CheckDims(alpha.classes(), y, "evidential_loss");
  CheckAlpha(alpha, "evidential_loss");
  const std::size_t c = y.cls();
  return Evaluate(kind, alpha.alpha, alpha.alpha[c] - 1.0, c, schedule).loss;
}

std::vector<double> loss_grad_alpha(EvidentialLoss kind, const DirichletParams& alpha,
                                    const OneHotLabel& y, const ScheduleState& schedule) {
  CheckDims(alpha.classes(), y, "loss_grad_alpha");
  CheckAlpha(alpha, "loss_grad_alpha");
  const std::size_t c = y.cls();
  return Evaluate(kind, alpha.alpha, alpha.alpha[c] - 1.0, c, schedule).grad;
}

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kCe: return "ce";
    case LossKind::kUnce: return "unce";
    case LossKind::kKl: return "kl";
    case LossKind::kUn: return "un";
    case LossKind::kTce: return "tce";
    case LossKind::kTun: return "tun";
  }
  return "?";
}

LossAndGrad batch_loss(LossKind kind, const Matrix& outputs, std::span<const int> labels,
                       const ScheduleState& schedule) {
  if (outputs.rows() != labels.size()) {
    throw ShapeError("batch_loss: " + std::to_string(outputs.rows()) + " outputs but " +
                     std::to_string(labels.size()) + " labels");
  }
  if (outputs.rows() == 0) throw DataError("batch_loss: empty batch");
  const std::size_t k = outputs.cols();
  const double inv_n = 1.0 / static_cast<double>(outputs.rows());
  LossAndGrad out{0.0, Matrix(outputs.rows(), k)};

  EvidentialLoss ev_kind = EvidentialLoss::kTun;
  switch (kind) {
    case LossKind::kUnce: ev_kind = EvidentialLoss::kUnce; break;
    case LossKind::kKl: ev_kind = EvidentialLoss::kKl; break;
    case LossKind::kUn: ev_kind = EvidentialLoss::kUn; break;
    case LossKind::kTce: ev_kind = EvidentialLoss::kTce; break;
    case LossKind::kTun: ev_kind = EvidentialLoss::kTun; break;
    case LossKind::kCe: break;
  }

  std::vector<double> alpha(k);
  std::vector<double> evidence(k);
  for (std::size_t r = 0; r < outputs.rows(); ++r) {
    if (labels[r] < 0) throw DataError("batch_loss: unlabeled (OOD) row in training batch");
    const OneHotLabel y(static_cast<std::size_t>(labels[r]), k);
    const auto f = outputs.row(r);
    auto g = out.grad.row(r);
    if (kind == LossKind::kCe) {
      const auto p = numerics::softmax(f);
      out.loss += ce_loss(p, y);
      if (p[y.cls()] >= kLogClampFloor) {
        for (std::size_t j = 0; j < k; ++j) g[j] = (p[j] - y[j]) * inv_n;
      }
      continue;
    }
    for (std::size_t j = 0; j < k; ++j) {
      evidence[j] = numerics::softplus(f[j]);
      alpha[j] = evidence[j] + 1.0;
    }
    const auto terms = Evaluate(ev_kind, alpha, evidence[y.cls()], y.cls(), schedule);
    out.loss += terms.loss;
    for (std::size_t j = 0; j < k; ++j) g[j] = terms.grad[j] * numerics::sigmoid(f[j]) * inv_n;
  }
  out.loss *= inv_n;
  if (!std::isfinite(out.loss)) throw NumericError("batch_loss: non-finite loss");
  return out;
}

}  // namespace uios
