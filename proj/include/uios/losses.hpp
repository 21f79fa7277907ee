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

#ifndef UIOS_LOSSES_HPP_
#define UIOS_LOSSES_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "uios/backbone.hpp"
#include "uios/evidential.hpp"
#include "uios/matrix.hpp"

namespace uios {

// Ground truth as a one-hot K-vector, stored by index.
class OneHotLabel {
 public:
  // Throws DomainError unless cls < classes.
  OneHotLabel(std::size_t cls, std::size_t classes);
  // Throws DomainError unless exactly one entry is 1 and the rest 0.
  static OneHotLabel from_vector(std::span<const double> y);

  std::size_t cls() const { return cls_; }
  std::size_t classes() const { return classes_; }
  double operator[](std::size_t k) const { return k == cls_ ? 1.0 : 0.0; }
  std::vector<double> to_vector() const;

 private:
  std::size_t cls_;
  std::size_t classes_;
};

inline constexpr double kTauStart = 0.01;
inline constexpr double kTauEnd = 1.0;
inline constexpr double kLogClampFloor = 1e-12;

// Annealing state for the KL weight lambda and the belief temperature
// tau. Both ramp linearly over anneal_epochs and then stay at 1:
//   lambda = min(1, epoch / anneal_epochs)
//   tau    = 0.01 + 0.99 * min(1, epoch / anneal_epochs)
struct ScheduleState {
  double lambda = 1.0;
  double tau = 1.0;
  int epoch = 0;
  int anneal_epochs = 10;

  static ScheduleState at(int epoch, int anneal_epochs = 10);
  bool operator==(const ScheduleState&) const = default;
};

// -sum y_k ln p_k with p clamped to [1e-12, 1].
double ce_loss(std::span<const double> p, const OneHotLabel& y);

// Expected cross-entropy under Dir(alpha): sum_k y_k (psi(S) - psi(alpha_k)).
double unce_loss(const DirichletParams& alpha, const OneHotLabel& y);

// alpha_hat = y + (1 - y) * alpha: the true class is reset to 1.
DirichletParams adjusted_alpha(const DirichletParams& alpha, const OneHotLabel& y);

// KL(Dir(alpha_hat) || Dir(1, ..., 1)).
double kl_loss(const DirichletParams& alpha_hat);

// unce + lambda * kl(adjusted_alpha).
double un_loss(const DirichletParams& alpha, const OneHotLabel& y, double lambda);

// -sum y_k ln(b_k / tau), b clamped to >= 1e-12. Negative once b_c > tau.
double tce_loss(const SubjectiveOpinion& opinion, const OneHotLabel& y, double tau);

// un_loss(lambda) + tce_loss(tau).
double tun_loss(const DirichletParams& alpha, const SubjectiveOpinion& opinion,
                const OneHotLabel& y, const ScheduleState& schedule);

enum class EvidentialLoss { kUnce, kKl, kUn, kTce, kTun };

double evidential_loss(EvidentialLoss kind, const DirichletParams& alpha, const OneHotLabel& y,
                       const ScheduleState& schedule);

// Closed-form d(loss)/d(alpha). The kl term differentiates through the
// adjustment, so its true-class component is always 0.
std::vector<double> loss_grad_alpha(EvidentialLoss kind, const DirichletParams& alpha,
                                    const OneHotLabel& y, const ScheduleState& schedule);

// Every objective that can sit on top of the backbone output.
// kCe applies softmax to the output; the rest go through
// softplus -> Dirichlet.
enum class LossKind { kCe, kUnce, kKl, kUn, kTce, kTun };

std::string_view to_string(LossKind kind);

// Mean loss over the batch rows and its gradient w.r.t. the outputs.
LossAndGrad batch_loss(LossKind kind, const Matrix& outputs, std::span<const int> labels,
                       const ScheduleState& schedule);

}  // namespace uios

#endif  // UIOS_LOSSES_HPP_
