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

#include "uios/evidential.hpp"

#include <cmath>
#include <string>

#include "uios/errors.hpp"
#include "uios/numerics.hpp"

namespace uios {

Evidence evidence_from_features(std::span<const double> f_out) {
  Evidence ev;
  ev.e.reserve(f_out.size());
  for (double f : f_out) {
    if (!std::isfinite(f)) throw NumericError("evidence_from_features: non-finite feature");
    ev.e.push_back(numerics::softplus(f));
  }
  return ev;
}

DirichletParams dirichlet_from_evidence(const Evidence& evidence) {
  DirichletParams d;
  d.alpha.reserve(evidence.e.size());
  for (double e : evidence.e) {
    d.alpha.push_back(e + 1.0);
    d.strength += e + 1.0;
  }
  return d;
}

DirichletParams dirichlet_from_alpha(std::vector<double> alpha) {
  if (alpha.empty()) throw DomainError("Dirichlet: empty concentration vector");
  DirichletParams d;
  for (double a : alpha) {
    if (!(a >= 1.0) || !std::isfinite(a)) {
      throw DomainError("Dirichlet: concentration " + std::to_string(a) + " is below 1");
    }
    d.strength += a;
  }
  d.alpha = std::move(alpha);
  return d;
}

SubjectiveOpinion opinion_from_alpha(const DirichletParams& d) {
  const std::size_t k = d.classes();
  if (k == 0) throw DomainError("opinion_from_alpha: no classes");
  SubjectiveOpinion op;
  op.beliefs.resize(k);
  op.probs.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    op.beliefs[i] = (d.alpha[i] - 1.0) / d.strength;
    op.probs[i] = d.alpha[i] / d.strength;
  }
  op.uncertainty = static_cast<double>(k) / d.strength;
  op.predicted_class = numerics::argmax(d.alpha);
  return op;
}

SubjectiveOpinion opinion_from_features(std::span<const double> f_out) {
  const Evidence ev = evidence_from_features(f_out);
  SubjectiveOpinion op = opinion_from_alpha(dirichlet_from_evidence(ev));
  // Beliefs straight from evidence; (1 + e) - 1 loses e below ~1e-16.
  double strength = 0.0;
  for (double e : ev.e) strength += e + 1.0;
  for (std::size_t i = 0; i < ev.e.size(); ++i) op.beliefs[i] = ev.e[i] / strength;
  return op;
}

double dirichlet_log_pdf(const DirichletParams& d, std::span<const double> p) {
  if (p.size() != d.classes()) {
    throw ShapeError("dirichlet_log_pdf: point has " + std::to_string(p.size()) +
                     " coordinates for " + std::to_string(d.classes()) + " classes");
  }
  double total = 0.0;
  double log_kernel = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0 && p[i] < 1.0)) {
      throw DomainError("dirichlet_log_pdf: point is not in the open simplex");
    }
    total += p[i];
    log_kernel += (d.alpha[i] - 1.0) * std::log(p[i]);
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("dirichlet_log_pdf: coordinates sum to " + std::to_string(total));
  }
  return log_kernel - numerics::log_multinomial_beta(d.alpha);
}

}  // namespace uios
