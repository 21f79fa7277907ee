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

#ifndef UIOS_EVIDENTIAL_HPP_
#define UIOS_EVIDENTIAL_HPP_

#include <span>
#include <vector>

namespace uios {

// Non-negative per-class support, softplus of the backbone output.
struct Evidence {
  std::vector<double> e;
};

// Dirichlet concentration alpha = e + 1 and its strength S = sum(alpha).
struct DirichletParams {
  std::vector<double> alpha;
  double strength = 0.0;

  std::size_t classes() const { return alpha.size(); }
};

// Subjective-logic opinion over K classes:
//   b_k = (alpha_k - 1) / S,  u = K / S,  p_k = alpha_k / S
// sum(b) + u = 1 and p_k = b_k + u / K.
struct SubjectiveOpinion {
  std::vector<double> beliefs;
  double uncertainty = 1.0;
  std::vector<double> probs;
  // argmax of probs, lowest index on ties.
  std::size_t predicted_class = 0;
};

Evidence evidence_from_features(std::span<const double> f_out);

DirichletParams dirichlet_from_evidence(const Evidence& evidence);

// Builds a DirichletParams from raw concentrations; throws DomainError
// if any alpha_k < 1 or is non-finite.
DirichletParams dirichlet_from_alpha(std::vector<double> alpha);

SubjectiveOpinion opinion_from_alpha(const DirichletParams& d);

// Features -> evidence -> Dirichlet -> opinion in one call.
SubjectiveOpinion opinion_from_features(std::span<const double> f_out);

// log Dir(p | alpha). p must lie strictly inside the simplex (entries in
// (0, 1), sum within 1e-9 of 1); anything else throws DomainError since
// the log density is -inf there.
double dirichlet_log_pdf(const DirichletParams& d, std::span<const double> p);

}  // namespace uios

#endif  // UIOS_EVIDENTIAL_HPP_
