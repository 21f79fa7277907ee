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

#ifndef UIOS_NUMERICS_HPP_
#define UIOS_NUMERICS_HPP_

#include <span>
#include <vector>

namespace uios::numerics {

// ln(1 + e^x), overflow safe. Strictly positive for finite x.
double softplus(double x);

// Derivative of softplus, i.e. the logistic sigmoid.
double sigmoid(double x);

// log Gamma(x) for x > 0. Lanczos approximation (g = 7, 9 terms) for
// x >= 0.5 and the recurrence lgamma(x) = lgamma(x + 1) - ln x below
// that. Throws DomainError for x <= 0.
double log_gamma(double x);

// psi(x) for x > 0. The argument is shifted above 10 with
// psi(x) = psi(x + 1) - 1/x, then the asymptotic Bernoulli series is
// summed. Throws DomainError for x <= 0.
double digamma(double x);

// psi'(x) for x > 0, same shift-then-asymptotic strategy.
double trigamma(double x);

// log B(alpha) = sum_k lgamma(alpha_k) - lgamma(sum_k alpha_k).
double log_multinomial_beta(std::span<const double> alpha);

// Max-subtracted softmax. Throws DomainError on empty input.
std::vector<double> softmax(std::span<const double> logits);

// Shannon entropy in nats with 0 ln 0 = 0. The input must be a
// distribution (entries >= 0, sum within 1e-6 of 1).
double entropy(std::span<const double> p);

// Index of the largest element; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

}  // namespace uios::numerics

#endif  // UIOS_NUMERICS_HPP_
