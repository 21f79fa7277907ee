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
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "uios/errors.hpp"
#include "uios/numerics.hpp"
#include "uios/random.hpp"

namespace uios {
namespace {

TEST(Opinion, WorkedExample) {
  // alpha = (5, 2, 1): S = 8, K = 3.
  const auto d = dirichlet_from_alpha({5.0, 2.0, 1.0});
  EXPECT_EQ(d.strength, 8.0);
  const auto op = opinion_from_alpha(d);
  EXPECT_DOUBLE_EQ(op.beliefs[0], 0.5);
  EXPECT_DOUBLE_EQ(op.beliefs[1], 0.125);
  EXPECT_DOUBLE_EQ(op.beliefs[2], 0.0);
  EXPECT_DOUBLE_EQ(op.uncertainty, 0.375);
  EXPECT_DOUBLE_EQ(op.probs[0], 0.625);
  EXPECT_EQ(op.predicted_class, 0u);
}

TEST(Opinion, ZeroEvidenceIsTotalUncertainty) {
  const auto op = opinion_from_alpha(dirichlet_from_alpha({1.0, 1.0, 1.0, 1.0}));
  EXPECT_EQ(op.uncertainty, 1.0);
  for (double b : op.beliefs) EXPECT_EQ(b, 0.0);
  for (double p : op.probs) EXPECT_EQ(p, 0.25);
  EXPECT_EQ(op.predicted_class, 0u);
}

TEST(Opinion, IdentitiesOnRandomFeatures) {
  Rng rng(17);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t k = 2 + rng.index(15);
    std::vector<double> f(k);
    for (double& v : f) v = rng.normal(0.0, 8.0);
    const auto op = opinion_from_features(f);
    double sum_b = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      sum_b += op.beliefs[j];
      ASSERT_NEAR(op.probs[j], op.beliefs[j] + op.uncertainty / static_cast<double>(k), 1e-12);
      ASSERT_GE(op.beliefs[j], 0.0);
    }
    ASSERT_NEAR(sum_b + op.uncertainty, 1.0, 1e-12);
    ASSERT_GT(op.uncertainty, 0.0);
    ASSERT_LE(op.uncertainty, 1.0);
  }
}

TEST(Opinion, MoreEvidenceLowersUncertainty) {
  const auto a = opinion_from_features(std::vector<double>{1.0, 0.0, 0.0});
  const auto b = opinion_from_features(std::vector<double>{5.0, 0.0, 0.0});
  EXPECT_LT(b.uncertainty, a.uncertainty);
}

TEST(Evidence, SoftplusOfFeatures) {
  const auto e = evidence_from_features(std::vector<double>{0.0, -50.0, 40.0});
  EXPECT_NEAR(e.e[0], std::log(2.0), 1e-15);
  EXPECT_GT(e.e[1], 0.0);
  EXPECT_NEAR(e.e[2], 40.0, 1e-15);
  EXPECT_THROW(evidence_from_features(std::vector<double>{std::numeric_limits<double>::quiet_NaN()}),
               NumericError);
  const auto d = dirichlet_from_evidence(e);
  EXPECT_NEAR(d.strength, 3.0 + e.e[0] + e.e[1] + e.e[2], 1e-12);
}

TEST(Dirichlet, RejectsConcentrationBelowOne) {
  EXPECT_THROW(dirichlet_from_alpha({0.5, 2.0}), DomainError);
  EXPECT_THROW(dirichlet_from_alpha({}), DomainError);
}

TEST(DirichletLogPdf, BetaDensity) {
  // Beta(2, 3) at 0.3: 12 * 0.3 * 0.7^2.
  const auto d = dirichlet_from_alpha({2.0, 3.0});
  EXPECT_NEAR(dirichlet_log_pdf(d, std::vector<double>{0.3, 0.7}), std::log(12.0 * 0.3 * 0.49), 1e-13);
  // Flat Dirichlet over 3 classes has density 2 everywhere.
  const auto flat = dirichlet_from_alpha({1.0, 1.0, 1.0});
  EXPECT_NEAR(dirichlet_log_pdf(flat, std::vector<double>{0.2, 0.3, 0.5}), std::log(2.0), 1e-14);
}

TEST(DirichletLogPdf, IntegratesToOne) {
  const auto d = dirichlet_from_alpha({2.0, 3.0, 1.5});
  const int n = 400;
  const double h = 1.0 / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; i + j < n - 1; ++j) {
      const double x = (i + 0.5) * h, y = (j + 0.5) * h;
      total += std::exp(dirichlet_log_pdf(d, std::vector<double>{x, y, 1.0 - x - y})) * h * h;
    }
  }
  EXPECT_NEAR(total, 1.0, 5e-3);
}

TEST(DirichletLogPdf, RejectsPointsOffTheOpenSimplex) {
  const auto d = dirichlet_from_alpha({2.0, 2.0});
  EXPECT_THROW(dirichlet_log_pdf(d, std::vector<double>{0.0, 1.0}), DomainError);
  EXPECT_THROW(dirichlet_log_pdf(d, std::vector<double>{0.4, 0.5}), DomainError);
  EXPECT_THROW(dirichlet_log_pdf(d, std::vector<double>{0.2, 0.3, 0.5}), ShapeError);
}

}  // namespace
}  // namespace uios
