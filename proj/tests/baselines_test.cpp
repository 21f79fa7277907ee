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

#include "uios/baselines.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "uios/calibration.hpp"
#include "uios/datagen.hpp"
#include "uios/errors.hpp"
#include "uios/numerics.hpp"

namespace uios {
namespace {

class BaselinesTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    BlobSpec spec;
    spec.classes = 3;
    spec.n_per_class = 80;
    spec.sigma = 1.4;
    spec.seed = 5;
    data_ = new Dataset(gen_blobs(spec));
    TrainConfig cfg;
    cfg.objective = Objective::kStandardCe;
    cfg.epochs = 30;
    cfg.learning_rate = 1e-2;
    cfg.hidden_dims = {16, 16};
    cfg.dropout_rate = 0.2;
    cfg.snapshot_count = 4;
    standard_ = new Model(train(*data_, nullptr, cfg).model);
    cfg.objective = Objective::kTun;
    evidential_ = new Model(train(*data_, nullptr, cfg).model);
  }
  static void TearDownTestSuite() {
    delete data_;
    delete standard_;
    delete evidential_;
  }
  static Dataset* data_;
  static Model* standard_;
  static Model* evidential_;
};

Dataset* BaselinesTest::data_ = nullptr;
Model* BaselinesTest::standard_ = nullptr;
Model* BaselinesTest::evidential_ = nullptr;

TEST(Method, ParseRoundTrip) {
  for (Method m : {Method::kUios, Method::kEntropy, Method::kMcDrop, Method::kEnsemble, Method::kTta}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_method("bayes"), UsageError);
}

TEST_F(BaselinesTest, EveryMethodScoresInUnitIntervalAndCalibrates) {
  for (Method m : {Method::kEntropy, Method::kMcDrop, Method::kEnsemble, Method::kTta}) {
    const auto scored = score(m, *standard_, data_->features);
    ASSERT_EQ(scored.size(), data_->size());
    for (const auto& s : scored) {
      ASSERT_GE(s.uncertainty, 0.0) << to_string(m);
      ASSERT_LE(s.uncertainty, 1.0) << to_string(m);
      double sum = 0.0;
      for (double p : s.probs) sum += p;
      ASSERT_NEAR(sum, 1.0, 1e-12);
      ASSERT_EQ(s.predicted_class, numerics::argmax(s.probs));
    }
    EXPECT_NO_THROW(calibrate(to_records(scored, *data_))) << to_string(m);
  }
}

TEST_F(BaselinesTest, UiosMatchesOpinions) {
  const auto scored = uios_predict(*evidential_, data_->features);
  const auto ops = predict_opinions(*evidential_, data_->features);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    EXPECT_EQ(scored[i].uncertainty, ops[i].uncertainty);
    EXPECT_EQ(scored[i].predicted_class, ops[i].predicted_class);
  }
}

TEST_F(BaselinesTest, EntropyIsNormalised) {
  const auto scored = entropy_uncertainty(*standard_, data_->features);
  const Matrix p = predict_softmax(*standard_, data_->features);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(scored[i].uncertainty, numerics::entropy(p.row(i)) / std::log(3.0), 1e-12);
  }
}

TEST_F(BaselinesTest, StochasticMethodsAreSeeded) {
  const auto a = mc_dropout_predict(*standard_, data_->features, 5, 0.2, 9);
  const auto b = mc_dropout_predict(*standard_, data_->features, 5, 0.2, 9);
  const auto c = mc_dropout_predict(*standard_, data_->features, 5, 0.2, 10);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].uncertainty, b[i].uncertainty);
    differs |= a[i].uncertainty != c[i].uncertainty;
  }
  EXPECT_TRUE(differs);
  const auto t1 = tta_predict(*standard_, data_->features, 4, 0.3, 1);
  const auto t2 = tta_predict(*standard_, data_->features, 4, 0.3, 1);
  for (std::size_t i = 0; i < t1.size(); ++i) ASSERT_EQ(t1[i].probs, t2[i].probs);
}

TEST_F(BaselinesTest, ParameterValidation) {
  EXPECT_THROW(mc_dropout_predict(*standard_, data_->features, 1, 0.2, 1), UsageError);
  EXPECT_THROW(tta_predict(*standard_, data_->features, 4, 0.0, 1), UsageError);
  EXPECT_THROW(snapshot_ensemble_predict(std::vector<MlpParams>{standard_->params}, data_->features), UsageError);
  EXPECT_THROW(score(Method::kEntropy, *standard_, Matrix(2, 5)), ShapeError);
}

TEST_F(BaselinesTest, ForwardPassCounts) {
  ScorerParams p;
  p.passes = 7;
  EXPECT_EQ(forward_passes_per_sample(Method::kUios, *evidential_, p), 1u);
  EXPECT_EQ(forward_passes_per_sample(Method::kEntropy, *standard_, p), 1u);
  EXPECT_EQ(forward_passes_per_sample(Method::kMcDrop, *standard_, p), 7u);
  EXPECT_EQ(forward_passes_per_sample(Method::kTta, *standard_, p), 7u);
  EXPECT_EQ(forward_passes_per_sample(Method::kEnsemble, *standard_, p), 4u);
}

TEST_F(BaselinesTest, RecordsCarryLabels) {
  const auto recs = to_records(score(Method::kEntropy, *standard_, data_->features), *data_);
  ASSERT_EQ(recs.size(), data_->size());
  EXPECT_EQ(recs[7].true_label, data_->labels[7]);
}

}  // namespace
}  // namespace uios
