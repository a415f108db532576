// Copyright 2026 The steplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "steplab/error.hpp"
#include "steplab/neuroreg.hpp"
#include "steplab/simlab.hpp"

namespace steplab {
namespace {

TEST(Regulator, SeededDeterminism) {
  const NeuralRegulator a(16, 42), b(16, 42), c(16, 43);
  EXPECT_EQ(a.V(), b.V());
  EXPECT_NE(a.V(), c.V());
  EXPECT_EQ(a.V().rows(), NeuralRegulator::kInputs);
  EXPECT_EQ(a.V().cols(), 16);
}

TEST(Regulator, ZeroOutputBeforeTraining) {
  const NeuralRegulator r(16, 42);
  for (double p : {-0.2, 0.0, 0.13}) {
    for (double v : {-0.5, 0.4}) {
      EXPECT_EQ(r.forward({p, v}, 0.3, -0.1).phi, 0.0);
    }
  }
}

TEST(Regulator, InputWeightStatistics) {
  const NeuralRegulator r(16, 42);
  EXPECT_LE(std::abs(r.V().mean()), 3.0 / std::sqrt(64.0));
}

TEST(Regulator, RejectsBadShape) {
  EXPECT_THROW(NeuralRegulator(0, 1), ParameterError);
  EXPECT_THROW(NeuralRegulator(4, 1, 0.0), ParameterError);
  EXPECT_THROW(NeuralRegulator(Eigen::MatrixXd::Ones(3, 2),
                               Eigen::VectorXd::Zero(2), 1e-4, 0),
               ParameterError);
}

TEST(Regulator, HandEvaluatedForward) {
  Eigen::MatrixXd V(4, 1);
  V << 1.0, 0.0, 0.0, 0.0;
  const NeuralRegulator r(V, Eigen::VectorXd::Ones(1), 1e-4, 0);
  EXPECT_NEAR(r.forward({0.1, 0.7}, 0.2, 0.1).phi, 0.0993392764294354, 1e-15);
  EXPECT_NEAR(r.forward({0.1, 0.7}, 0.2, 0.1).phi,
              std::tanh(std::tanh(0.1)), 1e-15);
}

TEST(DeltaRule, ZeroErrorLeavesWeights) {
  NeuralRegulator r(8, 5);
  const RegulatorOutput out = r.forward({0.1, 0.2}, 0.1, 0.0);
  const DeltaReport rep = r.delta_update({0.1, 0.2}, {0.1, 0.2}, out.hidden);
  EXPECT_EQ(rep.max_abs_dw, 0.0);
  EXPECT_EQ(r.W(), Eigen::VectorXd::Zero(8));
}

TEST(DeltaRule, LearningRateStep) {
  NeuralRegulator r(3, 5, 1e-4);
  const DeltaReport rep = r.apply_delta(0.1, Eigen::Vector3d::Constant(0.5));
  EXPECT_FALSE(rep.skipped);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.W()(i), -5e-6, 1e-20);
}

TEST(DeltaRule, ErrorSignalWeights) {
  const LipParams p = make_params(9.81, 1.0, 0.4);
  const NeuralRegulator r(4, 1, 1e-4, default_error_weights(p));
  const double s2 = orbital_lines(p, 0.0).sigma2;
  EXPECT_NEAR(r.error_signal({0.11, 0.32}, {0.1, 0.3}), 0.01 + 0.02 / s2,
              1e-15);
}

TEST(DeltaRule, NonFiniteErrorSkipped) {
  NeuralRegulator r(4, 1);
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  const DeltaReport rep = r.apply_delta(nan, Eigen::Vector4d::Ones());
  EXPECT_TRUE(rep.skipped);
  EXPECT_EQ(r.W(), Eigen::VectorXd::Zero(4));
}

TEST(Snapshot, JsonRoundTrip) {
  NeuralRegulator r(6, 9, 2e-4, {1.0, 0.5});
  r.apply_delta(0.3, r.forward({0.1, 0.2}, 0.1, 0.0).hidden);
  const NeuralRegulator back = NeuralRegulator::from_json(r.to_json());
  EXPECT_EQ(back.V(), r.V());
  EXPECT_EQ(back.W(), r.W());
  EXPECT_EQ(back.gamma(), r.gamma());
  EXPECT_EQ(back.seed(), r.seed());
  EXPECT_EQ(back.error_weights().velocity, 0.5);
  EXPECT_THROW(NeuralRegulator::from_json("{\"schema\": 2}"), SchemaError);
}

double window_mean(const EpisodeLog& log, int from, int to) {
  double s = 0.0;
  for (int k = from; k < to; ++k) s += log.steps[k].error_norm;
  return s / (to - from);
}

// Closed-loop learning on the mismatched step-to-step plant.
TEST(Learning, ErrorDecreasesOverFiveHundredSteps) {
  S2sConfig c;
  c.schedule = {{0.1, 0.0, 500}};
  c.frontal_mismatch.mode = MismatchMode::kImpactLoss;
  c.frontal_mismatch.kappa = 0.2;
  c.adaptation.enabled = true;
  c.adaptation.seed = 42;
  const EpisodeLog log = run_s2s_episode(c);
  ASSERT_EQ(log.steps.size(), 500u);
  const double early = window_mean(log, 40, 60);
  const double late = window_mean(log, 480, 500);
  EXPECT_LT(late, early);
  EXPECT_GT(std::abs(log.steps.back().nn_weight_norm), 0.0);
}

}  // namespace
}  // namespace steplab
