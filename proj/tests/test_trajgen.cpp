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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "steplab/error.hpp"
#include "steplab/trajgen.hpp"

namespace steplab {
namespace {

// Explicit Bernstein sum.
Eigen::Vector3d bernstein(const std::vector<Eigen::Vector3d>& P, double s) {
  const int n = static_cast<int>(P.size()) - 1;
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  double binom = 1.0;
  for (int i = 0; i <= n; ++i) {
    out += binom * std::pow(s, i) * std::pow(1.0 - s, n - i) * P[i];
    binom = binom * (n - i) / (i + 1);
  }
  return out;
}

TEST(SwingCurve, InPlaceStepLifts) {
  const Eigen::Vector3d p(0.1, -0.2, -1.0);
  const BezierCurve c = make_swing_curve(p, 0.1, -0.2, 1.0, 0.08, 0.4);
  EXPECT_LE((eval_curve(c, 0.0).position - p).norm(), 1e-12);
  EXPECT_LE((eval_curve(c, 0.4).position - p).norm(), 1e-12);
  EXPECT_GE(eval_curve(c, 0.2).position.z(), p.z() + 0.08 - 1e-12);
}

TEST(SwingCurve, SoftTouchdownFiniteDifference) {
  const BezierCurve c =
      make_swing_curve({-0.1, 0.3, -1.0}, 0.12, -0.3, 1.0, 0.08, 0.4);
  const double h = 1e-6;
  const Eigen::Vector3d v =
      (bernstein(c.control_points(), 1.0) -
       bernstein(c.control_points(), 1.0 - h / 0.4)) / h;
  EXPECT_LE(std::abs(v.z()), 1e-4);
  EXPECT_LE(eval_curve(c, 0.4).velocity.norm(), 1e-12);
  EXPECT_LE(eval_curve(c, 0.0).velocity.norm(), 1e-12);
}

TEST(SwingCurve, RandomCommandsMeetContract) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.4, 0.4), lift(0.0, 0.05),
      apex(0.03, 0.15);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d p0(u(rng), u(rng), -1.0 + lift(rng));
    const double ux = u(rng), uy = u(rng), a = apex(rng);
    const BezierCurve c = make_swing_curve(p0, ux, uy, 1.0, a, 0.4);
    const Eigen::Vector3d pf(ux, uy, -1.0);
    EXPECT_LE((eval_curve(c, 0.0).position - p0).norm(), 1e-12);
    EXPECT_LE((eval_curve(c, 0.4).position - pf).norm(), 1e-12);
    double top = -1e9;
    for (int k = 0; k <= 400; ++k) {
      top = std::max(top, eval_curve(c, 0.4 * k / 400).position.z());
    }
    EXPECT_GE(top, std::max(p0.z(), pf.z()) + a - 1e-12);
  }
}

TEST(SwingCurve, RejectsDegenerateDuration) {
  EXPECT_THROW(make_swing_curve({0, 0, -1}, 0.1, 0.0, 1.0, 0.08, 0.0),
               ParameterError);
  EXPECT_THROW(BezierCurve({Eigen::Vector3d::Zero()}, 0.4), ParameterError);
}

TEST(EvalCurve, ConstantCurve) {
  const Eigen::Vector3d p(0.3, -0.1, 0.2);
  const BezierCurve c(std::vector<Eigen::Vector3d>(6, p), 0.4);
  for (double t : {0.0, 0.1, 0.33, 0.4}) {
    const CurveSample s = eval_curve(c, t);
    EXPECT_LE((s.position - p).norm(), 1e-15);
    EXPECT_LE(s.velocity.norm(), 1e-15);
  }
}

TEST(EvalCurve, LinearCurveMidpoint) {
  std::vector<Eigen::Vector3d> P;
  for (int i = 0; i <= 5; ++i) P.emplace_back(0.12 * i / 5.0, 0.0, 0.0);
  const BezierCurve c(P, 0.4);
  EXPECT_LE((eval_curve(c, 0.2).position - Eigen::Vector3d(0.06, 0, 0)).norm(),
            1e-15);
}

TEST(EvalCurve, RandomCurveMatchesOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Eigen::Vector3d> P;
    for (int i = 0; i <= 5; ++i) P.emplace_back(u(rng), u(rng), u(rng));
    const double T = 0.3 + 0.2 * (u(rng) + 1.0);
    const BezierCurve c(P, T);
    const double h = 1e-6;
    for (double s : {0.05, 0.3, 0.5, 0.77, 0.95}) {
      const double t = s * T;
      const CurveSample sm = eval_curve(c, t);
      EXPECT_LE((sm.position - bernstein(P, s)).norm(), 1e-12);
      const Eigen::Vector3d fd =
          (bernstein(P, (t + h) / T) - bernstein(P, (t - h) / T)) / (2 * h);
      EXPECT_LE((sm.velocity - fd).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(EvalCurve, ClampsOutsideDuration) {
  const BezierCurve c =
      make_swing_curve({0, 0.2, -1.0}, 0.1, -0.1, 1.0, 0.08, 0.4);
  const CurveSample late = eval_curve(c, 0.5);
  EXPECT_TRUE(late.clamped);
  EXPECT_EQ(late.position, eval_curve(c, 0.4).position);
  EXPECT_TRUE(eval_curve(c, -0.1).clamped);
  EXPECT_FALSE(eval_curve(c, 0.4).clamped);
}

TEST(ComReference, ConstantHeight) {
  const ComReference r = com_reference(1.0);
  EXPECT_EQ(r.height, 1.0);
  EXPECT_EQ(r.vertical_velocity, 0.0);
  EXPECT_TRUE(r.rotation.isApprox(Eigen::Quaterniond::Identity()));
  EXPECT_THROW(com_reference(0.0), ParameterError);
}

}  // namespace
}  // namespace steplab
