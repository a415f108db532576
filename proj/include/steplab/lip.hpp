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

// Linear inverted pendulum (LIP) template: closed-form flow, step-to-step
// matrices, orbital lines and the periodic pre-impact targets for forward
// (one-step periodic) and lateral (two-step periodic) walking.
//
// A single 1-D state type serves both the sagittal and the frontal plane; the
// caller keeps track of which plane a state belongs to.

#ifndef STEPLAB_LIP_HPP_
#define STEPLAB_LIP_HPP_

#include <Eigen/Core>

namespace steplab {

// Pendulum constants. Construct through make_params() so that `lambda` is
// always sqrt(g / z0).
struct LipParams {
  double g = 0.0;       // m/s^2
  double z0 = 0.0;      // m
  double T = 0.0;       // s
  double lambda = 0.0;  // 1/s
};

// CoM position relative to the support foot and CoM velocity.
struct LipState {
  double p = 0.0;
  double v = 0.0;

  Eigen::Vector2d vec() const { return {p, v}; }
  static LipState from(const Eigen::Vector2d& x) { return {x(0), x(1)}; }
};

// Step-to-step linear system x_{k+1} = A x_k + B u_k built from the flow
// matrix M(T) and the impact reset x+ = a x- + b u.
struct StepMatrices {
  Eigen::Matrix2d M;
  Eigen::Matrix2d a;
  Eigen::Vector2d b;
  Eigen::Matrix2d A;
  Eigen::Vector2d B;
};

struct OrbitalLines {
  double sigma1 = 0.0;  // P1 slope
  double sigma2 = 0.0;  // P2 slope
  double d2 = 0.0;      // P2 offset for the requested lateral velocity
};

// One-step periodic (sagittal) target: pre-impact state and step length.
struct P1Target {
  LipState x_star;
  double u_star = 0.0;
};

// Two-step periodic (frontal) targets, one per stance side.
struct P2Target {
  double uL_star = 0.0;
  double uR_star = 0.0;
  LipState yL_star;
  LipState yR_star;
};

inline constexpr double kDefaultGravity = 9.81;
inline constexpr double kDefaultHeight = 1.0;
inline constexpr double kDefaultStepDuration = 0.4;
// Magnitude of the free P2 step length. Sign follows the stance side.
inline constexpr double kDefaultLateralStep = 0.3;

// Throws ParameterError unless all arguments are finite and strictly positive.
LipParams make_params(double g, double z0, double T);

// Flow matrix M(t) of the pendulum dynamics.
Eigen::Matrix2d flow_matrix(const LipParams& params, double t);

// Exact state after time t >= 0. Throws ParameterError for t < 0 or
// non-finite input.
LipState flow(const LipParams& params, const LipState& x0, double t);

StepMatrices step_matrices(const LipParams& params);

OrbitalLines orbital_lines(const LipParams& params, double v_y_d);

P1Target p1_target(const LipParams& params, double v_x_d);

// uL_star is the caller's free choice; uR_star closes the pair so that the
// two steps cover v_y_d * T.
P2Target p2_targets(const LipParams& params, double v_y_d, double uL_star);

// v^2 - lambda^2 p^2, conserved along the flow.
double orbital_energy(const LipParams& params, const LipState& x);

}  // namespace steplab

#endif  // STEPLAB_LIP_HPP_
