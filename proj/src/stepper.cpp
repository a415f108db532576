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

#include "steplab/stepper.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "steplab/error.hpp"

namespace steplab {

DeadbeatGain deadbeat_gain(const StepMatrices& sm) {
  const Eigen::Matrix2d& A = sm.A;
  const Eigen::Vector2d& B = sm.B;
  // adj(A) for a 2x2 matrix.
  Eigen::Matrix2d adj;
  adj << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);

  // trace(A + B K) = tr(A) + K B
  // det(A + B K)   = det(A) + K adj(A) B
  Eigen::Matrix2d lhs;
  lhs.row(0) = B.transpose();
  lhs.row(1) = (adj * B).transpose();
  const Eigen::Vector2d rhs(-A.trace(), -A.determinant());

  const double scale = lhs.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || std::abs(lhs.determinant()) <= 1e-12 * scale * scale) {
    throw SynthesisError(
        "deadbeat synthesis is singular (B parallel to adj(A) B)");
  }
  DeadbeatGain gain;
  gain.K = lhs.partialPivLu().solve(rhs).transpose();
  return gain;
}

PreimpactPrediction predict_preimpact(const LipParams& params,
                                      const LipState& x_now,
                                      double t_elapsed) {
  PreimpactPrediction out;
  double t = t_elapsed;
  if (t > params.T) {
    t = params.T;
    out.clamped = true;
  } else if (t < 0.0) {
    t = 0.0;
    out.clamped = true;
  }
  out.state = flow(params, x_now, params.T - t);
  return out;
}

StepCommand foot_placement(const LipState& x_pred, const LipState& x_star,
                           double u_star, const DeadbeatGain& gain, double phi,
                           double step_limit) {
  StepCommand cmd;
  cmd.u_star = u_star;
  cmd.feedback = gain.K * (x_pred.vec() - x_star.vec());
  cmd.adaptive = phi;
  cmd.u_unsaturated = cmd.u_star + cmd.feedback + cmd.adaptive;
  cmd.u = std::clamp(cmd.u_unsaturated, -step_limit, step_limit);
  cmd.saturated = cmd.u != cmd.u_unsaturated;
  return cmd;
}

Eigen::Matrix2d closed_loop_matrix(const StepMatrices& sm,
                                   const DeadbeatGain& gain) {
  return sm.A + sm.B * gain.K;
}

Eigen::Vector2d predict_steady_error(const StepMatrices& sm,
                                     const DeadbeatGain& gain,
                                     const Eigen::Vector2d& xi) {
  return (closed_loop_matrix(sm, gain) + Eigen::Matrix2d::Identity()) * xi;
}

}  // namespace steplab
