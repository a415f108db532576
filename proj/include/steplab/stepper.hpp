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

// Discrete step-to-step foot placement: pre-impact prediction, deadbeat gain
// synthesis and the per-step placement law
//
//   u = u* + K (x - x*) + phi
//
// where phi is an optional feed-forward correction.

#ifndef STEPLAB_STEPPER_HPP_
#define STEPLAB_STEPPER_HPP_

#include <Eigen/Core>

#include "steplab/lip.hpp"

namespace steplab {

struct DeadbeatGain {
  Eigen::RowVector2d K;
};

struct StepCommand {
  double u = 0.0;  // commanded placement after saturation
  double u_star = 0.0;
  double feedback = 0.0;
  double adaptive = 0.0;
  double u_unsaturated = 0.0;  // u_star + feedback + adaptive
  bool saturated = false;
};

struct PreimpactPrediction {
  LipState state;
  bool clamped = false;  // t_elapsed was outside [0, T]
};

inline constexpr double kDefaultStepLimit = 0.5;

// Solves trace(A + BK) = 0 and det(A + BK) = 0, which for a 2x2 matrix is
// equivalent to (A + BK)^2 = 0. Both conditions are linear in K (matrix
// determinant lemma), so this is a 2x2 linear solve. Throws SynthesisError
// if the system is singular (zero step duration).
DeadbeatGain deadbeat_gain(const StepMatrices& sm);

PreimpactPrediction predict_preimpact(const LipParams& params,
                                      const LipState& x_now, double t_elapsed);

// Placement for one plane. `step_limit` bounds |u|; values beyond it are
// clamped and reported through StepCommand::saturated.
StepCommand foot_placement(const LipState& x_pred, const LipState& x_star,
                           double u_star, const DeadbeatGain& gain, double phi,
                           double step_limit = kDefaultStepLimit);

// Fixed point of e_{k+1} = (A + BK) e_k + xi, i.e. (A + BK + I) xi when K is
// deadbeat.
Eigen::Vector2d predict_steady_error(const StepMatrices& sm,
                                     const DeadbeatGain& gain,
                                     const Eigen::Vector2d& xi);

Eigen::Matrix2d closed_loop_matrix(const StepMatrices& sm,
                                   const DeadbeatGain& gain);

}  // namespace steplab

#endif  // STEPLAB_STEPPER_HPP_
