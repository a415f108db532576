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

// Experiment plants and episode runners.
//
// Step-to-step mode runs the sagittal (one-step periodic) and frontal
// (two-step periodic, stance alternating L, R, L, ...) planes on a perturbed
// LIP map. Kinematic mode closes the loop through the swing curve and the
// IK QP on a floating-base model at a fixed tick.
//
// Conventions: x forward, y left, z up. Placements u are measured from the
// stance foot; the reset is p+ = p- - u.

#ifndef STEPLAB_SIMLAB_HPP_
#define STEPLAB_SIMLAB_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "steplab/ik_qp.hpp"
#include "steplab/kinematics.hpp"
#include "steplab/lip.hpp"
#include "steplab/neuroreg.hpp"
#include "steplab/stepper.hpp"
#include "steplab/trajgen.hpp"

namespace steplab {

enum class MismatchMode { kNone, kConstant, kStateAffine, kImpactLoss, kHeightOffset };

const char* mismatch_mode_name(MismatchMode mode);
// Throws ParameterError for an unknown name.
MismatchMode parse_mismatch_mode(const std::string& name);

struct MismatchModel {
  MismatchMode mode = MismatchMode::kNone;
  Eigen::Vector2d xi = Eigen::Vector2d::Zero();      // constant, state_affine
  Eigen::Matrix2d gain = Eigen::Matrix2d::Zero();    // state_affine: xi + G x
  double kappa = 0.0;                                // impact_loss
  double dz = 0.0;                                   // height_offset

  // Throws ParameterError on non-finite parameters, kappa outside [0, 1) or
  // a height offset that makes the plant height non-positive.
  void validate(const LipParams& params) const;
};

// One plant step from pre-impact x_k with placement u_k.
LipState s2s_step(const LipParams& params, const StepMatrices& sm,
                  const MismatchModel& mismatch, const LipState& x_k, double u_k);

struct VelocitySegment {
  double v_x = 0.0;
  double v_y = 0.0;
  int steps = 0;
};

struct AdaptationConfig {
  bool enabled = false;
  int hidden = kDefaultHiddenWidth;
  std::uint64_t seed = 0;
  double gamma = kDefaultLearningRate;
};

struct S2sConfig {
  double g = kDefaultGravity;
  double z0 = kDefaultHeight;
  double T = kDefaultStepDuration;
  std::vector<VelocitySegment> schedule;
  double uL_star = -kDefaultLateralStep;
  double step_limit = kDefaultStepLimit;
  MismatchModel sagittal_mismatch;
  MismatchModel frontal_mismatch;
  AdaptationConfig adaptation;
  // Additive Gaussian noise on the measured pre-impact state (std dev of p
  // and v); zero disables it.
  double noise_std = 0.0;
  std::uint64_t noise_seed = 0;
  // Offsets from the first step's targets.
  Eigen::Vector2d initial_sagittal_error = Eigen::Vector2d::Zero();
  Eigen::Vector2d initial_frontal_error = Eigen::Vector2d::Zero();

  int total_steps() const;
};

struct PlaneRecord {
  LipState pre;       // true plant state
  LipState measured;  // what the controller saw
  LipState target;
  StepCommand cmd;
  double avg_velocity = 0.0;  // (p_pre[k+1] - (p_pre[k] - u_k)) / T
};

struct StepRecord {
  int k = 0;
  char stance = 'L';
  double v_x_d = 0.0;
  double v_y_d = 0.0;
  PlaneRecord sagittal;
  PlaneRecord frontal;
  double error_norm = 0.0;  // |(p, v) - target| in the frontal plane
  double nn_weight_norm = 0.0;
  double nn_error_signal = 0.0;
  // Kinematic mode only.
  double touchdown_error = 0.0;
  Eigen::VectorXd joints_pre;  // actuated + passive joint angles at impact
};

struct TickRecord {
  int step = 0;
  double t = 0.0;  // episode time at the end of the tick
  char stance = 'L';
  Eigen::VectorXd q;
  Eigen::VectorXd q_d;
  double com_height_error = 0.0;
  double com_rotation_error = 0.0;
  double swing_position_error = 0.0;
  double swing_rotation_error = 0.0;
  Eigen::Vector3d swing_target = Eigen::Vector3d::Zero();
  double u_x = 0.0;
  double u_y = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  double solve_time = 0.0;  // wall clock, not serialised
};

struct EpisodeLog {
  std::vector<StepRecord> steps;
  std::vector<TickRecord> ticks;
  // Saturation, prediction clamps and joint-limit clamps, one line each.
  std::vector<std::string> events;
  std::vector<std::string> joint_names;
  std::vector<std::string> configuration_names;
};

// Throws ParameterError for an invalid configuration.
EpisodeLog run_s2s_episode(const S2sConfig& config);

struct SegmentSummary {
  double v_x_d = 0.0;
  double mean_velocity = 0.0;
  double rel_error = 0.0;  // |mean - v| / max(|v|, floor)
  int samples = 0;
};

// Per-segment mean of the sagittal step-averaged velocity, skipping the
// first `transient` steps of every segment.
std::vector<SegmentSummary> segment_velocities(const S2sConfig& config,
                                               const EpisodeLog& log,
                                               int transient = 3);

// Mean frontal error norm over the last `window` steps (all if fewer).
double tail_mean_error(const EpisodeLog& log, int window = 100);

// Bisection on the impact-loss coefficient of the frontal plane so that the
// deadbeat-only tail mean error equals `target`. Throws ParameterError if the
// target is not bracketed by kappa in [0, kappa_max].
double calibrate_impact_loss(S2sConfig config, double target,
                             double kappa_max = 0.9, int window = 100);

struct WalkConfig {
  double g = kDefaultGravity;
  double z0 = kDefaultHeight;
  double T = kDefaultStepDuration;
  double v_x = 0.1;
  double v_y = 0.0;
  int steps = 10;
  double uL_star = -kDefaultLateralStep;
  double apex = kDefaultApex;
  double step_limit = kDefaultStepLimit;
  double dt = kDefaultTick;
  TaskGains gains;
  double com_weight = 1.0;
  double swing_weight = 1.0;
  // Seed pose for the initial settle: knee flexion, split over hip and
  // ankle pitch so the feet stay flat.
  double knee_bend = 0.6;
  bool record_ticks = true;
};

struct WalkSummary {
  double period2 = 0.0;  // max_k |q_k - q_{k+2}|_inf over k >= 6
  int period2_from = 6;
  double com_height_max_dev = 0.0;
  double touchdown_max = 0.0;
  double swing_tracking_max = 0.0;  // after the first 50 ticks of each step
  double kkt_max = 0.0;
  double latency_p50 = 0.0;
  double latency_p99 = 0.0;
  int nonconverged = 0;
};

// Throws InfeasibleError (with the joint name) if an IK tick is infeasible,
// SchemaError if the model lacks pelvis/left/right foot frames.
EpisodeLog run_kinematic_walk(const RobotModel& model, const WalkConfig& config);

WalkSummary summarize_walk(const WalkConfig& config, const EpisodeLog& log);

// q-quantile (0..1) by nearest rank; 0 for an empty sample.
double quantile(std::vector<double> values, double q);

}  // namespace steplab

#endif  // STEPLAB_SIMLAB_HPP_
