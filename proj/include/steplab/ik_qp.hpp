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

// Velocity-level inverse kinematics as a box-constrained convex QP:
//
//   min  w_c |S_c (J_c qd - T_c)|^2 + w_s |S_s (J_s qd - T_s)|^2 + r |qd|^2
//   s.t. max(qd_min, (q_min - q)/dt) <= qd <= min(qd_max, (q_max - q)/dt)
//        qd_i = v_i for fixed (passive) entries
//
// S_c, S_s are diagonal row weights; a zero weight leaves that task
// direction unconstrained. Fixed entries are substituted out before the
// solve. The reduced problem is solved by a primal active-set method on the
// box.

#ifndef STEPLAB_IK_QP_HPP_
#define STEPLAB_IK_QP_HPP_

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "steplab/kinematics.hpp"

namespace steplab {

using Vector6d = Eigen::Matrix<double, 6, 1>;

inline constexpr double kDefaultTick = 1e-3;
inline constexpr double kDefaultRegularization = 1e-8;
inline constexpr double kDefaultKp = 20.0;
inline constexpr double kDefaultKw = 10.0;

struct TaskGains {
  Eigen::Vector3d kp = Eigen::Vector3d::Constant(kDefaultKp);
  Eigen::Vector3d kw = Eigen::Vector3d::Constant(kDefaultKw);
};

// [v_d + Kp (p_d - p); w_d - Kw e] with e = quat_error(q_d, q).
Vector6d build_task_vector(const Eigen::Vector3d& p_desired,
                           const Eigen::Vector3d& v_desired,
                           const Eigen::Quaterniond& rot_desired,
                           const Eigen::Vector3d& w_desired,
                           const FramePose& current, const TaskGains& gains);

struct IkProblem {
  Eigen::MatrixXd J_com;  // 6 x n
  Eigen::MatrixXd J_sw;   // 6 x n
  Vector6d T_com = Vector6d::Zero();
  Vector6d T_sw = Vector6d::Zero();
  Vector6d com_row_weights = Vector6d::Ones();
  Vector6d sw_row_weights = Vector6d::Ones();
  double com_weight = 1.0;
  double sw_weight = 1.0;

  Eigen::VectorXd qdot_min;  // n
  Eigen::VectorXd qdot_max;  // n
  // q_min - q and q_max - q; +-infinity where a coordinate has no limit.
  Eigen::VectorXd pos_lower_gap;
  Eigen::VectorXd pos_upper_gap;

  // (index, value) pairs: passive joints pinned to measured velocities.
  std::vector<std::pair<int, double>> fixed;
  std::vector<std::string> names;  // optional, for diagnostics

  double dt = kDefaultTick;
  double regularization = kDefaultRegularization;

  int dof() const { return static_cast<int>(qdot_min.size()); }
};

// Sizes the problem for `model` and fills the velocity and position-implied
// bounds at configuration q. Base coordinates are unbounded.
IkProblem make_problem(const RobotModel& model, const Eigen::VectorXd& q,
                       double dt = kDefaultTick);

struct IkBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

// Intersection of the velocity and position-implied bounds with fixed
// entries collapsed to points. Throws InfeasibleError naming the first joint
// whose interval is empty or whose fixed value lies outside it.
IkBounds effective_bounds(const IkProblem& prob);

struct IkSolution {
  Eigen::VectorXd qdot_d;
  double kkt_residual = 0.0;
  double objective_value = 0.0;
  int iterations = 0;
  double solve_time = 0.0;  // seconds, wall clock
  bool converged = true;
};

class IkSolver {
 public:
  explicit IkSolver(int max_iterations = 0) : max_iterations_(max_iterations) {}

  // Warm-starts from the previous solution when the size matches.
  IkSolution solve(const IkProblem& prob);

  void reset() { warm_.resize(0); }

 private:
  int max_iterations_;  // 0 = automatic
  Eigen::VectorXd warm_;
};

// Cold solve with a fresh solver.
IkSolution solve_tick(const IkProblem& prob);

// Objective value at qdot, evaluated directly from the problem data.
double ik_objective(const IkProblem& prob, const Eigen::VectorXd& qdot);

// Independent first-order optimality check for the full (unreduced)
// problem: the largest violation among primal feasibility, fixed-entry
// equality, and stationarity/complementarity of every box-bounded entry.
double verify_kkt(const IkProblem& prob, const Eigen::VectorXd& qdot);

struct IntegratedReference {
  Eigen::VectorXd q_d;
  std::vector<int> clamped;  // joint indices pulled back into their limits
};

// q_d = q (+) qdot_d dt, clamped into position limits, base quaternion
// renormalised.
IntegratedReference integrate_reference(const RobotModel& model,
                                        const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& qdot_d,
                                        double dt);

}  // namespace steplab

#endif  // STEPLAB_IK_QP_HPP_
