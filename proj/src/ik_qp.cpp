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

#include "steplab/ik_qp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "steplab/error.hpp"

namespace steplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string joint_label(const IkProblem& prob, int i) {
  if (i < static_cast<int>(prob.names.size())) return prob.names[i];
  return "#" + std::to_string(i);
}

// Weighted normal equations: H = sum w J^T S J + r I, f = sum w J^T S T.
void normal_equations(const IkProblem& prob, Eigen::MatrixXd& H,
                      Eigen::VectorXd& f) {
  const Eigen::MatrixXd Jc =
      (prob.com_weight * prob.com_row_weights).asDiagonal() * prob.J_com;
  const Eigen::MatrixXd Js =
      (prob.sw_weight * prob.sw_row_weights).asDiagonal() * prob.J_sw;
  H = prob.J_com.transpose() * Jc + prob.J_sw.transpose() * Js;
  H.diagonal().array() += prob.regularization;
  f = Jc.transpose() * prob.T_com + Js.transpose() * prob.T_sw;
}

enum class Slot : unsigned char { kFree, kLower, kUpper, kPinned };

struct BoxResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = true;
};

// min 1/2 x^T H x - f^T x  s.t. lo <= x <= hi, H positive definite.
BoxResult solve_box_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& f,
                       const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                       const Eigen::VectorXd& start, int max_iterations) {
  const int n = static_cast<int>(f.size());
  BoxResult res;
  res.x = start.cwiseMax(lo).cwiseMin(hi);
  std::vector<Slot> slot(n, Slot::kFree);
  for (int i = 0; i < n; ++i) {
    if (lo(i) == hi(i)) {
      slot[i] = Slot::kPinned;
    } else if (res.x(i) == lo(i)) {
      slot[i] = Slot::kLower;
    } else if (res.x(i) == hi(i)) {
      slot[i] = Slot::kUpper;
    }
  }
  const double tol = 1e-13 * (1.0 + f.cwiseAbs().maxCoeff() +
                              H.diagonal().cwiseAbs().maxCoeff());

  std::vector<int> free_idx;
  Eigen::MatrixXd Hff;
  Eigen::VectorXd rhs;
  for (res.iterations = 0; res.iterations < max_iterations;
       ++res.iterations) {
    free_idx.clear();
    for (int i = 0; i < n; ++i) {
      if (slot[i] == Slot::kFree) free_idx.push_back(i);
    }
    const int nf = static_cast<int>(free_idx.size());

    Eigen::VectorXd target = res.x;
    if (nf > 0) {
      // rhs = f_F - H_FB x_B, where x_B are the entries held at bounds.
      Hff.resize(nf, nf);
      rhs.resize(nf);
      Eigen::VectorXd x_bound = res.x;
      for (int i : free_idx) x_bound(i) = 0.0;
      const Eigen::VectorXd coupling = H * x_bound;
      for (int a = 0; a < nf; ++a) {
        rhs(a) = f(free_idx[a]) - coupling(free_idx[a]);
        for (int b = 0; b < nf; ++b) Hff(a, b) = H(free_idx[a], free_idx[b]);
      }
      const Eigen::VectorXd xf = Hff.ldlt().solve(rhs);
      for (int a = 0; a < nf; ++a) target(free_idx[a]) = xf(a);
    }

    // Longest feasible step toward the subspace minimiser.
    double alpha = 1.0;
    int blocking = -1;
    Slot blocking_slot = Slot::kFree;
    for (int i : free_idx) {
      const double d = target(i) - res.x(i);
      if (d < 0.0 && target(i) < lo(i)) {
        const double a = (lo(i) - res.x(i)) / d;
        if (a < alpha) {
          alpha = a;
          blocking = i;
          blocking_slot = Slot::kLower;
        }
      } else if (d > 0.0 && target(i) > hi(i)) {
        const double a = (hi(i) - res.x(i)) / d;
        if (a < alpha) {
          alpha = a;
          blocking = i;
          blocking_slot = Slot::kUpper;
        }
      }
    }
    if (blocking >= 0) {
      alpha = std::max(alpha, 0.0);
      for (int i : free_idx) res.x(i) += alpha * (target(i) - res.x(i));
      res.x(blocking) = blocking_slot == Slot::kLower ? lo(blocking)
                                                      : hi(blocking);
      slot[blocking] = blocking_slot;
      continue;
    }
    res.x = target;

    // Multipliers of the active bounds; release the most negative one.
    const Eigen::VectorXd g = H * res.x - f;
    int release = -1;
    double worst = -tol;
    for (int i = 0; i < n; ++i) {
      double mu = 0.0;
      if (slot[i] == Slot::kLower) {
        mu = g(i);
      } else if (slot[i] == Slot::kUpper) {
        mu = -g(i);
      } else {
        continue;
      }
      if (mu < worst) {
        worst = mu;
        release = i;
      }
    }
    if (release < 0) return res;
    slot[release] = Slot::kFree;
  }
  res.converged = false;
  return res;
}

}  // namespace

Vector6d build_task_vector(const Eigen::Vector3d& p_desired,
                           const Eigen::Vector3d& v_desired,
                           const Eigen::Quaterniond& rot_desired,
                           const Eigen::Vector3d& w_desired,
                           const FramePose& current, const TaskGains& gains) {
  Vector6d t;
  t.head<3>() =
      v_desired + gains.kp.cwiseProduct(p_desired - current.position);
  t.tail<3>() =
      w_desired -
      gains.kw.cwiseProduct(quat_error(rot_desired, current.orientation).error);
  return t;
}

IkProblem make_problem(const RobotModel& model, const Eigen::VectorXd& q,
                       double dt) {
  const int n = model.nv();
  IkProblem prob;
  prob.J_com = Eigen::MatrixXd::Zero(6, n);
  prob.J_sw = Eigen::MatrixXd::Zero(6, n);
  prob.qdot_min = Eigen::VectorXd::Constant(n, -kInf);
  prob.qdot_max = Eigen::VectorXd::Constant(n, kInf);
  prob.pos_lower_gap = Eigen::VectorXd::Constant(n, -kInf);
  prob.pos_upper_gap = Eigen::VectorXd::Constant(n, kInf);
  prob.names = model.velocity_names();
  prob.dt = dt;
  for (const auto& j : model.joints) {
    if (j.type == JointType::kFloatingBase) continue;
    prob.qdot_min(j.v_index) = j.velocity_limits[0];
    prob.qdot_max(j.v_index) = j.velocity_limits[1];
    prob.pos_lower_gap(j.v_index) = j.position_limits[0] - q(j.q_index);
    prob.pos_upper_gap(j.v_index) = j.position_limits[1] - q(j.q_index);
  }
  return prob;
}

IkBounds effective_bounds(const IkProblem& prob) {
  if (!(prob.dt > 0.0)) throw ParameterError("IK tick must be > 0");
  const int n = prob.dof();
  IkBounds b;
  b.lower = prob.qdot_min.cwiseMax(prob.pos_lower_gap / prob.dt);
  b.upper = prob.qdot_max.cwiseMin(prob.pos_upper_gap / prob.dt);
  for (int i = 0; i < n; ++i) {
    if (b.lower(i) > b.upper(i)) {
      throw InfeasibleError(joint_label(prob, i),
                            "velocity and position bounds do not intersect");
    }
  }
  for (const auto& [i, v] : prob.fixed) {
    if (i < 0 || i >= n) {
      throw InfeasibleError(joint_label(prob, i), "fixed index out of range");
    }
    if (v < b.lower(i) || v > b.upper(i)) {
      throw InfeasibleError(joint_label(prob, i),
                            "passive velocity " + std::to_string(v) +
                                " lies outside its bounds");
    }
    b.lower(i) = v;
    b.upper(i) = v;
  }
  return b;
}

IkSolution IkSolver::solve(const IkProblem& prob) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = prob.dof();
  const IkBounds bounds = effective_bounds(prob);

  Eigen::MatrixXd H;
  Eigen::VectorXd f;
  normal_equations(prob, H, f);

  // Substitute the fixed entries and keep the remaining ones.
  std::vector<bool> is_fixed(n, false);
  Eigen::VectorXd fixed_values = Eigen::VectorXd::Zero(n);
  for (const auto& [i, v] : prob.fixed) {
    is_fixed[i] = true;
    fixed_values(i) = v;
  }
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (!is_fixed[i]) keep.push_back(i);
  }
  const int m = static_cast<int>(keep.size());
  const Eigen::VectorXd f_full = f - H * fixed_values;
  Eigen::MatrixXd Hr(m, m);
  Eigen::VectorXd fr(m), lo(m), hi(m), start(m);
  const bool warm = warm_.size() == n;
  for (int a = 0; a < m; ++a) {
    fr(a) = f_full(keep[a]);
    lo(a) = bounds.lower(keep[a]);
    hi(a) = bounds.upper(keep[a]);
    start(a) = warm ? warm_(keep[a]) : 0.0;
    for (int b = 0; b < m; ++b) Hr(a, b) = H(keep[a], keep[b]);
  }

  const int cap = max_iterations_ > 0 ? max_iterations_ : 10 * n + 50;
  const BoxResult box = solve_box_qp(Hr, fr, lo, hi, start, cap);

  IkSolution sol;
  sol.qdot_d = fixed_values;
  for (int a = 0; a < m; ++a) sol.qdot_d(keep[a]) = box.x(a);
  sol.iterations = box.iterations;
  sol.converged = box.converged;
  sol.objective_value = ik_objective(prob, sol.qdot_d);
  sol.kkt_residual = verify_kkt(prob, sol.qdot_d);
  warm_ = sol.qdot_d;
  sol.solve_time = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return sol;
}

IkSolution solve_tick(const IkProblem& prob) {
  IkSolver solver;
  return solver.solve(prob);
}

double ik_objective(const IkProblem& prob, const Eigen::VectorXd& qdot) {
  const Vector6d rc = prob.J_com * qdot - prob.T_com;
  const Vector6d rs = prob.J_sw * qdot - prob.T_sw;
  return prob.com_weight * rc.cwiseAbs2().dot(prob.com_row_weights) +
         prob.sw_weight * rs.cwiseAbs2().dot(prob.sw_row_weights) +
         prob.regularization * qdot.squaredNorm();
}

double verify_kkt(const IkProblem& prob, const Eigen::VectorXd& qdot) {
  const int n = prob.dof();
  // Half gradient of the objective, built row by row from the task data.
  Eigen::VectorXd grad = prob.regularization * qdot;
  for (int r = 0; r < 6; ++r) {
    const double wc = prob.com_weight * prob.com_row_weights(r);
    const double ws = prob.sw_weight * prob.sw_row_weights(r);
    const double rc = prob.J_com.row(r).dot(qdot) - prob.T_com(r);
    const double rs = prob.J_sw.row(r).dot(qdot) - prob.T_sw(r);
    grad += wc * rc * prob.J_com.row(r).transpose();
    grad += ws * rs * prob.J_sw.row(r).transpose();
  }

  std::vector<int> fixed_at(n, -1);
  for (std::size_t k = 0; k < prob.fixed.size(); ++k) {
    fixed_at[prob.fixed[k].first] = static_cast<int>(k);
  }

  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    if (fixed_at[i] >= 0) {
      worst = std::max(worst,
                       std::abs(qdot(i) - prob.fixed[fixed_at[i]].second));
      continue;
    }
    const double lo = std::max(prob.qdot_min(i), prob.pos_lower_gap(i) / prob.dt);
    const double hi = std::min(prob.qdot_max(i), prob.pos_upper_gap(i) / prob.dt);
    worst = std::max({worst, lo - qdot(i), qdot(i) - hi});
    const double scale = 1e-12 * (1.0 + std::abs(qdot(i)));
    const bool at_lo = qdot(i) <= lo + scale;
    const bool at_hi = qdot(i) >= hi - scale;
    double viol = 0.0;
    if (at_lo && at_hi) {
      viol = 0.0;
    } else if (at_lo) {
      viol = std::max(0.0, -grad(i));
    } else if (at_hi) {
      viol = std::max(0.0, grad(i));
    } else {
      viol = std::abs(grad(i));
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

IntegratedReference integrate_reference(const RobotModel& model,
                                        const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& qdot_d,
                                        double dt) {
  IntegratedReference out;
  out.q_d = displace(model, q, qdot_d, dt);
  for (std::size_t i = 0; i < model.joints.size(); ++i) {
    const Joint& j = model.joints[i];
    if (j.type == JointType::kFloatingBase) continue;
    double& v = out.q_d(j.q_index);
    const double c = std::clamp(v, j.position_limits[0], j.position_limits[1]);
    if (c != v) {
      v = c;
      out.clamped.push_back(static_cast<int>(i));
    }
  }
  return out;
}

}  // namespace steplab
