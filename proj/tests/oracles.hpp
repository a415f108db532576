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

// Independent reference computations for the tests. None of these call the
// library routine they are used to check.

#ifndef STEPLAB_TESTS_ORACLES_HPP_
#define STEPLAB_TESTS_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "steplab/ik_qp.hpp"
#include "steplab/kinematics.hpp"

namespace steplab::oracle {

inline std::string data_path(const std::string& rel) {
  return std::string(STEPLAB_DATA_DIR) + "/" + rel;
}

// Classical RK4 on p'' = lambda^2 p.
inline Eigen::Vector2d rk4_lip(double lambda, Eigen::Vector2d x, double t,
                               double h = 1e-5) {
  const double l2 = lambda * lambda;
  auto f = [l2](const Eigen::Vector2d& s) {
    return Eigen::Vector2d(s(1), l2 * s(0));
  };
  const int n = static_cast<int>(std::ceil(t / h - 1e-12));
  const double dt = n > 0 ? t / n : 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d k1 = f(x);
    const Eigen::Vector2d k2 = f(x + 0.5 * dt * k1);
    const Eigen::Vector2d k3 = f(x + 0.5 * dt * k2);
    const Eigen::Vector2d k4 = f(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

// Deadbeat gain from the hand-derived closed form.
inline Eigen::RowVector2d closed_form_gain(double g, double z0, double T) {
  const double lambda = std::sqrt(g / z0);
  return {1.0, 1.0 / (std::tanh(lambda * T) * lambda)};
}

inline Eigen::Matrix3d rpy_matrix(const std::array<double, 3>& rpy) {
  return (Eigen::AngleAxisd(rpy[2], Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(rpy[1], Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy[0], Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

// Link poses by direct recursive composition of the joint data.
inline std::vector<Eigen::Isometry3d> link_poses(const RobotModel& m,
                                                 const Eigen::VectorXd& q) {
  std::vector<Eigen::Isometry3d> poses(m.joints.size());
  std::vector<bool> done(m.joints.size(), false);
  std::size_t remaining = m.joints.size();
  while (remaining > 0) {
    for (std::size_t i = 0; i < m.joints.size(); ++i) {
      const Joint& j = m.joints[i];
      if (done[i] || (j.parent >= 0 && !done[j.parent])) continue;
      Eigen::Isometry3d parent = j.parent >= 0 ? poses[j.parent]
                                               : Eigen::Isometry3d::Identity();
      Eigen::Isometry3d local = Eigen::Isometry3d::Identity();
      if (j.type == JointType::kFloatingBase) {
        local.translation() = q.segment<3>(j.q_index);
        local.linear() = Eigen::Quaterniond(q(j.q_index + 3), q(j.q_index + 4),
                                            q(j.q_index + 5), q(j.q_index + 6))
                             .normalized()
                             .toRotationMatrix();
      } else {
        Eigen::Isometry3d origin = Eigen::Isometry3d::Identity();
        origin.translation() = Eigen::Vector3d(
            j.origin_xyz[0], j.origin_xyz[1], j.origin_xyz[2]);
        origin.linear() = rpy_matrix(j.origin_rpy);
        Eigen::Isometry3d motion = Eigen::Isometry3d::Identity();
        if (j.type == JointType::kRevolute) {
          motion.linear() =
              Eigen::AngleAxisd(q(j.q_index), j.axis).toRotationMatrix();
        } else {
          motion.translation() = q(j.q_index) * j.axis;
        }
        local = origin * motion;
      }
      poses[i] = parent * local;
      done[i] = true;
      --remaining;
    }
  }
  return poses;
}

inline Eigen::Isometry3d frame_world(const RobotModel& m,
                                     const Eigen::VectorXd& q, int frame) {
  const Frame& f = m.frames[frame];
  Eigen::Isometry3d off = Eigen::Isometry3d::Identity();
  off.translation() = Eigen::Vector3d(f.xyz[0], f.xyz[1], f.xyz[2]);
  off.linear() = rpy_matrix(f.rpy);
  return link_poses(m, q)[f.parent] * off;
}

// Mass-weighted mean of the link CoMs.
inline Eigen::Vector3d com(const RobotModel& m, const Eigen::VectorXd& q) {
  const auto poses = link_poses(m, q);
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  double mass = 0.0;
  for (std::size_t i = 0; i < m.joints.size(); ++i) {
    sum += m.joints[i].mass * (poses[i] * m.joints[i].com);
    mass += m.joints[i].mass;
  }
  return sum / mass;
}

// Perturbs velocity coordinate `k` by h without using the library's
// configuration update.
inline Eigen::VectorXd perturb(const RobotModel& m, Eigen::VectorXd q, int k,
                               double h) {
  for (const auto& j : m.joints) {
    if (k < j.v_index || k >= j.v_index + j.nv()) continue;
    const int local = k - j.v_index;
    if (j.type != JointType::kFloatingBase) {
      q(j.q_index) += h;
    } else if (local < 3) {
      q(j.q_index + local) += h;
    } else {
      Eigen::Quaterniond r(q(j.q_index + 3), q(j.q_index + 4),
                           q(j.q_index + 5), q(j.q_index + 6));
      r = Eigen::Quaterniond(
              Eigen::AngleAxisd(h, Eigen::Vector3d::Unit(local - 3))) *
          r;
      q(j.q_index + 3) = r.w();
      q(j.q_index + 4) = r.x();
      q(j.q_index + 5) = r.y();
      q(j.q_index + 6) = r.z();
    }
  }
  return q;
}

inline Eigen::Vector3d rotation_log(const Eigen::Matrix3d& R) {
  const Eigen::AngleAxisd aa(R);
  return aa.angle() * aa.axis();
}

// Central finite differences of a pose map (position, orientation) with
// respect to the velocity coordinates.
template <typename PoseFn>
Eigen::MatrixXd fd_jacobian(const RobotModel& m, const Eigen::VectorXd& q,
                            PoseFn pose, double h = 1e-6) {
  Eigen::MatrixXd J(6, m.nv());
  for (int k = 0; k < m.nv(); ++k) {
    const Eigen::Isometry3d a = pose(perturb(m, q, k, h));
    const Eigen::Isometry3d b = pose(perturb(m, q, k, -h));
    J.block<3, 1>(0, k) = (a.translation() - b.translation()) / (2.0 * h);
    J.block<3, 1>(3, k) =
        rotation_log(a.linear() * b.linear().transpose()) / (2.0 * h);
  }
  return J;
}

inline Eigen::VectorXd random_configuration(const RobotModel& m,
                                            std::mt19937_64& rng,
                                            double margin = 0.05) {
  Eigen::VectorXd q = m.neutral();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& j : m.joints) {
    if (j.type == JointType::kFloatingBase) {
      q.segment<3>(j.q_index) = Eigen::Vector3d(u(rng), u(rng), 1.0 + u(rng));
      Eigen::Quaterniond r(u(rng), u(rng), u(rng), u(rng));
      r.normalize();
      q(j.q_index + 3) = r.w();
      q(j.q_index + 4) = r.x();
      q(j.q_index + 5) = r.y();
      q(j.q_index + 6) = r.z();
    } else {
      const double lo = j.position_limits[0] + margin;
      const double hi = j.position_limits[1] - margin;
      q(j.q_index) = lo + (hi - lo) * 0.5 * (u(rng) + 1.0);
    }
  }
  return q;
}

// Projected gradient on the box, fixed entries as degenerate intervals.
// Runs until the projected step moves less than `tol`.
inline Eigen::VectorXd projected_gradient_qp(const IkProblem& p,
                                             double tol = 1e-13,
                                             long max_iter = 20'000'000) {
  const int n = p.dof();
  Eigen::MatrixXd H = p.regularization * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < 6; ++r) {
    const double wc = p.com_weight * p.com_row_weights(r);
    const double ws = p.sw_weight * p.sw_row_weights(r);
    H += wc * p.J_com.row(r).transpose() * p.J_com.row(r);
    H += ws * p.J_sw.row(r).transpose() * p.J_sw.row(r);
    f += wc * p.T_com(r) * p.J_com.row(r).transpose();
    f += ws * p.T_sw(r) * p.J_sw.row(r).transpose();
  }
  Eigen::VectorXd lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo(i) = std::max(p.qdot_min(i), p.pos_lower_gap(i) / p.dt);
    hi(i) = std::min(p.qdot_max(i), p.pos_upper_gap(i) / p.dt);
  }
  for (const auto& [i, v] : p.fixed) lo(i) = hi(i) = v;
  const double L =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues().maxCoeff();
  const double step = 1.0 / L;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n).cwiseMax(lo).cwiseMin(hi);
  for (long it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd next =
        (x - step * (H * x - f)).cwiseMax(lo).cwiseMin(hi);
    const double move = (next - x).cwiseAbs().maxCoeff();
    x = next;
    if (move < tol) break;
  }
  return x;
}

// Random box-constrained problem with n unknowns, some fixed entries and some
// bounds that bind.
inline IkProblem random_problem(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  IkProblem p;
  p.J_com = Eigen::MatrixXd::NullaryExpr(6, n, [&] { return u(rng); });
  p.J_sw = Eigen::MatrixXd::NullaryExpr(6, n, [&] { return u(rng); });
  for (int r = 0; r < 6; ++r) {
    p.T_com(r) = 2.0 * u(rng);
    p.T_sw(r) = 2.0 * u(rng);
    p.com_row_weights(r) = r < 3 ? 1.0 : 0.5 * (u(rng) + 1.0);
  }
  p.com_weight = 1.0 + u(rng) * 0.5;
  p.sw_weight = 1.0;
  p.qdot_min.resize(n);
  p.qdot_max.resize(n);
  p.pos_lower_gap.resize(n);
  p.pos_upper_gap.resize(n);
  p.dt = 1e-3;
  for (int i = 0; i < n; ++i) {
    p.qdot_min(i) = -0.2 - 0.8 * (u(rng) + 1.0);
    p.qdot_max(i) = 0.2 + 0.8 * (u(rng) + 1.0);
    p.pos_lower_gap(i) = u(rng) > 0.6 ? -1e-4 : -1.0;
    p.pos_upper_gap(i) = u(rng) > 0.6 ? 1e-4 : 1.0;
    p.names.push_back("j" + std::to_string(i));
  }
  if (n > 2 && u(rng) > 0.0) p.fixed.emplace_back(n - 1, 0.05 * u(rng));
  return p;
}

}  // namespace steplab::oracle

#endif  // STEPLAB_TESTS_ORACLES_HPP_
