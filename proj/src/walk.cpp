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

// Kinematic walking loop.
//
// The world frame sits on the stance foot (origin, identity orientation) and
// is re-anchored after every tick and at every impact. The stance contact is
// enforced by eliminating the base velocity:
//
//   J_st,b b + J_st,j qd = 0   =>   b = P qd,   P = -J_st,b^-1 J_st,j
//
// so every task Jacobian is reduced to the joint columns, J~ = J_j + J_b P.
// The stance ankle joints are passive: their velocities are set from the
// plant so that the horizontal CoM velocity equals an internally integrated
// LIP velocity, and are handed to the QP as fixed values. The CoM task keeps
// height and pelvis orientation; its horizontal rows carry zero weight.

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "steplab/error.hpp"
#include "steplab/simlab.hpp"
#include "steplab/trajgen.hpp"

namespace steplab {

namespace {

constexpr int kBase = 6;

struct WalkFrames {
  int pelvis = -1;
  int left = -1;
  int right = -1;
};

WalkFrames find_frames(const RobotModel& model) {
  WalkFrames f;
  f.pelvis = model.frame_index("pelvis");
  for (std::size_t i = 0; i < model.frames.size(); ++i) {
    if (model.frames[i].side == "left") f.left = static_cast<int>(i);
    if (model.frames[i].side == "right") f.right = static_cast<int>(i);
  }
  if (f.left < 0 || f.right < 0) {
    throw SchemaError("/frames", "walking needs frames tagged side left/right");
  }
  return f;
}

// Moves the base so that `anchor` becomes the world frame.
void reanchor(Eigen::VectorXd& q, const Eigen::Isometry3d& anchor) {
  const Eigen::Isometry3d inv = anchor.inverse();
  const Eigen::Vector3d p = inv * Eigen::Vector3d(q.head<3>());
  Eigen::Quaterniond r(q(3), q(4), q(5), q(6));
  r = Eigen::Quaterniond(inv.linear()) * r;
  r.normalize();
  q.head<3>() = p;
  q(3) = r.w();
  q(4) = r.x();
  q(5) = r.y();
  q(6) = r.z();
}

void anchor_to(const RobotModel& model, Eigen::VectorXd& q, int frame) {
  const Kinematics kin = forward_kinematics(model, q);
  reanchor(q, kin.frames[frame]);
}

struct Reduced {
  Eigen::MatrixXd P;  // 6 x nj, base velocity from joint velocities
  Eigen::MatrixXd com;
  Eigen::MatrixXd swing;
};

Reduced reduce(const RobotModel& model, const Kinematics& kin,
               const WalkFrames& wf, int stance, int swing) {
  const int nj = model.nv() - kBase;
  const Eigen::MatrixXd Jst = frame_jacobian(model, kin, stance);
  Reduced r;
  r.P = -Jst.leftCols(kBase).partialPivLu().solve(Jst.rightCols(nj));
  const Eigen::MatrixXd Jc = com_jacobian(model, kin, wf.pelvis);
  const Eigen::MatrixXd Js = frame_jacobian(model, kin, swing);
  r.com = Jc.rightCols(nj) + Jc.leftCols(kBase) * r.P;
  r.swing = Js.rightCols(nj) + Js.leftCols(kBase) * r.P;
  return r;
}

Eigen::VectorXd full_velocity(const Reduced& r, const Eigen::VectorXd& qd) {
  Eigen::VectorXd v(kBase + qd.size());
  v.head(kBase) = r.P * qd;
  v.tail(qd.size()) = qd;
  return v;
}

// Joint-space problem (base eliminated) with bounds at configuration q.
IkProblem joint_problem(const RobotModel& model, const Eigen::VectorXd& q,
                        double dt) {
  const IkProblem full = make_problem(model, q, dt);
  const int nj = model.nv() - kBase;
  IkProblem prob;
  prob.qdot_min = full.qdot_min.tail(nj);
  prob.qdot_max = full.qdot_max.tail(nj);
  prob.pos_lower_gap = full.pos_lower_gap.tail(nj);
  prob.pos_upper_gap = full.pos_upper_gap.tail(nj);
  prob.names.assign(full.names.begin() + kBase, full.names.end());
  prob.dt = dt;
  return prob;
}

// Joint columns (0-based, base excluded) of passive joints on the chain from
// the root to `frame`.
std::vector<int> chain_passive(const RobotModel& model, int frame) {
  std::vector<int> cols;
  const int link = model.frames[frame].parent;
  for (std::size_t j = 0; j < model.joints.size(); ++j) {
    const Joint& jt = model.joints[j];
    if (jt.passive && model.is_ancestor(static_cast<int>(j), link)) {
      cols.push_back(jt.v_index - kBase);
    }
  }
  return cols;
}

// Seed pose with bent knees and flat feet.
Eigen::VectorXd seed_pose(const RobotModel& model, double knee_bend) {
  Eigen::VectorXd q = model.neutral();
  auto ends_with = [](const std::string& s, const std::string& tail) {
    return s.size() >= tail.size() &&
           s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
  };
  for (const auto& j : model.joints) {
    if (j.type == JointType::kFloatingBase) continue;
    double v = 0.0;
    if (ends_with(j.name, "knee")) v = knee_bend;
    if (ends_with(j.name, "hip_pitch") || ends_with(j.name, "toe_pitch")) {
      v = -0.5 * knee_bend;
    }
    q(j.q_index) =
        std::clamp(v, j.position_limits[0], j.position_limits[1]);
  }
  return q;
}

struct SettleTarget {
  Eigen::Vector3d com;
  Eigen::Vector3d swing;
};

// Position-level Newton iterations on the contact-reduced tasks with every
// joint free.
Eigen::VectorXd settle(const RobotModel& model, Eigen::VectorXd q,
                       const WalkFrames& wf, int stance, int swing,
                       const SettleTarget& target) {
  const Eigen::Quaterniond I = Eigen::Quaterniond::Identity();
  IkSolver solver;
  for (int it = 0; it < 200; ++it) {
    anchor_to(model, q, stance);
    const Kinematics kin = forward_kinematics(model, q);
    const FramePose pel = frame_pose(kin, wf.pelvis);
    const FramePose sw = frame_pose(kin, swing);
    Vector6d T_com, T_sw;
    T_com << target.com - kin.com, -quat_error(I, pel.orientation).error;
    T_sw << target.swing - sw.position, -quat_error(I, sw.orientation).error;
    if (std::max(T_com.cwiseAbs().maxCoeff(), T_sw.cwiseAbs().maxCoeff()) <
        1e-13) {
      break;
    }
    const Reduced r = reduce(model, kin, wf, stance, swing);
    IkProblem prob = joint_problem(model, q, 1.0);
    prob.J_com = r.com;
    prob.J_sw = r.swing;
    prob.T_com = T_com;
    prob.T_sw = T_sw;
    // One Newton step is a displacement, not a velocity.
    prob.qdot_min.setConstant(-0.2);
    prob.qdot_max.setConstant(0.2);
    const IkSolution sol = solver.solve(prob);
    q = displace(model, q, full_velocity(r, sol.qdot_d), 1.0);
  }
  anchor_to(model, q, stance);
  return q;
}

std::string step_event(int k, const std::string& what) {
  return "step " + std::to_string(k) + ": " + what;
}

}  // namespace

EpisodeLog run_kinematic_walk(const RobotModel& model, const WalkConfig& c) {
  if (!model.has_floating_base()) {
    throw SchemaError("/joints/0", "walking needs a floating base");
  }
  if (c.steps < 1) throw ParameterError("walk needs steps >= 1");
  if (!(c.dt > 0.0)) throw ParameterError("tick must be > 0");
  if (!(c.step_limit > 0.0)) throw ParameterError("step limit must be > 0");
  const double ticks_real = c.T / c.dt;
  const int N = static_cast<int>(std::lround(ticks_real));
  if (N < 1 || std::abs(ticks_real - N) > 1e-9 * ticks_real) {
    throw ParameterError("step duration must be a whole number of ticks");
  }
  const WalkFrames wf = find_frames(model);
  const LipParams params = make_params(c.g, c.z0, c.T);
  const StepMatrices sm = step_matrices(params);
  const DeadbeatGain gain = deadbeat_gain(sm);
  const P1Target p1 = p1_target(params, c.v_x);
  const P2Target p2 = p2_targets(params, c.v_y, c.uL_star);
  const double lam2 = params.lambda * params.lambda;
  const int nj = model.nv() - kBase;
  const Eigen::Quaterniond I = Eigen::Quaterniond::Identity();
  const Eigen::Vector3d lift(0.0, 0.0, c.z0);

  EpisodeLog log;
  const std::vector<std::string> vnames = model.velocity_names();
  log.joint_names.assign(vnames.begin() + kBase, vnames.end());
  log.configuration_names = model.configuration_names();

  // Start in left stance just after a right-stance impact on the P2 orbit.
  const LipState post(p2.yR_star.p - p2.uR_star, p2.yR_star.v);
  Eigen::VectorXd q = settle(model, seed_pose(model, c.knee_bend), wf, wf.left,
                             wf.right,
                             {Eigen::Vector3d(0.0, post.p, c.z0),
                              Eigen::Vector3d(0.0, -p2.uR_star, 0.0)});
  Eigen::Vector2d v_lip(0.0, post.v);
  Eigen::VectorXd qd_prev = Eigen::VectorXd::Zero(nj);

  IkSolver solver;
  for (int k = 0; k < c.steps; ++k) {
    const bool left = k % 2 == 0;
    const int stance = left ? wf.left : wf.right;
    const int swing = left ? wf.right : wf.left;
    const LipState& y_star = left ? p2.yL_star : p2.yR_star;
    const double uy_star = left ? p2.uL_star : p2.uR_star;
    const std::vector<int> passive = chain_passive(model, stance);
    std::vector<int> actuated;
    for (int j = 0; j < nj; ++j) {
      if (std::find(passive.begin(), passive.end(), j) == passive.end()) {
        actuated.push_back(j);
      }
    }

    const Eigen::Vector3d p0 =
        frame_pose(forward_kinematics(model, q), swing).position - lift;
    StepCommand cmd_s, cmd_f;
    int saturated_s = 0, saturated_f = 0, clamped = 0;
    for (int i = 0; i < N; ++i) {
      const Kinematics kin = forward_kinematics(model, q);
      const Reduced r = reduce(model, kin, wf, stance, swing);
      const double t = i * c.dt;
      const LipState xs{kin.com.x(), v_lip.x()};
      const LipState xf{kin.com.y(), v_lip.y()};
      cmd_s = foot_placement(predict_preimpact(params, xs, t).state, p1.x_star,
                             p1.u_star, gain, 0.0, c.step_limit);
      cmd_f = foot_placement(predict_preimpact(params, xf, t).state, y_star,
                             uy_star, gain, 0.0, c.step_limit);
      saturated_s += cmd_s.saturated;
      saturated_f += cmd_f.saturated;

      const BezierCurve curve =
          make_swing_curve(p0, cmd_s.u, cmd_f.u, c.z0, c.apex, c.T);
      const CurveSample ref = eval_curve(curve, t + c.dt);
      const Eigen::Vector3d sw_target = ref.position + lift;

      IkProblem prob = joint_problem(model, q, c.dt);
      prob.J_com = r.com;
      prob.J_sw = r.swing;
      prob.com_weight = c.com_weight;
      prob.sw_weight = c.swing_weight;
      prob.com_row_weights << 0.0, 0.0, 1.0, 1.0, 1.0, 1.0;
      const FramePose pel = frame_pose(kin, wf.pelvis);
      prob.T_com = build_task_vector(
          Eigen::Vector3d(kin.com.x(), kin.com.y(), c.z0),
          Eigen::Vector3d(v_lip.x(), v_lip.y(), 0.0), I, Eigen::Vector3d::Zero(),
          {kin.com, pel.orientation}, c.gains);
      prob.T_sw = build_task_vector(sw_target, ref.velocity, I,
                                    Eigen::Vector3d::Zero(),
                                    frame_pose(kin, swing), c.gains);

      // Passive stance ankles: horizontal CoM velocity follows the plant.
      const int np = static_cast<int>(passive.size());
      Eigen::MatrixXd Jp(2, np);
      Eigen::Vector2d rhs = v_lip;
      for (int a = 0; a < np; ++a) Jp.col(a) = r.com.block(0, passive[a], 2, 1);
      for (int j : actuated) rhs -= r.com.block(0, j, 2, 1) * qd_prev(j);
      const Eigen::VectorXd qp =
          Jp.completeOrthogonalDecomposition().solve(rhs);
      for (int a = 0; a < np; ++a) prob.fixed.emplace_back(passive[a], qp(a));

      IkSolution sol;
      try {
        sol = solver.solve(prob);
      } catch (const InfeasibleError& e) {
        throw InfeasibleError(
            e.joint(), "step " + std::to_string(k) + " tick " +
                           std::to_string(i) + ": " + e.what());
      }
      const IntegratedReference next =
          integrate_reference(model, q, full_velocity(r, sol.qdot_d), c.dt);
      clamped += static_cast<int>(next.clamped.size());
      Eigen::VectorXd q_next = next.q_d;
      anchor_to(model, q_next, stance);
      const Kinematics kin_next = forward_kinematics(model, q_next);
      v_lip += lam2 * kin_next.com.head<2>() * c.dt;

      if (c.record_ticks) {
        TickRecord tr;
        tr.step = k;
        tr.t = k * c.T + (i + 1) * c.dt;
        tr.stance = left ? 'L' : 'R';
        tr.q = q;
        tr.q_d = q_next;
        const FramePose sw_next = frame_pose(kin_next, swing);
        const FramePose pel_next = frame_pose(kin_next, wf.pelvis);
        tr.com_height_error = kin_next.com.z() - c.z0;
        tr.com_rotation_error = quat_error(I, pel_next.orientation).error.norm();
        tr.swing_position_error = (sw_next.position - sw_target).norm();
        tr.swing_rotation_error = quat_error(I, sw_next.orientation).error.norm();
        tr.swing_target = sw_target;
        tr.u_x = cmd_s.u;
        tr.u_y = cmd_f.u;
        tr.iterations = sol.iterations;
        tr.kkt_residual = sol.kkt_residual;
        tr.solve_time = sol.solve_time;
        log.ticks.push_back(std::move(tr));
      }
      if (!sol.converged) {
        log.events.push_back(step_event(
            k, "tick " + std::to_string(i) + ": IK iteration cap reached"));
      }
      q = q_next;
      qd_prev = sol.qdot_d;
    }
    if (saturated_s > 0) {
      log.events.push_back(step_event(
          k, "sagittal placement saturated on " + std::to_string(saturated_s) +
                 " ticks"));
    }
    if (saturated_f > 0) {
      log.events.push_back(step_event(
          k, "frontal placement saturated on " + std::to_string(saturated_f) +
                 " ticks"));
    }
    if (clamped > 0) {
      log.events.push_back(step_event(
          k, std::to_string(clamped) + " joint-limit clamps"));
    }

    // Impact.
    const Kinematics kin = forward_kinematics(model, q);
    StepRecord rec;
    rec.k = k;
    rec.stance = left ? 'L' : 'R';
    rec.v_x_d = c.v_x;
    rec.v_y_d = c.v_y;
    rec.sagittal.pre = rec.sagittal.measured = {kin.com.x(), v_lip.x()};
    rec.sagittal.target = p1.x_star;
    rec.sagittal.cmd = cmd_s;
    rec.frontal.pre = rec.frontal.measured = {kin.com.y(), v_lip.y()};
    rec.frontal.target = y_star;
    rec.frontal.cmd = cmd_f;
    rec.error_norm = (rec.frontal.pre.vec() - y_star.vec()).norm();
    const Eigen::Vector3d touchdown = frame_pose(kin, swing).position;
    rec.touchdown_error =
        (touchdown - Eigen::Vector3d(cmd_s.u, cmd_f.u, 0.0)).norm();
    rec.joints_pre = q.tail(model.nq() - 7);

    const Eigen::Isometry3d anchor = kin.frames[swing];
    reanchor(q, anchor);
    const Eigen::Matrix3d Rt = anchor.linear().transpose();
    v_lip = (Rt * Eigen::Vector3d(v_lip.x(), v_lip.y(), 0.0)).head<2>();

    if (!log.steps.empty()) {
      StepRecord& prev = log.steps.back();
      prev.sagittal.avg_velocity =
          (rec.sagittal.pre.p - (prev.sagittal.pre.p - prev.sagittal.cmd.u)) /
          c.T;
      prev.frontal.avg_velocity =
          (rec.frontal.pre.p - (prev.frontal.pre.p - prev.frontal.cmd.u)) / c.T;
    }
    log.steps.push_back(std::move(rec));
  }
  return log;
}

WalkSummary summarize_walk(const WalkConfig& config, const EpisodeLog& log) {
  WalkSummary s;
  const int n = static_cast<int>(log.steps.size());
  for (int k = s.period2_from; k + 2 < n; ++k) {
    const double d = (log.steps[k].joints_pre - log.steps[k + 2].joints_pre)
                         .cwiseAbs()
                         .maxCoeff();
    s.period2 = std::max(s.period2, d);
  }
  if (n < s.period2_from + 3) s.period2 = std::nan("");
  for (const auto& st : log.steps) {
    s.touchdown_max = std::max(s.touchdown_max, st.touchdown_error);
  }
  const int settle_ticks = 50;
  const int N = static_cast<int>(std::lround(config.T / config.dt));
  std::vector<double> lat;
  lat.reserve(log.ticks.size());
  for (std::size_t i = 0; i < log.ticks.size(); ++i) {
    const TickRecord& t = log.ticks[i];
    s.com_height_max_dev =
        std::max(s.com_height_max_dev, std::abs(t.com_height_error));
    if (static_cast<int>(i % N) >= settle_ticks) {
      s.swing_tracking_max =
          std::max(s.swing_tracking_max, t.swing_position_error);
    }
    s.kkt_max = std::max(s.kkt_max, t.kkt_residual);
    lat.push_back(t.solve_time);
  }
  s.latency_p50 = quantile(lat, 0.50);
  s.latency_p99 = quantile(lat, 0.99);
  for (const auto& e : log.events) {
    if (e.find("iteration cap") != std::string::npos) ++s.nonconverged;
  }
  return s;
}

}  // namespace steplab
