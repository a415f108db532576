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

#include "steplab/episode_csv.hpp"

#include <charconv>
#include <cmath>

namespace steplab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (const auto& n : names) *this << n;
  end_row();
}

void CsvWriter::sep() {
  if (!first_) os_ << ',';
  first_ = false;
}

CsvWriter& CsvWriter::operator<<(double v) {
  sep();
  os_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(int v) {
  sep();
  os_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(char v) {
  sep();
  os_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  sep();
  os_ << v;
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  first_ = true;
}

namespace {

void plane_header(std::vector<std::string>& h, const std::string& pfx) {
  for (const char* s :
       {"_p", "_v", "_p_meas", "_v_meas", "_p_star", "_v_star", "_u",
        "_u_star", "_u_feedback", "_u_adaptive", "_u_unsat", "_saturated",
        "_avg_velocity"}) {
    h.push_back(pfx + s);
  }
}

void plane_row(CsvWriter& w, const PlaneRecord& r) {
  w << r.pre.p << r.pre.v << r.measured.p << r.measured.v << r.target.p
    << r.target.v << r.cmd.u << r.cmd.u_star << r.cmd.feedback
    << r.cmd.adaptive << r.cmd.u_unsaturated << int(r.cmd.saturated)
    << r.avg_velocity;
}

}  // namespace

void write_s2s_steps_csv(std::ostream& os, const EpisodeLog& log) {
  CsvWriter w(os);
  std::vector<std::string> h = {"k", "stance", "v_x_d", "v_y_d"};
  plane_header(h, "sag");
  plane_header(h, "fr");
  h.insert(h.end(), {"e_norm_frontal_pv", "nn_weight_norm", "nn_error_signal"});
  w.header(h);
  for (const auto& s : log.steps) {
    w << s.k << s.stance << s.v_x_d << s.v_y_d;
    plane_row(w, s.sagittal);
    plane_row(w, s.frontal);
    w << s.error_norm << s.nn_weight_norm << s.nn_error_signal;
    w.end_row();
  }
}

void write_walk_steps_csv(std::ostream& os, const EpisodeLog& log) {
  CsvWriter w(os);
  std::vector<std::string> h = {"k", "stance", "v_x_d", "v_y_d"};
  plane_header(h, "sag");
  plane_header(h, "fr");
  h.insert(h.end(), {"e_norm_frontal_pv", "touchdown_error"});
  for (const auto& n : log.joint_names) h.push_back("pre_" + n);
  w.header(h);
  for (const auto& s : log.steps) {
    w << s.k << s.stance << s.v_x_d << s.v_y_d;
    plane_row(w, s.sagittal);
    plane_row(w, s.frontal);
    w << s.error_norm << s.touchdown_error;
    for (Eigen::Index i = 0; i < s.joints_pre.size(); ++i) w << s.joints_pre(i);
    w.end_row();
  }
}

void write_walk_ticks_csv(std::ostream& os, const EpisodeLog& log) {
  CsvWriter w(os);
  std::vector<std::string> h = {"step", "t", "stance"};
  for (const auto& n : log.configuration_names) h.push_back("q_" + n);
  for (const auto& n : log.configuration_names) h.push_back("qd_" + n);
  h.insert(h.end(),
           {"com_height_error", "com_rotation_error", "swing_position_error",
            "swing_rotation_error", "swing_target_x", "swing_target_y",
            "swing_target_z", "u_x", "u_y", "qp_iterations", "kkt_residual"});
  w.header(h);
  for (const auto& t : log.ticks) {
    w << t.step << t.t << t.stance;
    for (Eigen::Index i = 0; i < t.q.size(); ++i) w << t.q(i);
    for (Eigen::Index i = 0; i < t.q_d.size(); ++i) w << t.q_d(i);
    w << t.com_height_error << t.com_rotation_error << t.swing_position_error
      << t.swing_rotation_error << t.swing_target.x() << t.swing_target.y()
      << t.swing_target.z() << t.u_x << t.u_y << t.iterations
      << t.kkt_residual;
    w.end_row();
  }
}

void write_orbit_csv(std::ostream& os, const std::vector<OrbitRow>& rows) {
  CsvWriter w(os);
  w.header({"v_x_d", "v_y_d", "lambda", "sigma1", "sigma2", "d2", "x_star_p",
            "x_star_v", "u_star", "K_p", "K_v", "yL_star_p", "yL_star_v",
            "yR_star_p", "yR_star_v", "uL_star", "uR_star"});
  for (const auto& r : rows) {
    w << r.v_x_d << r.v_y_d << r.lambda << r.lines.sigma1 << r.lines.sigma2
      << r.lines.d2 << r.p1.x_star.p << r.p1.x_star.v << r.p1.u_star << r.K(0)
      << r.K(1) << r.p2.yL_star.p << r.p2.yL_star.v << r.p2.yR_star.p
      << r.p2.yR_star.v << r.p2.uL_star << r.p2.uR_star;
    w.end_row();
  }
}

void write_orbit_traces_csv(std::ostream& os,
                            const std::vector<TracePoint>& points) {
  CsvWriter w(os);
  w.header({"v_x_d", "plane", "stance", "t", "p", "v"});
  for (const auto& pt : points) {
    w << pt.v_x_d << pt.plane << pt.stance << pt.t << pt.x.p << pt.x.v;
    w.end_row();
  }
}

}  // namespace steplab
