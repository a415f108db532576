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

#include "steplab/trajgen.hpp"

#include <algorithm>
#include <cmath>

#include "steplab/error.hpp"

namespace steplab {

namespace {

// de Casteljau on a copy of the control polygon.
Eigen::Vector3d de_casteljau(std::vector<Eigen::Vector3d> pts, double s) {
  for (std::size_t level = pts.size() - 1; level > 0; --level) {
    for (std::size_t i = 0; i < level; ++i) {
      pts[i] = (1.0 - s) * pts[i] + s * pts[i + 1];
    }
  }
  return pts[0];
}

// Sum of the two middle quintic Bernstein weights at s = 1/2, and the sum of
// each outer pair.
constexpr double kMidWeight = 0.625;
constexpr double kOuterWeight = 0.1875;

}  // namespace

BezierCurve::BezierCurve(std::vector<Eigen::Vector3d> control_points,
                         double duration)
    : points_(std::move(control_points)), duration_(duration) {
  if (points_.size() < 2) {
    throw ParameterError("Bezier curve needs at least two control points");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ParameterError("Bezier curve duration must be > 0");
  }
}

BezierCurve make_swing_curve(const Eigen::Vector3d& p0, double u_x, double u_y,
                             double z0, double apex, double T) {
  if (!(apex > 0.0)) throw ParameterError("swing apex must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ParameterError("swing duration must be > 0");
  }
  const Eigen::Vector3d pf(u_x, u_y, -z0);
  const double top = std::max(p0.z(), pf.z()) + apex;
  Eigen::Vector3d mid = 0.5 * (p0 + pf);
  mid.z() = (top - kOuterWeight * (p0.z() + pf.z())) / kMidWeight;
  return BezierCurve({p0, p0, mid, mid, pf, pf}, T);
}

CurveSample eval_curve(const BezierCurve& curve, double t) {
  CurveSample out;
  const double T = curve.duration();
  if (t < 0.0 || t > T) {
    out.clamped = true;
    t = std::clamp(t, 0.0, T);
  }
  const double s = t / T;
  const auto& pts = curve.control_points();
  out.position = de_casteljau(pts, s);

  // Hodograph: n (P_{i+1} - P_i), degree n-1, scaled by ds/dt = 1/T.
  const int n = curve.degree();
  std::vector<Eigen::Vector3d> diff(n);
  for (int i = 0; i < n; ++i) diff[i] = n * (pts[i + 1] - pts[i]);
  out.velocity = de_casteljau(std::move(diff), s) / T;
  return out;
}

ComReference com_reference(double z0) {
  if (!(z0 > 0.0)) throw ParameterError("CoM height must be > 0");
  ComReference ref;
  ref.height = z0;
  return ref;
}

}  // namespace steplab
