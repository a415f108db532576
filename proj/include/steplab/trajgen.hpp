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

// Task-space references for one step: a constant-height CoM and a quintic
// Bezier swing-foot curve.
//
// The swing curve lives in a ground-aligned frame whose origin sits at CoM
// height z0 straight above the stance foot. Touchdown is therefore
// (u_x, u_y, -z0), i.e. the commanded step relative to the stance foot at
// ground level.

#ifndef STEPLAB_TRAJGEN_HPP_
#define STEPLAB_TRAJGEN_HPP_

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace steplab {

inline constexpr double kDefaultApex = 0.08;

class BezierCurve {
 public:
  // Throws ParameterError if there are fewer than two control points or
  // duration <= 0.
  BezierCurve(std::vector<Eigen::Vector3d> control_points, double duration);

  int degree() const { return static_cast<int>(points_.size()) - 1; }
  double duration() const { return duration_; }
  const std::vector<Eigen::Vector3d>& control_points() const {
    return points_;
  }

 private:
  std::vector<Eigen::Vector3d> points_;
  double duration_;
};

struct CurveSample {
  Eigen::Vector3d position;
  Eigen::Vector3d velocity;
  bool clamped = false;  // t was outside [0, T]
};

// Degree 5: P0 = P1 = p0, P4 = P5 = (u_x, u_y, -z0), P2 = P3 at mid-span
// lifted so that the mid-step height is max(endpoint z) + apex.
BezierCurve make_swing_curve(const Eigen::Vector3d& p0, double u_x, double u_y,
                             double z0, double apex, double T);

CurveSample eval_curve(const BezierCurve& curve, double t);

// Reference for the CoM task. Only the height and the rotation are
// constrained; horizontal CoM motion is left to the pendulum.
struct ComReference {
  double height = 0.0;
  double vertical_velocity = 0.0;
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
};

ComReference com_reference(double z0);

struct TaskReference {
  ComReference com;
  BezierCurve swing_curve;
  Eigen::Quaterniond swing_rotation = Eigen::Quaterniond::Identity();
};

}  // namespace steplab

#endif  // STEPLAB_TRAJGEN_HPP_
