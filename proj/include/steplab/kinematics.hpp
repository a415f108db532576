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

// Kinematic tree with an optional floating base.
//
// Configuration layout: a floating base takes 7 entries of q
// (x, y, z, qw, qx, qy, qz) and 6 entries of the velocity vector
// (linear then angular, both in world coordinates). Revolute and prismatic
// joints take one entry each. Joint order in q and qdot follows the order of
// the `joints` array in the model document.
//
// Jacobians are 6 x nv: rows 0-2 linear velocity, rows 3-5 angular velocity,
// both in world coordinates.

#ifndef STEPLAB_KINEMATICS_HPP_
#define STEPLAB_KINEMATICS_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace steplab {

enum class JointType { kFloatingBase, kRevolute, kPrismatic };

struct Joint {
  std::string name;
  int parent = -1;  // index into RobotModel::joints, -1 for the root
  JointType type = JointType::kRevolute;
  std::array<double, 3> origin_xyz{};
  std::array<double, 3> origin_rpy{};
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  std::array<double, 2> position_limits{};  // rad or m
  std::array<double, 2> velocity_limits{};
  bool passive = false;
  double mass = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();  // in the joint's link frame

  int q_index = 0;
  int v_index = 0;
  Eigen::Isometry3d origin = Eigen::Isometry3d::Identity();

  int nq() const { return type == JointType::kFloatingBase ? 7 : 1; }
  int nv() const { return type == JointType::kFloatingBase ? 6 : 1; }
};

struct Frame {
  std::string name;
  int parent = 0;  // joint index
  std::array<double, 3> xyz{};
  std::array<double, 3> rpy{};
  std::string side;  // optional tag ("left" / "right"), empty if unused
  Eigen::Isometry3d offset = Eigen::Isometry3d::Identity();
};

struct FramePose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};

class RobotModel {
 public:
  std::string name;
  std::string description;
  std::vector<Joint> joints;
  std::vector<Frame> frames;

  int nq() const { return nq_; }
  int nv() const { return nv_; }
  double total_mass() const { return total_mass_; }
  bool has_floating_base() const {
    return !joints.empty() && joints[0].type == JointType::kFloatingBase;
  }
  // Joints in an order where every parent precedes its children.
  const std::vector<int>& topological_order() const { return order_; }

  std::optional<int> find_joint(std::string_view name) const;
  std::optional<int> find_frame(std::string_view name) const;
  // Throws SchemaError if absent.
  int frame_index(std::string_view name) const;

  // True if joint `j` lies on the path from the root to link `link`.
  bool is_ancestor(int j, int link) const;

  int passive_count() const;

  // Neutral configuration: zero joints, identity base orientation.
  Eigen::VectorXd neutral() const;

  // Names of the velocity coordinates, e.g. base_vx ... base_wz, knee.
  std::vector<std::string> velocity_names() const;
  std::vector<std::string> configuration_names() const;

  // Validates the tree and fills derived quantities. Called by the loader.
  void finalize();

 private:
  int nq_ = 0;
  int nv_ = 0;
  double total_mass_ = 0.0;
  std::vector<int> order_;
};

// Parses and validates a model document (schema 1). Throws SchemaError with
// the JSON path of the first offending field.
RobotModel load_model(const std::string& json_text);
RobotModel load_model_file(const std::string& path);
std::string save_model(const RobotModel& model);

struct Kinematics {
  std::vector<Eigen::Isometry3d> links;   // per joint, world pose
  std::vector<Eigen::Isometry3d> frames;  // per frame, world pose
  Eigen::Vector3d com = Eigen::Vector3d::Zero();
  std::vector<int> limit_violations;  // joints outside position limits
};

// Throws ParameterError for non-finite q or a size mismatch.
Kinematics forward_kinematics(const RobotModel& model,
                              const Eigen::VectorXd& q);

FramePose frame_pose(const Kinematics& kin, int frame);

// 6 x nv Jacobian of a point rigidly attached to link `link` (world coords).
Eigen::MatrixXd point_jacobian(const RobotModel& model, const Kinematics& kin,
                               int link, const Eigen::Vector3d& point);

Eigen::MatrixXd frame_jacobian(const RobotModel& model, const Kinematics& kin,
                               int frame);

// Rows 0-2: CoM linear velocity (mass-weighted sum of link CoM Jacobians).
// Rows 3-5: angular velocity of `orientation_frame` (the pelvis for the
// walking model), or of the root link if none is given.
Eigen::MatrixXd com_jacobian(const RobotModel& model, const Kinematics& kin,
                             std::optional<int> orientation_frame = {});

// Convenience form: target is "com" or a frame name.
Eigen::MatrixXd jacobian(const RobotModel& model, const Eigen::VectorXd& q,
                         std::string_view target);

// q (+) v dt on the configuration manifold. No limit clamping.
Eigen::VectorXd displace(const RobotModel& model, const Eigen::VectorXd& q,
                         const Eigen::VectorXd& v, double dt);

struct QuatError {
  Eigen::Vector3d error = Eigen::Vector3d::Zero();
  bool normalized = false;  // an input was off unit norm by more than 1e-6
};

// e = eta_d * eps - eta * eps_d + eps_d x eps
QuatError quat_error(const Eigen::Quaterniond& desired,
                     const Eigen::Quaterniond& current);

}  // namespace steplab

#endif  // STEPLAB_KINEMATICS_HPP_
