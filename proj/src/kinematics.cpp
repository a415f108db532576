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

#include "steplab/kinematics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "steplab/error.hpp"

namespace steplab {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Eigen::Isometry3d make_transform(const std::array<double, 3>& xyz,
                                 const std::array<double, 3>& rpy) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = (Eigen::AngleAxisd(rpy[2], Eigen::Vector3d::UnitZ()) *
                Eigen::AngleAxisd(rpy[1], Eigen::Vector3d::UnitY()) *
                Eigen::AngleAxisd(rpy[0], Eigen::Vector3d::UnitX()))
                   .toRotationMatrix();
  t.translation() = Eigen::Vector3d(xyz[0], xyz[1], xyz[2]);
  return t;
}

const char* type_name(JointType type) {
  switch (type) {
    case JointType::kFloatingBase:
      return "floating_base";
    case JointType::kRevolute:
      return "revolute";
    case JointType::kPrismatic:
      return "prismatic";
  }
  return "?";
}

// Small reader that remembers where it is in the document so schema errors
// carry a path.
class Reader {
 public:
  Reader(const Json& node, std::string path)
      : node_(node), path_(std::move(path)) {}

  const Json& node() const { return node_; }
  const std::string& path() const { return path_; }

  bool has(const char* key) const {
    return node_.is_object() && node_.contains(key);
  }

  Reader at(const char* key) const {
    if (!node_.is_object() || !node_.contains(key)) {
      throw SchemaError(path_ + "/" + key, "missing field");
    }
    return Reader(node_.at(key), path_ + "/" + key);
  }

  Reader at(std::size_t i) const {
    return Reader(node_.at(i), path_ + "/" + std::to_string(i));
  }

  double number() const {
    if (!node_.is_number()) throw SchemaError(path_, "expected a number");
    const double v = node_.get<double>();
    if (!std::isfinite(v)) throw SchemaError(path_, "must be finite");
    return v;
  }

  std::string string() const {
    if (!node_.is_string()) throw SchemaError(path_, "expected a string");
    return node_.get<std::string>();
  }

  bool boolean() const {
    if (!node_.is_boolean()) throw SchemaError(path_, "expected a boolean");
    return node_.get<bool>();
  }

  std::size_t array_size() const {
    if (!node_.is_array()) throw SchemaError(path_, "expected an array");
    return node_.size();
  }

  template <std::size_t N>
  std::array<double, N> numbers() const {
    if (array_size() != N) {
      throw SchemaError(path_, "expected " + std::to_string(N) + " numbers");
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = at(i).number();
    return out;
  }

 private:
  const Json& node_;
  std::string path_;
};

Eigen::Vector3d to_vec(const std::array<double, 3>& a) {
  return {a[0], a[1], a[2]};
}

std::array<double, 3> to_array(const Eigen::Vector3d& v) {
  return {v.x(), v.y(), v.z()};
}

}  // namespace

std::optional<int> RobotModel::find_joint(std::string_view name) const {
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (joints[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> RobotModel::find_frame(std::string_view name) const {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

int RobotModel::frame_index(std::string_view name) const {
  auto idx = find_frame(name);
  if (!idx) {
    throw SchemaError("/frames", "no frame named '" + std::string(name) + "'");
  }
  return *idx;
}

bool RobotModel::is_ancestor(int j, int link) const {
  for (int a = link; a >= 0; a = joints[a].parent) {
    if (a == j) return true;
  }
  return false;
}

int RobotModel::passive_count() const {
  int n = 0;
  for (const auto& j : joints) n += j.passive ? 1 : 0;
  return n;
}

Eigen::VectorXd RobotModel::neutral() const {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(nq_);
  for (const auto& j : joints) {
    if (j.type == JointType::kFloatingBase) q(j.q_index + 3) = 1.0;
  }
  return q;
}

std::vector<std::string> RobotModel::velocity_names() const {
  std::vector<std::string> names;
  for (const auto& j : joints) {
    if (j.type == JointType::kFloatingBase) {
      for (const char* s : {"_vx", "_vy", "_vz", "_wx", "_wy", "_wz"}) {
        names.push_back(j.name + s);
      }
    } else {
      names.push_back(j.name);
    }
  }
  return names;
}

std::vector<std::string> RobotModel::configuration_names() const {
  std::vector<std::string> names;
  for (const auto& j : joints) {
    if (j.type == JointType::kFloatingBase) {
      for (const char* s : {"_x", "_y", "_z", "_qw", "_qx", "_qy", "_qz"}) {
        names.push_back(j.name + s);
      }
    } else {
      names.push_back(j.name);
    }
  }
  return names;
}

void RobotModel::finalize() {
  if (joints.empty()) throw SchemaError("/joints", "model has no joints");
  const int n = static_cast<int>(joints.size());

  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const std::string path = "/joints/" + std::to_string(i);
    const Joint& j = joints[i];
    if (j.parent < 0) ++roots;
    if (j.parent >= n) throw SchemaError(path + "/parent", "unknown parent");
    if (j.type == JointType::kFloatingBase && (i != 0 || j.parent >= 0)) {
      throw SchemaError(path + "/type",
                        "floating_base must be the first joint and the root");
    }
  }
  if (roots != 1) {
    throw SchemaError("/joints", "expected exactly one root joint, found " +
                                     std::to_string(roots));
  }

  // Cycle check: every parent chain must reach the root within n hops.
  for (int i = 0; i < n; ++i) {
    int hops = 0;
    for (int a = i; a >= 0; a = joints[a].parent) {
      if (++hops > n) {
        throw SchemaError("/joints/" + std::to_string(i) + "/parent",
                          "parent chain contains a cycle");
      }
    }
  }

  // Parents before children, stable with respect to document order.
  order_.clear();
  std::vector<bool> placed(n, false);
  while (static_cast<int>(order_.size()) < n) {
    for (int i = 0; i < n; ++i) {
      if (!placed[i] && (joints[i].parent < 0 || placed[joints[i].parent])) {
        placed[i] = true;
        order_.push_back(i);
      }
    }
  }

  nq_ = 0;
  nv_ = 0;
  total_mass_ = 0.0;
  for (auto& j : joints) {
    j.q_index = nq_;
    j.v_index = nv_;
    nq_ += j.nq();
    nv_ += j.nv();
    total_mass_ += j.mass;
    j.origin = make_transform(j.origin_xyz, j.origin_rpy);
  }
  if (!(total_mass_ > 0.0)) {
    throw SchemaError("/joints", "total mass must be > 0");
  }
  for (auto& f : frames) f.offset = make_transform(f.xyz, f.rpy);
}

RobotModel load_model(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  Reader root(doc, "");
  if (!doc.is_object()) throw SchemaError("", "expected an object");
  const Reader schema = root.at("schema");
  if (!schema.node().is_number_integer() || schema.node().get<int>() != 1) {
    throw SchemaError("/schema", "unsupported schema version");
  }

  RobotModel model;
  model.name = root.at("name").string();
  if (root.has("description")) {
    model.description = root.at("description").string();
  }

  const Reader joints = root.at("joints");
  const std::size_t nj = joints.array_size();
  std::vector<std::string> parent_names(nj);
  for (std::size_t i = 0; i < nj; ++i) {
    const Reader r = joints.at(i);
    Joint j;
    j.name = r.at("name").string();
    const std::string type = r.at("type").string();
    if (type == "floating_base") {
      j.type = JointType::kFloatingBase;
    } else if (type == "revolute") {
      j.type = JointType::kRevolute;
    } else if (type == "prismatic") {
      j.type = JointType::kPrismatic;
    } else {
      throw SchemaError(r.path() + "/type", "unknown joint type '" + type + "'");
    }
    const Reader parent = r.at("parent");
    if (!parent.node().is_null()) parent_names[i] = parent.string();

    j.mass = r.at("mass").number();
    if (j.mass < 0.0) throw SchemaError(r.path() + "/mass", "must be >= 0");
    j.com = to_vec(r.at("com").numbers<3>());

    if (j.type != JointType::kFloatingBase) {
      const Reader origin = r.at("origin");
      j.origin_xyz = origin.at("xyz").numbers<3>();
      j.origin_rpy = origin.at("rpy").numbers<3>();
      const Eigen::Vector3d axis = to_vec(r.at("axis").numbers<3>());
      if (std::abs(axis.norm() - 1.0) > 1e-9) {
        throw SchemaError(r.path() + "/axis", "axis must be a unit vector");
      }
      j.axis = axis;
      j.position_limits = r.at("position_limits").numbers<2>();
      j.velocity_limits = r.at("velocity_limits").numbers<2>();
      if (!(j.position_limits[0] < j.position_limits[1])) {
        throw SchemaError(r.path() + "/position_limits",
                          "lower limit must be below upper limit");
      }
      if (!(j.velocity_limits[0] < j.velocity_limits[1])) {
        throw SchemaError(r.path() + "/velocity_limits",
                          "lower limit must be below upper limit");
      }
      j.passive = r.at("passive").boolean();
    }
    model.joints.push_back(std::move(j));
  }
  for (std::size_t i = 0; i < nj; ++i) {
    if (parent_names[i].empty()) continue;
    auto p = model.find_joint(parent_names[i]);
    if (!p) {
      throw SchemaError("/joints/" + std::to_string(i) + "/parent",
                        "unknown parent '" + parent_names[i] + "'");
    }
    model.joints[i].parent = *p;
  }

  const Reader frames = root.at("frames");
  for (std::size_t i = 0; i < frames.array_size(); ++i) {
    const Reader r = frames.at(i);
    Frame f;
    f.name = r.at("name").string();
    const std::string parent = r.at("parent").string();
    auto p = model.find_joint(parent);
    if (!p) {
      throw SchemaError(r.path() + "/parent",
                        "unknown parent '" + parent + "'");
    }
    f.parent = *p;
    f.xyz = r.at("xyz").numbers<3>();
    f.rpy = r.at("rpy").numbers<3>();
    if (r.has("side")) f.side = r.at("side").string();
    model.frames.push_back(std::move(f));
  }

  model.finalize();
  return model;
}

RobotModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open model file");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

std::string save_model(const RobotModel& model) {
  OrderedJson doc;
  doc["schema"] = 1;
  doc["name"] = model.name;
  if (!model.description.empty()) doc["description"] = model.description;
  auto& joints = doc["joints"] = OrderedJson::array();
  for (const auto& j : model.joints) {
    OrderedJson r;
    r["name"] = j.name;
    r["type"] = type_name(j.type);
    r["parent"] =
        j.parent < 0 ? OrderedJson(nullptr) : OrderedJson(model.joints[j.parent].name);
    if (j.type != JointType::kFloatingBase) {
      r["origin"] = {{"xyz", j.origin_xyz}, {"rpy", j.origin_rpy}};
      r["axis"] = to_array(j.axis);
      r["position_limits"] = j.position_limits;
      r["velocity_limits"] = j.velocity_limits;
      r["passive"] = j.passive;
    }
    r["mass"] = j.mass;
    r["com"] = to_array(j.com);
    joints.push_back(std::move(r));
  }
  auto& frames = doc["frames"] = OrderedJson::array();
  for (const auto& f : model.frames) {
    OrderedJson r;
    r["name"] = f.name;
    r["parent"] = model.joints[f.parent].name;
    r["xyz"] = f.xyz;
    r["rpy"] = f.rpy;
    if (!f.side.empty()) r["side"] = f.side;
    frames.push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

Kinematics forward_kinematics(const RobotModel& model,
                              const Eigen::VectorXd& q) {
  if (q.size() != model.nq()) {
    throw ParameterError("configuration has size " + std::to_string(q.size()) +
                         ", model expects " + std::to_string(model.nq()));
  }
  if (!q.allFinite()) throw ParameterError("configuration is not finite");

  Kinematics kin;
  kin.links.resize(model.joints.size());
  Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
  for (int i : model.topological_order()) {
    const Joint& j = model.joints[i];
    const Eigen::Isometry3d parent = j.parent < 0
                                         ? Eigen::Isometry3d::Identity()
                                         : kin.links[j.parent];
    Eigen::Isometry3d motion = Eigen::Isometry3d::Identity();
    switch (j.type) {
      case JointType::kFloatingBase: {
        Eigen::Quaterniond quat(q(j.q_index + 3), q(j.q_index + 4),
                                q(j.q_index + 5), q(j.q_index + 6));
        motion.linear() = quat.normalized().toRotationMatrix();
        motion.translation() = q.segment<3>(j.q_index);
        kin.links[i] = parent * motion;
        break;
      }
      case JointType::kRevolute:
        motion.linear() =
            Eigen::AngleAxisd(q(j.q_index), j.axis).toRotationMatrix();
        kin.links[i] = parent * j.origin * motion;
        break;
      case JointType::kPrismatic:
        motion.translation() = q(j.q_index) * j.axis;
        kin.links[i] = parent * j.origin * motion;
        break;
    }
    if (j.type != JointType::kFloatingBase) {
      const double qi = q(j.q_index);
      if (qi < j.position_limits[0] || qi > j.position_limits[1]) {
        kin.limit_violations.push_back(i);
      }
    }
    weighted += j.mass * (kin.links[i] * j.com);
  }
  kin.com = weighted / model.total_mass();

  kin.frames.reserve(model.frames.size());
  for (const auto& f : model.frames) {
    kin.frames.push_back(kin.links[f.parent] * f.offset);
  }
  return kin;
}

FramePose frame_pose(const Kinematics& kin, int frame) {
  const Eigen::Isometry3d& t = kin.frames.at(frame);
  FramePose pose;
  pose.position = t.translation();
  pose.orientation = Eigen::Quaterniond(t.linear()).normalized();
  return pose;
}

Eigen::MatrixXd point_jacobian(const RobotModel& model, const Kinematics& kin,
                               int link, const Eigen::Vector3d& point) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(6, model.nv());
  for (int a = link; a >= 0; a = model.joints[a].parent) {
    const Joint& j = model.joints[a];
    const Eigen::Isometry3d& x = kin.links[a];
    switch (j.type) {
      case JointType::kFloatingBase:
        jac.block<3, 3>(0, j.v_index).setIdentity();
        jac.block<3, 3>(0, j.v_index + 3) = -skew(point - x.translation());
        jac.block<3, 3>(3, j.v_index + 3).setIdentity();
        break;
      case JointType::kRevolute: {
        const Eigen::Vector3d axis = x.linear() * j.axis;
        jac.block<3, 1>(0, j.v_index) = axis.cross(point - x.translation());
        jac.block<3, 1>(3, j.v_index) = axis;
        break;
      }
      case JointType::kPrismatic:
        jac.block<3, 1>(0, j.v_index) = x.linear() * j.axis;
        break;
    }
  }
  return jac;
}

Eigen::MatrixXd frame_jacobian(const RobotModel& model, const Kinematics& kin,
                               int frame) {
  return point_jacobian(model, kin, model.frames.at(frame).parent,
                        kin.frames.at(frame).translation());
}

Eigen::MatrixXd com_jacobian(const RobotModel& model, const Kinematics& kin,
                             std::optional<int> orientation_frame) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(6, model.nv());
  for (std::size_t i = 0; i < model.joints.size(); ++i) {
    const Joint& j = model.joints[i];
    if (j.mass == 0.0) continue;
    jac.topRows<3>() +=
        j.mass * point_jacobian(model, kin, static_cast<int>(i),
                                kin.links[i] * j.com)
                     .topRows<3>();
  }
  jac.topRows<3>() /= model.total_mass();
  if (orientation_frame) {
    jac.bottomRows<3>() =
        frame_jacobian(model, kin, *orientation_frame).bottomRows<3>();
  } else {
    const int root = model.topological_order().front();
    jac.bottomRows<3>() =
        point_jacobian(model, kin, root, kin.links[root].translation())
            .bottomRows<3>();
  }
  return jac;
}

Eigen::MatrixXd jacobian(const RobotModel& model, const Eigen::VectorXd& q,
                         std::string_view target) {
  const Kinematics kin = forward_kinematics(model, q);
  if (target == "com") return com_jacobian(model, kin, model.find_frame("pelvis"));
  return frame_jacobian(model, kin, model.frame_index(target));
}

Eigen::VectorXd displace(const RobotModel& model, const Eigen::VectorXd& q,
                         const Eigen::VectorXd& v, double dt) {
  Eigen::VectorXd out = q;
  for (const auto& j : model.joints) {
    if (j.type == JointType::kFloatingBase) {
      out.segment<3>(j.q_index) += dt * v.segment<3>(j.v_index);
      const Eigen::Vector3d w = dt * v.segment<3>(j.v_index + 3);
      Eigen::Quaterniond quat(q(j.q_index + 3), q(j.q_index + 4),
                              q(j.q_index + 5), q(j.q_index + 6));
      const double angle = w.norm();
      Eigen::Quaterniond step = Eigen::Quaterniond::Identity();
      if (angle > 0.0) step = Eigen::AngleAxisd(angle, w / angle);
      quat = (step * quat).normalized();
      out(j.q_index + 3) = quat.w();
      out(j.q_index + 4) = quat.x();
      out(j.q_index + 5) = quat.y();
      out(j.q_index + 6) = quat.z();
    } else {
      out(j.q_index) += dt * v(j.v_index);
    }
  }
  return out;
}

QuatError quat_error(const Eigen::Quaterniond& desired,
                     const Eigen::Quaterniond& current) {
  QuatError out;
  Eigen::Quaterniond d = desired;
  Eigen::Quaterniond c = current;
  if (std::abs(d.norm() - 1.0) > 1e-6) {
    d.normalize();
    out.normalized = true;
  }
  if (std::abs(c.norm() - 1.0) > 1e-6) {
    c.normalize();
    out.normalized = true;
  }
  const Eigen::Vector3d eps_d = d.vec();
  const Eigen::Vector3d eps = c.vec();
  out.error = d.w() * eps - c.w() * eps_d + eps_d.cross(eps);
  return out;
}

}  // namespace steplab
