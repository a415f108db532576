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


#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "steplab/error.hpp"
#include "steplab/kinematics.hpp"

namespace steplab {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RobotModel digit() {
  return load_model_file(oracle::data_path("models/reduced_digit.json"));
}

RobotModel pendulum() {
  return load_model_file(oracle::data_path("models/pendulum.json"));
}

TEST(ModelLoad, ReducedBiped) {
  const RobotModel m = digit();
  EXPECT_EQ(m.joints.size(), 13u);  // floating base + 12
  EXPECT_EQ(m.nv(), 18);
  EXPECT_EQ(m.nq(), 19);
  EXPECT_EQ(m.passive_count(), 4);
  EXPECT_TRUE(m.has_floating_base());
  for (const char* f : {"pelvis", "stance_foot", "swing_foot"}) {
    EXPECT_TRUE(m.find_frame(f).has_value()) << f;
  }
}

TEST(ModelLoad, Pendulum) {
  const RobotModel m = pendulum();
  EXPECT_EQ(m.joints.size(), 1u);
  EXPECT_EQ(m.nv(), 1);
  EXPECT_FALSE(m.has_floating_base());
}

TEST(ModelLoad, RoundTripIsBitExact) {
  for (const char* rel : {"models/reduced_digit.json", "models/pendulum.json"}) {
    const std::string text = slurp(oracle::data_path(rel));
    EXPECT_EQ(save_model(load_model(text)), text) << rel;
  }
}

const char* kTwoLinks = R"({
  "schema": 1, "name": "cycle",
  "joints": [
    {"name": "a", "type": "revolute", "parent": "b", "axis": [0, 1, 0],
     "position_limits": [-1, 1], "velocity_limits": [-1, 1], "mass": 1},
    {"name": "b", "type": "revolute", "parent": "a", "axis": [0, 1, 0],
     "position_limits": [-1, 1], "velocity_limits": [-1, 1], "mass": 1}
  ],
  "frames": []
})";

TEST(ModelLoad, SchemaErrors) {
  EXPECT_THROW(load_model(kTwoLinks), SchemaError);
  std::string bad_type = save_model(pendulum());
  bad_type.replace(bad_type.find("\"revolute\""), 10, "\"helical\"");
  try {
    load_model(bad_type);
    FAIL() << "expected a schema error";
  } catch (const SchemaError& e) {
    EXPECT_NE(e.path().find("/joints/0/type"), std::string::npos) << e.path();
  }
  std::string bad_limits = save_model(pendulum());
  const auto at = bad_limits.find("-3.0");
  ASSERT_NE(at, std::string::npos);
  bad_limits.replace(at, 4, "4.0");
  EXPECT_THROW(load_model(bad_limits), SchemaError);
  EXPECT_THROW(load_model("{\"schema\": 1"), SchemaError);
}

TEST(ForwardKinematics, PendulumHomePose) {
  const RobotModel m = pendulum();
  const Kinematics kin = forward_kinematics(m, Eigen::VectorXd::Zero(1));
  const FramePose tip = frame_pose(kin, m.frame_index("tip"));
  EXPECT_LE(tip.position.norm(), 1e-15);
  EXPECT_LE((kin.com - Eigen::Vector3d(0, 0, 0.5)).norm(), 1e-15);
}

TEST(ForwardKinematics, RejectsBadInput) {
  const RobotModel m = pendulum();
  EXPECT_THROW(forward_kinematics(m, Eigen::VectorXd::Constant(1, NAN)),
               ParameterError);
  EXPECT_THROW(forward_kinematics(m, Eigen::VectorXd::Zero(2)),
               ParameterError);
}

TEST(ForwardKinematics, BaseTranslationEquivariance) {
  const RobotModel m = digit();
  std::mt19937_64 rng(1);
  const Eigen::VectorXd q = oracle::random_configuration(m, rng);
  Eigen::VectorXd q2 = q;
  const Eigen::Vector3d d(0.3, -1.2, 0.45);
  q2.head<3>() += d;
  const Kinematics a = forward_kinematics(m, q), b = forward_kinematics(m, q2);
  for (std::size_t f = 0; f < m.frames.size(); ++f) {
    EXPECT_LE((b.frames[f].translation() - a.frames[f].translation() - d).norm(),
              1e-12);
    EXPECT_LE((b.frames[f].linear() - a.frames[f].linear()).norm(), 1e-15);
  }
  EXPECT_LE((b.com - a.com - d).norm(), 1e-12);
}

TEST(ForwardKinematics, MatchesIndependentOracle) {
  const RobotModel m = digit();
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd q = oracle::random_configuration(m, rng);
    const Kinematics kin = forward_kinematics(m, q);
    EXPECT_LE((kin.com - oracle::com(m, q)).norm(), 1e-12);
    for (int f = 0; f < static_cast<int>(m.frames.size()); ++f) {
      const Eigen::Isometry3d ref = oracle::frame_world(m, q, f);
      EXPECT_LE((kin.frames[f].matrix() - ref.matrix()).cwiseAbs().maxCoeff(),
                1e-12);
    }
  }
}

TEST(Jacobian, PendulumTextbookForm) {
  const RobotModel m = pendulum();
  const Eigen::MatrixXd J = jacobian(m, Eigen::VectorXd::Zero(1), "tip");
  const Eigen::Vector3d axis = Eigen::Vector3d::UnitY();
  const Eigen::Vector3d r(0, 0, -1);  // pivot to tip
  Eigen::Matrix<double, 6, 1> ref;
  ref << axis.cross(r), axis;
  EXPECT_LE((J - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Jacobian, FiniteDifferenceOnRandomConfigurations) {
  const RobotModel m = digit();
  const int pelvis = m.frame_index("pelvis");
  std::mt19937_64 rng(4);
  for (int i = 0; i < 25; ++i) {
    const Eigen::VectorXd q = oracle::random_configuration(m, rng);
    const Kinematics kin = forward_kinematics(m, q);
    for (int f = 0; f < static_cast<int>(m.frames.size()); ++f) {
      const Eigen::MatrixXd fd = oracle::fd_jacobian(
          m, q, [&](const Eigen::VectorXd& x) {
            return oracle::frame_world(m, x, f);
          });
      EXPECT_LE((frame_jacobian(m, kin, f) - fd).cwiseAbs().maxCoeff(), 1e-6);
    }
    const Eigen::MatrixXd fd_com = oracle::fd_jacobian(
        m, q, [&](const Eigen::VectorXd& x) {
          Eigen::Isometry3d p = oracle::frame_world(m, x, pelvis);
          p.translation() = oracle::com(m, x);
          return p;
        });
    EXPECT_LE((com_jacobian(m, kin, pelvis) - fd_com).cwiseAbs().maxCoeff(),
              1e-6);
  }
}

TEST(Displace, MatchesPerturbation) {
  const RobotModel m = digit();
  std::mt19937_64 rng(8);
  const Eigen::VectorXd q = oracle::random_configuration(m, rng);
  for (int k = 0; k < m.nv(); ++k) {
    const Eigen::VectorXd v = Eigen::VectorXd::Unit(m.nv(), k);
    const Eigen::VectorXd a = displace(m, q, v, 0.01);
    const Eigen::VectorXd b = oracle::perturb(m, q, k, 0.01);
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-14) << k;
  }
}

TEST(QuatError, Identical) {
  const Eigen::Quaterniond r(Eigen::AngleAxisd(0.4, Eigen::Vector3d(1, 2, 3).normalized()));
  EXPECT_LE(quat_error(r, r).error.norm(), 1e-15);
}

TEST(QuatError, QuarterTurnAboutZ) {
  const Eigen::Quaterniond cur(Eigen::AngleAxisd(M_PI / 2, Eigen::Vector3d::UnitZ()));
  const QuatError e = quat_error(Eigen::Quaterniond::Identity(), cur);
  // eta_d = 1, eps_d = 0: e = eps = (0, 0, sin 45).
  EXPECT_NEAR(e.error.x(), 0.0, 1e-15);
  EXPECT_NEAR(e.error.y(), 0.0, 1e-15);
  EXPECT_NEAR(e.error.z(), std::sin(M_PI / 4), 1e-15);
  EXPECT_FALSE(e.normalized);
}

TEST(QuatError, AntisymmetricForSmallAngles) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Quaterniond a(Eigen::AngleAxisd(
        0.01 * u(rng), Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized()));
    const Eigen::Quaterniond b(Eigen::AngleAxisd(
        0.01 * u(rng), Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized()));
    EXPECT_LE((quat_error(a, b).error + quat_error(b, a).error).norm(), 1e-8);
  }
}

TEST(QuatError, NormalizesAndFlags) {
  const Eigen::Quaterniond half(0.5, 0.0, 0.0, 0.0);
  const QuatError e = quat_error(half, Eigen::Quaterniond::Identity());
  EXPECT_TRUE(e.normalized);
  EXPECT_LE(e.error.norm(), 1e-15);
}

}  // namespace
}  // namespace steplab
