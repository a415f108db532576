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

// Two-layer neural regulator for the frontal-plane placement:
//
//   phi(x, v_x_d, v_y_d) = tanh(W^T tanh(V^T [p; v; v_x_d; v_y_d]))
//
// V is drawn once from a seeded standard normal and never changes. W starts
// at zero (phi == 0) and is trained once per step by the delta rule
// dW = -gamma * E * hidden, with E a signed scalar projection of the
// pre-impact state error.

#ifndef STEPLAB_NEUROREG_HPP_
#define STEPLAB_NEUROREG_HPP_

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "steplab/lip.hpp"

namespace steplab {

inline constexpr int kDefaultHiddenWidth = 96;
inline constexpr double kDefaultLearningRate = 1e-4;

struct ErrorWeights {
  double position = 1.0;
  double velocity = 1.0;
};

// (1, 1/sigma2): velocity error expressed as an equivalent position error.
ErrorWeights default_error_weights(const LipParams& params);

struct RegulatorOutput {
  double phi = 0.0;
  Eigen::VectorXd hidden;  // tanh(V^T input), needed by delta_update
};

struct DeltaReport {
  double error_signal = 0.0;
  double max_abs_dw = 0.0;
  bool skipped = false;  // non-finite error, weights left untouched
};

class NeuralRegulator {
 public:
  static constexpr int kInputs = 4;

  // Throws ParameterError if hidden_width < 1 or gamma <= 0.
  NeuralRegulator(int hidden_width, std::uint64_t seed,
                  double gamma = kDefaultLearningRate,
                  ErrorWeights weights = {});

  // Explicit weights, mainly for tests and snapshot restore.
  NeuralRegulator(Eigen::MatrixXd V, Eigen::VectorXd W, double gamma,
                  std::uint64_t seed, ErrorWeights weights = {});

  RegulatorOutput forward(const LipState& x_k, double v_x_d,
                          double v_y_d) const;

  // Signed error signal for the pair (x_k, x_star).
  double error_signal(const LipState& x_k, const LipState& x_star) const;

  DeltaReport delta_update(const LipState& x_k, const LipState& x_star,
                           const Eigen::VectorXd& hidden);

  // Lower-level form of the rule with an explicit error signal.
  DeltaReport apply_delta(double error_signal, const Eigen::VectorXd& hidden);

  int hidden_width() const { return static_cast<int>(W_.size()); }
  double gamma() const { return gamma_; }
  std::uint64_t seed() const { return seed_; }
  const ErrorWeights& error_weights() const { return weights_; }
  const Eigen::MatrixXd& V() const { return V_; }
  const Eigen::VectorXd& W() const { return W_; }

  // JSON snapshot {schema, seed, hidden, gamma, error_weights, V, W}.
  std::string to_json() const;
  static NeuralRegulator from_json(const std::string& text);

 private:
  Eigen::MatrixXd V_;  // kInputs x H
  Eigen::VectorXd W_;  // H
  double gamma_;
  std::uint64_t seed_;
  ErrorWeights weights_;
};

inline NeuralRegulator init_regulator(int hidden_width, std::uint64_t seed) {
  return NeuralRegulator(hidden_width, seed);
}

}  // namespace steplab

#endif  // STEPLAB_NEUROREG_HPP_
