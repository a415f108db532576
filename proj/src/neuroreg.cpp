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

#include "steplab/neuroreg.hpp"

#include <cmath>
#include <random>

#include "json.hpp"
#include "steplab/error.hpp"

namespace steplab {

ErrorWeights default_error_weights(const LipParams& params) {
  return {1.0, 1.0 / orbital_lines(params, 0.0).sigma2};
}

NeuralRegulator::NeuralRegulator(int hidden_width, std::uint64_t seed,
                                 double gamma, ErrorWeights weights)
    : gamma_(gamma), seed_(seed), weights_(weights) {
  if (hidden_width < 1) {
    throw ParameterError("regulator hidden width must be >= 1");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ParameterError("regulator learning rate must be > 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  V_.resize(kInputs, hidden_width);
  // Column-major fill: one hidden unit at a time.
  for (int j = 0; j < hidden_width; ++j) {
    for (int i = 0; i < kInputs; ++i) V_(i, j) = normal(rng);
  }
  W_ = Eigen::VectorXd::Zero(hidden_width);
}

NeuralRegulator::NeuralRegulator(Eigen::MatrixXd V, Eigen::VectorXd W,
                                 double gamma, std::uint64_t seed,
                                 ErrorWeights weights)
    : V_(std::move(V)),
      W_(std::move(W)),
      gamma_(gamma),
      seed_(seed),
      weights_(weights) {
  if (V_.rows() != kInputs || V_.cols() < 1 || V_.cols() != W_.size()) {
    throw ParameterError("regulator weights have inconsistent shapes");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ParameterError("regulator learning rate must be > 0");
  }
}

RegulatorOutput NeuralRegulator::forward(const LipState& x_k, double v_x_d,
                                         double v_y_d) const {
  Eigen::Vector4d input(x_k.p, x_k.v, v_x_d, v_y_d);
  RegulatorOutput out;
  out.hidden = (V_.transpose() * input).array().tanh().matrix();
  out.phi = std::tanh(W_.dot(out.hidden));
  return out;
}

double NeuralRegulator::error_signal(const LipState& x_k,
                                     const LipState& x_star) const {
  return weights_.position * (x_k.p - x_star.p) +
         weights_.velocity * (x_k.v - x_star.v);
}

DeltaReport NeuralRegulator::delta_update(const LipState& x_k,
                                          const LipState& x_star,
                                          const Eigen::VectorXd& hidden) {
  return apply_delta(error_signal(x_k, x_star), hidden);
}

DeltaReport NeuralRegulator::apply_delta(double error_signal,
                                         const Eigen::VectorXd& hidden) {
  DeltaReport report;
  report.error_signal = error_signal;
  if (!std::isfinite(error_signal) || hidden.size() != W_.size() ||
      !hidden.allFinite()) {
    report.skipped = true;
    return report;
  }
  const Eigen::VectorXd dw = -gamma_ * error_signal * hidden;
  W_ += dw;
  report.max_abs_dw = dw.cwiseAbs().maxCoeff();
  return report;
}

std::string NeuralRegulator::to_json() const {
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["seed"] = seed_;
  doc["hidden"] = hidden_width();
  doc["gamma"] = gamma_;
  doc["error_weights"] = {weights_.position, weights_.velocity};
  auto& v = doc["V"] = nlohmann::ordered_json::array();
  for (int i = 0; i < V_.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int j = 0; j < V_.cols(); ++j) row.push_back(V_(i, j));
    v.push_back(std::move(row));
  }
  auto& w = doc["W"] = nlohmann::ordered_json::array();
  for (int j = 0; j < W_.size(); ++j) w.push_back(W_(j));
  return doc.dump(2);
}

NeuralRegulator NeuralRegulator::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", e.what());
  }
  try {
    if (doc.at("schema").get<int>() != 1) {
      throw SchemaError("/schema", "unsupported version");
    }
    const int h = doc.at("hidden").get<int>();
    const auto& v = doc.at("V");
    const auto& w = doc.at("W");
    if (h < 1 || v.size() != kInputs || static_cast<int>(w.size()) != h) {
      throw SchemaError("/V", "shape does not match hidden width");
    }
    Eigen::MatrixXd V(kInputs, h);
    for (int i = 0; i < kInputs; ++i) {
      if (static_cast<int>(v[i].size()) != h) {
        throw SchemaError("/V/" + std::to_string(i), "row length mismatch");
      }
      for (int j = 0; j < h; ++j) V(i, j) = v[i][j].get<double>();
    }
    Eigen::VectorXd W(h);
    for (int j = 0; j < h; ++j) W(j) = w[j].get<double>();
    const auto& ew = doc.at("error_weights");
    return NeuralRegulator(std::move(V), std::move(W),
                           doc.at("gamma").get<double>(),
                           doc.at("seed").get<std::uint64_t>(),
                           {ew.at(0).get<double>(), ew.at(1).get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("", e.what());
  }
}

}  // namespace steplab
