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

#include "steplab/lip.hpp"

#include <cmath>
#include <string>

#include "steplab/error.hpp"

namespace steplab {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ParameterError(std::string(name) + " must be finite and > 0, got " +
                         std::to_string(value));
  }
}

}  // namespace

LipParams make_params(double g, double z0, double T) {
  require_positive(g, "g");
  require_positive(z0, "z0");
  require_positive(T, "T");
  return LipParams{g, z0, T, std::sqrt(g / z0)};
}

Eigen::Matrix2d flow_matrix(const LipParams& params, double t) {
  const double l = params.lambda;
  const double c = std::cosh(l * t);
  const double s = std::sinh(l * t);
  Eigen::Matrix2d m;
  m << c, s / l, l * s, c;
  return m;
}

LipState flow(const LipParams& params, const LipState& x0, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ParameterError("flow time must be finite and >= 0");
  }
  if (!std::isfinite(x0.p) || !std::isfinite(x0.v)) {
    throw ParameterError("flow initial state is not finite");
  }
  return LipState::from(flow_matrix(params, t) * x0.vec());
}

StepMatrices step_matrices(const LipParams& params) {
  StepMatrices sm;
  sm.M = flow_matrix(params, params.T);
  sm.a.setIdentity();
  sm.b << -1.0, 0.0;
  sm.A = sm.M * sm.a;
  sm.B = sm.M * sm.b;
  return sm;
}

OrbitalLines orbital_lines(const LipParams& params, double v_y_d) {
  const double l = params.lambda;
  const double half = 0.5 * l * params.T;
  OrbitalLines lines;
  lines.sigma1 = l / std::tanh(half);
  lines.sigma2 = l * std::tanh(half);
  const double sech = 1.0 / std::cosh(half);
  lines.d2 = l * l * sech * sech * params.T * v_y_d / (2.0 * lines.sigma2);
  return lines;
}

P1Target p1_target(const LipParams& params, double v_x_d) {
  const double sigma1 = orbital_lines(params, 0.0).sigma1;
  const double half_step = 0.5 * v_x_d * params.T;
  return P1Target{{half_step, sigma1 * half_step}, v_x_d * params.T};
}

P2Target p2_targets(const LipParams& params, double v_y_d, double uL_star) {
  const OrbitalLines lines = orbital_lines(params, v_y_d);
  P2Target t;
  t.uL_star = uL_star;
  t.uR_star = v_y_d * params.T - uL_star;
  // Pre-impact state on the P2 orbital line. The velocity row carries the
  // same 1/2 as the position row; without it the two-step orbit is not
  // periodic.
  auto on_line = [&](double u) {
    return LipState{0.5 * u, 0.5 * (lines.sigma2 * u + lines.d2)};
  };
  t.yL_star = on_line(t.uL_star);
  t.yR_star = on_line(t.uR_star);
  return t;
}

double orbital_energy(const LipParams& params, const LipState& x) {
  return x.v * x.v - params.lambda * params.lambda * x.p * x.p;
}

}  // namespace steplab
