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

#include "steplab/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "steplab/error.hpp"

namespace steplab {

const char* mismatch_mode_name(MismatchMode mode) {
  switch (mode) {
    case MismatchMode::kNone:
      return "none";
    case MismatchMode::kConstant:
      return "constant";
    case MismatchMode::kStateAffine:
      return "state_affine";
    case MismatchMode::kImpactLoss:
      return "impact_loss";
    case MismatchMode::kHeightOffset:
      return "height_offset";
  }
  return "none";
}

MismatchMode parse_mismatch_mode(const std::string& name) {
  for (MismatchMode m :
       {MismatchMode::kNone, MismatchMode::kConstant, MismatchMode::kStateAffine,
        MismatchMode::kImpactLoss, MismatchMode::kHeightOffset}) {
    if (name == mismatch_mode_name(m)) return m;
  }
  throw ParameterError("unknown mismatch mode '" + name + "'");
}

void MismatchModel::validate(const LipParams& params) const {
  if (!xi.allFinite() || !gain.allFinite() || !std::isfinite(kappa) ||
      !std::isfinite(dz)) {
    throw ParameterError("mismatch parameters must be finite");
  }
  if (mode == MismatchMode::kImpactLoss && (kappa < 0.0 || kappa >= 1.0)) {
    throw ParameterError("impact-loss kappa must lie in [0, 1)");
  }
  if (mode == MismatchMode::kHeightOffset && !(params.z0 + dz > 0.0)) {
    throw ParameterError("height offset leaves a non-positive plant height");
  }
}

LipState s2s_step(const LipParams& params, const StepMatrices& sm,
                  const MismatchModel& mismatch, const LipState& x_k,
                  double u_k) {
  const Eigen::Vector2d x = x_k.vec();
  switch (mismatch.mode) {
    case MismatchMode::kNone:
      return LipState::from(sm.A * x + sm.B * u_k);
    case MismatchMode::kConstant:
      return LipState::from(sm.A * x + sm.B * u_k + mismatch.xi);
    case MismatchMode::kStateAffine:
      return LipState::from(sm.A * x + sm.B * u_k + mismatch.xi +
                            mismatch.gain * x);
    case MismatchMode::kImpactLoss: {
      const Eigen::Vector2d post(x_k.p - u_k, (1.0 - mismatch.kappa) * x_k.v);
      return LipState::from(sm.M * post);
    }
    case MismatchMode::kHeightOffset: {
      const LipParams plant =
          make_params(params.g, params.z0 + mismatch.dz, params.T);
      return flow(plant, {x_k.p - u_k, x_k.v}, params.T);
    }
  }
  return x_k;
}

int S2sConfig::total_steps() const {
  int n = 0;
  for (const auto& s : schedule) n += s.steps;
  return n;
}

namespace {

void validate(const S2sConfig& c, const LipParams& params) {
  if (c.schedule.empty()) throw ParameterError("velocity schedule is empty");
  for (const auto& s : c.schedule) {
    if (s.steps < 1) throw ParameterError("schedule segments need steps >= 1");
    if (!std::isfinite(s.v_x) || !std::isfinite(s.v_y)) {
      throw ParameterError("schedule velocities must be finite");
    }
  }
  if (!std::isfinite(c.uL_star)) throw ParameterError("uL_star must be finite");
  if (!(c.step_limit > 0.0)) throw ParameterError("step limit must be > 0");
  if (!(c.noise_std >= 0.0)) throw ParameterError("noise std must be >= 0");
  if (!c.initial_sagittal_error.allFinite() ||
      !c.initial_frontal_error.allFinite()) {
    throw ParameterError("initial errors must be finite");
  }
  c.sagittal_mismatch.validate(params);
  c.frontal_mismatch.validate(params);
}

std::string saturation_event(int k, const char* plane, const StepCommand& cmd) {
  std::ostringstream os;
  os << "step " << k << ": " << plane << " placement saturated ("
     << cmd.u_unsaturated << " -> " << cmd.u << ")";
  return os.str();
}

}  // namespace

EpisodeLog run_s2s_episode(const S2sConfig& config) {
  const LipParams params = make_params(config.g, config.z0, config.T);
  validate(config, params);
  const StepMatrices sm = step_matrices(params);
  const DeadbeatGain gain = deadbeat_gain(sm);

  std::optional<NeuralRegulator> nn;
  if (config.adaptation.enabled) {
    nn.emplace(config.adaptation.hidden, config.adaptation.seed,
               config.adaptation.gamma, default_error_weights(params));
  }
  std::mt19937_64 noise_rng(config.noise_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto measure = [&](const LipState& x) {
    if (config.noise_std == 0.0) return x;
    const double dp = config.noise_std * normal(noise_rng);
    const double dv = config.noise_std * normal(noise_rng);
    return LipState{x.p + dp, x.v + dv};
  };

  const VelocitySegment& first = config.schedule.front();
  LipState xs = LipState::from(p1_target(params, first.v_x).x_star.vec() +
                               config.initial_sagittal_error);
  LipState xf = LipState::from(
      p2_targets(params, first.v_y, config.uL_star).yL_star.vec() +
      config.initial_frontal_error);

  EpisodeLog log;
  log.steps.reserve(config.total_steps());
  int k = 0;
  for (const auto& seg : config.schedule) {
    const P1Target p1 = p1_target(params, seg.v_x);
    const P2Target p2 = p2_targets(params, seg.v_y, config.uL_star);
    for (int i = 0; i < seg.steps; ++i, ++k) {
      StepRecord rec;
      rec.k = k;
      rec.stance = k % 2 == 0 ? 'L' : 'R';
      rec.v_x_d = seg.v_x;
      rec.v_y_d = seg.v_y;

      rec.sagittal.pre = xs;
      rec.sagittal.measured = measure(xs);
      rec.sagittal.target = p1.x_star;
      rec.sagittal.cmd = foot_placement(rec.sagittal.measured, p1.x_star,
                                        p1.u_star, gain, 0.0,
                                        config.step_limit);

      const bool left = rec.stance == 'L';
      const LipState& y_star = left ? p2.yL_star : p2.yR_star;
      const double u_star = left ? p2.uL_star : p2.uR_star;
      rec.frontal.pre = xf;
      rec.frontal.measured = measure(xf);
      rec.frontal.target = y_star;
      double phi = 0.0;
      RegulatorOutput out;
      if (nn) {
        out = nn->forward(rec.frontal.measured, seg.v_x, seg.v_y);
        phi = out.phi;
      }
      rec.frontal.cmd = foot_placement(rec.frontal.measured, y_star, u_star,
                                       gain, phi, config.step_limit);
      rec.error_norm = (xf.vec() - y_star.vec()).norm();
      if (nn) {
        const DeltaReport rep =
            nn->delta_update(rec.frontal.measured, y_star, out.hidden);
        rec.nn_error_signal = rep.error_signal;
        if (rep.skipped) {
          log.events.push_back("step " + std::to_string(k) +
                               ": regulator update skipped (non-finite)");
        }
        rec.nn_weight_norm = nn->W().norm();
      }
      if (rec.sagittal.cmd.saturated) {
        log.events.push_back(saturation_event(k, "sagittal", rec.sagittal.cmd));
      }
      if (rec.frontal.cmd.saturated) {
        log.events.push_back(saturation_event(k, "frontal", rec.frontal.cmd));
      }

      const LipState xs_next = s2s_step(params, sm, config.sagittal_mismatch,
                                        xs, rec.sagittal.cmd.u);
      const LipState xf_next = s2s_step(params, sm, config.frontal_mismatch,
                                        xf, rec.frontal.cmd.u);
      rec.sagittal.avg_velocity =
          (xs_next.p - (xs.p - rec.sagittal.cmd.u)) / params.T;
      rec.frontal.avg_velocity =
          (xf_next.p - (xf.p - rec.frontal.cmd.u)) / params.T;
      if (!xs_next.vec().allFinite() || !xf_next.vec().allFinite()) {
        throw ParameterError("plant state diverged at step " +
                             std::to_string(k));
      }
      xs = xs_next;
      xf = xf_next;
      log.steps.push_back(std::move(rec));
    }
  }
  return log;
}

std::vector<SegmentSummary> segment_velocities(const S2sConfig& config,
                                               const EpisodeLog& log,
                                               int transient) {
  constexpr double kFloor = 1e-9;
  std::vector<SegmentSummary> out;
  std::size_t k = 0;
  for (const auto& seg : config.schedule) {
    SegmentSummary s;
    s.v_x_d = seg.v_x;
    double sum = 0.0;
    for (int i = 0; i < seg.steps && k < log.steps.size(); ++i, ++k) {
      if (i < transient) continue;
      sum += log.steps[k].sagittal.avg_velocity;
      ++s.samples;
    }
    s.mean_velocity = s.samples > 0 ? sum / s.samples : 0.0;
    s.rel_error =
        std::abs(s.mean_velocity - seg.v_x) / std::max(std::abs(seg.v_x), kFloor);
    out.push_back(s);
  }
  return out;
}

double tail_mean_error(const EpisodeLog& log, int window) {
  const int n = static_cast<int>(log.steps.size());
  const int from = std::max(0, n - window);
  double sum = 0.0;
  for (int k = from; k < n; ++k) sum += log.steps[k].error_norm;
  return n > from ? sum / (n - from) : 0.0;
}

double calibrate_impact_loss(S2sConfig config, double target, double kappa_max,
                             int window) {
  config.adaptation.enabled = false;
  config.frontal_mismatch = MismatchModel{};
  config.frontal_mismatch.mode = MismatchMode::kImpactLoss;
  auto error_at = [&](double kappa) {
    config.frontal_mismatch.kappa = kappa;
    return tail_mean_error(run_s2s_episode(config), window);
  };
  double lo = 0.0, hi = kappa_max;
  if (!(error_at(lo) <= target && error_at(hi) >= target)) {
    throw ParameterError("impact-loss target error is not bracketed");
  }
  for (int i = 0; i < 80 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (error_at(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(q * static_cast<double>(values.size()));
  const std::size_t idx =
      static_cast<std::size_t>(std::clamp(rank, 1.0, double(values.size()))) - 1;
  return values[idx];
}

}  // namespace steplab
