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


#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "steplab/ik_qp.hpp"
#include "steplab/kinematics.hpp"
#include "steplab/simlab.hpp"
#include "steplab/sweep.hpp"

namespace {

std::vector<steplab::S2sConfig> sweep_configs(int n) {
  std::vector<steplab::S2sConfig> out;
  for (int i = 0; i < n; ++i) {
    steplab::S2sConfig c;
    c.schedule = {{0.1, 0.0, 200}};
    c.frontal_mismatch.mode = steplab::MismatchMode::kImpactLoss;
    c.frontal_mismatch.kappa = 0.02 * (i % 10);
    c.adaptation.enabled = true;
    c.adaptation.seed = static_cast<std::uint64_t>(i);
    out.push_back(c);
  }
  return out;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto configs = sweep_configs(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(steplab::run_s2s_sweep_serial(configs));
  }
}
BENCHMARK(BM_SweepSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SweepParallel(benchmark::State& state) {
  const auto configs = sweep_configs(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(steplab::run_s2s_sweep(configs));
  }
}
BENCHMARK(BM_SweepParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolveTick(benchmark::State& state) {
  const steplab::RobotModel m = steplab::load_model_file(
      std::string(STEPLAB_DATA_DIR) + "/models/reduced_digit.json");
  Eigen::VectorXd q = m.neutral();
  q(2) = 1.0;
  for (const auto& j : m.joints) {
    if (j.name.find("knee") != std::string::npos) q(j.q_index) = 0.6;
  }
  const steplab::Kinematics kin = steplab::forward_kinematics(m, q);
  steplab::IkProblem p = steplab::make_problem(m, q);
  p.J_com = steplab::com_jacobian(m, kin, m.frame_index("pelvis"));
  p.J_sw = steplab::frame_jacobian(m, kin, m.frame_index("swing_foot"));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int r = 0; r < 6; ++r) {
    p.T_com(r) = u(rng);
    p.T_sw(r) = u(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(steplab::solve_tick(p));
  }
}
BENCHMARK(BM_SolveTick)->Unit(benchmark::kMicrosecond);

void BM_KinematicWalk(benchmark::State& state) {
  const steplab::RobotModel m = steplab::load_model_file(
      std::string(STEPLAB_DATA_DIR) + "/models/reduced_digit.json");
  steplab::WalkConfig c;
  c.record_ticks = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(steplab::run_kinematic_walk(m, c));
  }
}
BENCHMARK(BM_KinematicWalk)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
