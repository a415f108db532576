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

#include "steplab/sweep.hpp"

#include <exception>

namespace steplab {

std::vector<EpisodeLog> run_s2s_sweep(const std::vector<S2sConfig>& configs) {
  const long n = static_cast<long>(configs.size());
  std::vector<EpisodeLog> logs(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      logs[i] = run_s2s_episode(configs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return logs;
}

std::vector<EpisodeLog> run_s2s_sweep_serial(
    const std::vector<S2sConfig>& configs) {
  std::vector<EpisodeLog> logs;
  logs.reserve(configs.size());
  for (const auto& c : configs) logs.push_back(run_s2s_episode(c));
  return logs;
}

std::vector<double> sweep_tail_errors(const std::vector<S2sConfig>& configs,
                                      int window) {
  const std::vector<EpisodeLog> logs = run_s2s_sweep(configs);
  std::vector<double> out;
  out.reserve(logs.size());
  for (const auto& log : logs) out.push_back(tail_mean_error(log, window));
  return out;
}

}  // namespace steplab
