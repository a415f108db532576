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

// Independent step-to-step episodes over a parameter list. The parallel
// kernel distributes episodes over OpenMP threads; the serial reference runs
// them in order. Both return logs in input order and are bit-identical.

#ifndef STEPLAB_SWEEP_HPP_
#define STEPLAB_SWEEP_HPP_

#include <vector>

#include "steplab/simlab.hpp"

namespace steplab {

std::vector<EpisodeLog> run_s2s_sweep(const std::vector<S2sConfig>& configs);
std::vector<EpisodeLog> run_s2s_sweep_serial(
    const std::vector<S2sConfig>& configs);

// Tail mean frontal error of every episode.
std::vector<double> sweep_tail_errors(const std::vector<S2sConfig>& configs,
                                      int window = 100);

}  // namespace steplab

#endif  // STEPLAB_SWEEP_HPP_
