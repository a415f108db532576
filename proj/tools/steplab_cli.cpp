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

// steplab: orbit | s2s | walk | validate
//
// Exit codes: 0 all scenario assertions pass, 1 an assertion failed,
// 2 configuration or schema error, 3 runtime failure (e.g. infeasible IK).

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "steplab/error.hpp"
#include "steplab/scenario.hpp"

namespace {

constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("steplab");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("STEPLAB_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; keep the default instead.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("STEPLAB_LOG='{}' not recognised, using warn", env);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"LIP step-to-step walking control experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  bool no_adapt = false;

  auto* orbit = app.add_subcommand("orbit", "orbital lines, targets, gain and phase-portrait traces");
  auto* s2s = app.add_subcommand("s2s", "step-to-step episode on the perturbed LIP plant");
  auto* walk = app.add_subcommand("walk", "kinematic walk on a floating-base model");
  auto* validate = app.add_subcommand("validate", "schema check of a scenario or model document");

  for (auto* sub : {orbit, s2s, walk, validate}) {
    sub->add_option("--config", config, "scenario JSON (schema 1)");
    sub->add_option("--set", sets, "override a field: dotted.path=value")
        ->type_name("K=V");
    sub->add_option("--seed", seed, "episode seed");
    if (sub != validate) sub->add_option("--out", out, "output directory");
    sub->add_flag("--no-adapt", no_adapt, "disable the neural regulator");
  }
  validate->get_option("--config")->required();

  CLI11_PARSE(app, argc, argv);

  steplab::Overrides ov;
  ov.set = sets;
  ov.seed = seed;
  if (!out.empty()) ov.output_dir = out;
  ov.no_adapt = no_adapt;

  try {
    if (validate->parsed()) {
      std::cout << steplab::validate_document(config, ov) << "\n";
      return 0;
    }
    steplab::Mode mode = steplab::Mode::kOrbit;
    if (s2s->parsed()) mode = steplab::Mode::kS2s;
    if (walk->parsed()) mode = steplab::Mode::kWalk;

    const steplab::ScenarioConfig cfg =
        config.empty() ? steplab::parse_scenario("{\"schema\": 1}", ".", ov)
                       : steplab::load_scenario(config, ov);
    spdlog::info("running {} into {}", steplab::mode_name(mode), cfg.output_dir);
    const steplab::CommandResult res = steplab::run_command(mode, cfg);
    for (const auto& f : res.files) spdlog::info("wrote {}", f);
    std::cout << res.summary;
    for (const auto& line : res.console) std::cout << line << "\n";
    if (!res.passed) {
      spdlog::error("scenario assertions failed");
      return kExitAssertion;
    }
    return 0;
  } catch (const steplab::SchemaError& e) {
    spdlog::error("config: {}", e.what());
    return kExitConfig;
  } catch (const steplab::ParameterError& e) {
    spdlog::error("config: {}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
}
