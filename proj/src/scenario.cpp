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

#include "steplab/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "steplab/episode_csv.hpp"
#include "steplab/error.hpp"
#include "steplab/sweep.hpp"

#ifndef STEPLAB_DEFAULT_MODEL
#define STEPLAB_DEFAULT_MODEL "reduced_digit.json"
#endif

namespace steplab {

namespace fs = std::filesystem;
using Json = nlohmann::json;

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::kOrbit:
      return "orbit";
    case Mode::kS2s:
      return "s2s";
    case Mode::kWalk:
      return "walk";
  }
  return "orbit";
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
}

// Typed, path-tracking accessors over an object node.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) throw SchemaError(path_ + "/" + it.key(), "unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  std::string at(const char* key) const { return path_ + "/" + key; }
  const Json& raw(const char* key) const { return j_.at(key); }

  Node object(const char* key) const { return Node(j_.at(key), at(key)); }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_number()) throw SchemaError(at(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(at(key), "must be finite");
    return d;
  }

  double positive(const char* key, double fallback) const {
    const double d = number(key, fallback);
    if (!(d > 0.0)) throw SchemaError(at(key), "must be > 0");
    return d;
  }

  int integer(const char* key, int fallback, int min) const {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) throw SchemaError(at(key), "expected an integer");
    const auto i = v.get<long long>();
    if (i < min || i > std::numeric_limits<int>::max()) {
      throw SchemaError(at(key), "must be >= " + std::to_string(min));
    }
    return static_cast<int>(i);
  }

  std::uint64_t u64(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw SchemaError(at(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) throw SchemaError(at(key), "expected a boolean");
    return v.get<bool>();
  }

  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_string()) throw SchemaError(at(key), "expected a string");
    return v.get<std::string>();
  }

  std::optional<double> optional_number(const char* key) const {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

 private:
  const Json& j_;
  std::string path_;
};

Eigen::Vector2d vec2(const Node& n, const char* key) {
  if (!n.has(key)) return Eigen::Vector2d::Zero();
  const Json& v = n.raw(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw SchemaError(n.at(key), "expected [number, number]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

MismatchModel parse_mismatch(const Node& n, const LipParams& lip,
                             std::optional<double>* target_error) {
  n.allow({"mode", "xi", "gain", "kappa", "dz", "target_steady_error"});
  MismatchModel m;
  try {
    m.mode = parse_mismatch_mode(n.string("mode", "none"));
  } catch (const ParameterError& e) {
    throw SchemaError(n.at("mode"), e.what());
  }
  m.xi = vec2(n, "xi");
  if (n.has("gain")) {
    const Json& g = n.raw("gain");
    const bool ok = g.is_array() && g.size() == 2 && g[0].is_array() &&
                    g[1].is_array() && g[0].size() == 2 && g[1].size() == 2;
    if (!ok) throw SchemaError(n.at("gain"), "expected a 2x2 array");
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        if (!g[r][c].is_number()) {
          throw SchemaError(n.at("gain"), "expected numbers");
        }
        m.gain(r, c) = g[r][c].get<double>();
      }
    }
  }
  m.kappa = n.number("kappa", 0.0);
  m.dz = n.number("dz", 0.0);
  if (n.has("target_steady_error")) {
    if (target_error == nullptr) {
      throw SchemaError(n.at("target_steady_error"),
                        "only supported for the frontal plane");
    }
    if (m.mode != MismatchMode::kImpactLoss) {
      throw SchemaError(n.at("target_steady_error"),
                        "requires mode impact_loss");
    }
    *target_error = n.positive("target_steady_error", 0.1);
  }
  try {
    m.validate(lip);
  } catch (const ParameterError& e) {
    throw SchemaError(n.at("mode"), e.what());
  }
  return m;
}

void set_path(Json& doc, const std::string& dotted, Json value) {
  if (dotted.empty()) throw SchemaError("", "--set needs a key");
  Json* cur = &doc;
  std::string path;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string seg = dotted.substr(start, dot - start);
    if (seg.empty()) throw SchemaError(path, "empty key in '" + dotted + "'");
    path += "/" + seg;
    const bool last = dot == std::string::npos;
    if (cur->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(seg, &used);
        if (used != seg.size()) throw std::invalid_argument(seg);
      } catch (const std::exception&) {
        throw SchemaError(path, "expected an array index");
      }
      if (idx >= cur->size()) throw SchemaError(path, "index out of range");
      cur = &(*cur)[idx];
    } else {
      if (cur->is_null()) *cur = Json::object();
      if (!cur->is_object()) throw SchemaError(path, "not an object");
      cur = &(*cur)[seg];
    }
    if (last) {
      *cur = std::move(value);
      return;
    }
    start = dot + 1;
  }
}

void apply_overrides(Json& doc, const Overrides& ov) {
  for (const auto& a : ov.set) {
    const std::size_t eq = a.find('=');
    if (eq == std::string::npos) {
      throw SchemaError("", "--set expects key=value, got '" + a + "'");
    }
    const std::string text = a.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    set_path(doc, a.substr(0, eq), std::move(value));
  }
  if (ov.seed) doc["seed"] = *ov.seed;
  if (ov.output_dir) doc["output"] = *ov.output_dir;
  if (ov.no_adapt) doc["adaptation"]["enabled"] = false;
}

ScenarioConfig parse_document(const Json& doc, const std::string& base_dir) {
  const Node root(doc, "");
  root.allow({"schema", "mode", "seed", "lip", "gait", "orbit", "schedule",
              "mismatch", "adaptation", "noise", "ik", "walk", "output",
              "assertions", "description"});
  if (!root.has("schema")) throw SchemaError("/schema", "missing");
  if (root.raw("schema") != 1) throw SchemaError("/schema", "must be 1");

  ScenarioConfig c;
  if (root.has("mode")) {
    const std::string m = root.string("mode", "");
    if (m == "orbit") {
      c.mode = Mode::kOrbit;
    } else if (m == "s2s") {
      c.mode = Mode::kS2s;
    } else if (m == "walk") {
      c.mode = Mode::kWalk;
    } else {
      throw SchemaError("/mode", "expected orbit, s2s or walk");
    }
  }
  c.seed = root.u64("seed", 0);
  c.output_dir = root.string("output", c.output_dir);

  double g = kDefaultGravity, z0 = kDefaultHeight, T = kDefaultStepDuration;
  if (root.has("lip")) {
    const Node n = root.object("lip");
    n.allow({"g", "z0", "T"});
    g = n.positive("g", g);
    z0 = n.positive("z0", z0);
    T = n.positive("T", T);
  }
  c.lip = make_params(g, z0, T);

  double uL = -kDefaultLateralStep, apex = kDefaultApex,
         limit = kDefaultStepLimit;
  if (root.has("gait")) {
    const Node n = root.object("gait");
    n.allow({"uL_star", "apex", "step_limit"});
    uL = n.number("uL_star", uL);
    apex = n.positive("apex", apex);
    limit = n.positive("step_limit", limit);
  }

  if (root.has("orbit")) {
    const Node n = root.object("orbit");
    n.allow({"velocities", "v_y", "samples"});
    if (n.has("velocities")) {
      const Json& v = n.raw("velocities");
      if (!v.is_array() || v.empty()) {
        throw SchemaError(n.at("velocities"), "expected a non-empty array");
      }
      c.orbit_velocities.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
          throw SchemaError(n.at("velocities") + "/" + std::to_string(i),
                            "expected a number");
        }
        c.orbit_velocities.push_back(v[i].get<double>());
      }
    }
    c.orbit_v_y = n.number("v_y", 0.0);
    c.orbit_samples = n.integer("samples", c.orbit_samples, 2);
  }

  S2sConfig& s = c.s2s;
  s.g = g;
  s.z0 = z0;
  s.T = T;
  s.uL_star = uL;
  s.step_limit = limit;
  if (root.has("schedule")) {
    const Json& sch = root.raw("schedule");
    if (!sch.is_array() || sch.empty()) {
      throw SchemaError("/schedule", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < sch.size(); ++i) {
      const Node n(sch[i], "/schedule/" + std::to_string(i));
      n.allow({"v_x", "v_y", "steps"});
      s.schedule.push_back(
          {n.number("v_x", 0.0), n.number("v_y", 0.0), n.integer("steps", 1, 1)});
      if (!n.has("steps")) throw SchemaError(n.at("steps"), "missing");
    }
  } else {
    s.schedule.push_back({0.1, 0.0, 200});
  }
  if (root.has("mismatch")) {
    const Node n = root.object("mismatch");
    n.allow({"sagittal", "frontal"});
    if (n.has("sagittal")) {
      s.sagittal_mismatch =
          parse_mismatch(n.object("sagittal"), c.lip, nullptr);
    }
    if (n.has("frontal")) {
      s.frontal_mismatch =
          parse_mismatch(n.object("frontal"), c.lip, &c.frontal_target_error);
    }
  }
  if (root.has("adaptation")) {
    const Node n = root.object("adaptation");
    n.allow({"enabled", "hidden", "gamma", "compare_baseline", "error_window"});
    s.adaptation.enabled = n.boolean("enabled", false);
    s.adaptation.hidden = n.integer("hidden", kDefaultHiddenWidth, 1);
    s.adaptation.gamma = n.positive("gamma", kDefaultLearningRate);
    c.compare_baseline = n.boolean("compare_baseline", true);
    c.error_window = n.integer("error_window", 100, 1);
  }
  s.adaptation.seed = c.seed;
  s.noise_seed = c.seed ^ 0x9e3779b97f4a7c15ULL;
  if (root.has("noise")) {
    const Node n = root.object("noise");
    n.allow({"std", "initial_sagittal_error", "initial_frontal_error"});
    s.noise_std = n.number("std", 0.0);
    if (s.noise_std < 0.0) throw SchemaError(n.at("std"), "must be >= 0");
    s.initial_sagittal_error = vec2(n, "initial_sagittal_error");
    s.initial_frontal_error = vec2(n, "initial_frontal_error");
  }

  WalkConfig& w = c.walk;
  w.g = g;
  w.z0 = z0;
  w.T = T;
  w.uL_star = uL;
  w.apex = apex;
  w.step_limit = limit;
  if (root.has("ik")) {
    const Node n = root.object("ik");
    n.allow({"kp", "kw", "dt", "com_weight", "swing_weight"});
    w.gains.kp.setConstant(n.number("kp", kDefaultKp));
    w.gains.kw.setConstant(n.number("kw", kDefaultKw));
    if ((w.gains.kp.array() < 0.0).any() || (w.gains.kw.array() < 0.0).any()) {
      throw SchemaError(n.at("kp"), "gains must be >= 0");
    }
    w.dt = n.positive("dt", kDefaultTick);
    w.com_weight = n.positive("com_weight", 1.0);
    w.swing_weight = n.positive("swing_weight", 1.0);
  }
  std::string model = STEPLAB_DEFAULT_MODEL;
  bool model_given = false;
  if (root.has("walk")) {
    const Node n = root.object("walk");
    n.allow({"model", "steps", "v_x", "v_y", "knee_bend", "record_ticks"});
    model_given = n.has("model");
    model = n.string("model", model);
    w.steps = n.integer("steps", w.steps, 1);
    w.v_x = n.number("v_x", w.v_x);
    w.v_y = n.number("v_y", w.v_y);
    w.knee_bend = n.number("knee_bend", w.knee_bend);
    w.record_ticks = n.boolean("record_ticks", true);
  }
  const fs::path mp(model);
  c.model_path = (mp.is_absolute() ? mp : fs::path(base_dir) / mp)
                     .lexically_normal()
                     .string();
  if ((model_given || c.mode == Mode::kWalk) && !fs::exists(c.model_path)) {
    throw SchemaError("/walk/model", "file not found: " + c.model_path);
  }

  if (root.has("assertions")) {
    const Node n = root.object("assertions");
    n.allow({"segment_tolerance", "transient_steps", "min_error_reduction",
             "period2_max", "com_height_band", "touchdown_max"});
    Assertions& a = c.assertions;
    a.segment_tolerance = n.optional_number("segment_tolerance");
    a.transient_steps = n.integer("transient_steps", 3, 0);
    a.min_error_reduction = n.optional_number("min_error_reduction");
    a.period2_max = n.optional_number("period2_max");
    a.com_height_band = n.optional_number("com_height_band");
    a.touchdown_max = n.optional_number("touchdown_max");
  }
  return c;
}

void write_text(const fs::path& path, const std::string& text,
                CommandResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  result.files.push_back(path.string());
}

template <typename Fn>
void write_csv(const fs::path& path, CommandResult& result, Fn&& fn) {
  std::ostringstream os;
  fn(os);
  write_text(path, os.str(), result);
}

std::string fmt(double v) { return format_double(v); }

void check(CommandResult& r, std::ostringstream& s, const std::string& name,
           bool ok, double value, const std::string& rule) {
  s << (ok ? "PASS " : "FAIL ") << name << " value=" << fmt(value) << " "
    << rule << "\n";
  r.passed = r.passed && ok;
}

CommandResult cmd_orbit(const ScenarioConfig& c) {
  CommandResult r;
  const StepMatrices sm = step_matrices(c.lip);
  const DeadbeatGain gain = deadbeat_gain(sm);
  std::vector<OrbitRow> rows;
  std::vector<TracePoint> trace;
  const int n = c.orbit_samples;
  for (double v : c.orbit_velocities) {
    OrbitRow row;
    row.v_x_d = v;
    row.v_y_d = c.orbit_v_y;
    row.lambda = c.lip.lambda;
    row.lines = orbital_lines(c.lip, c.orbit_v_y);
    row.p1 = p1_target(c.lip, v);
    row.p2 = p2_targets(c.lip, c.orbit_v_y, c.s2s.uL_star);
    row.K = gain.K;
    rows.push_back(row);

    const LipState s0{row.p1.x_star.p - row.p1.u_star, row.p1.x_star.v};
    for (int i = 0; i < n; ++i) {
      const double t = c.lip.T * i / (n - 1);
      trace.push_back({v, "sagittal", 'L', t, flow(c.lip, s0, t)});
    }
    // Left stance starts from the right-stance impact, then the reverse.
    const LipState fl{row.p2.yR_star.p - row.p2.uR_star, row.p2.yR_star.v};
    const LipState fr{row.p2.yL_star.p - row.p2.uL_star, row.p2.yL_star.v};
    for (int i = 0; i < n; ++i) {
      const double t = c.lip.T * i / (n - 1);
      trace.push_back({v, "frontal", 'L', t, flow(c.lip, fl, t)});
    }
    for (int i = 0; i < n; ++i) {
      const double t = c.lip.T * i / (n - 1);
      trace.push_back({v, "frontal", 'R', c.lip.T + t, flow(c.lip, fr, t)});
    }
  }
  const fs::path out(c.output_dir);
  fs::create_directories(out);
  write_csv(out / "orbit.csv", r,
            [&](std::ostream& os) { write_orbit_csv(os, rows); });
  write_csv(out / "orbit_traces.csv", r,
            [&](std::ostream& os) { write_orbit_traces_csv(os, trace); });

  std::ostringstream s;
  s << "mode orbit\n";
  s << "lambda " << fmt(c.lip.lambda) << "\n";
  s << "K " << fmt(gain.K(0)) << " " << fmt(gain.K(1)) << "\n";
  for (const auto& row : rows) {
    s << "v_x_d=" << fmt(row.v_x_d) << " sigma1=" << fmt(row.lines.sigma1)
      << " sigma2=" << fmt(row.lines.sigma2) << " d2=" << fmt(row.lines.d2)
      << " u_star=" << fmt(row.p1.u_star) << "\n";
  }
  r.summary = s.str();
  write_text(out / "summary.txt", r.summary, r);
  return r;
}

CommandResult cmd_s2s(const ScenarioConfig& c) {
  CommandResult r;
  S2sConfig cfg = c.s2s;
  std::ostringstream s;
  s << "mode s2s\n";
  if (c.frontal_target_error) {
    cfg.frontal_mismatch.kappa =
        calibrate_impact_loss(cfg, *c.frontal_target_error, 0.9, c.error_window);
    s << "frontal impact-loss kappa " << fmt(cfg.frontal_mismatch.kappa)
      << " (calibrated to deadbeat-only error " << fmt(*c.frontal_target_error)
      << ")\n";
  }
  std::vector<S2sConfig> runs = {cfg};
  const bool baseline = cfg.adaptation.enabled && c.compare_baseline;
  if (baseline) {
    runs.push_back(cfg);
    runs.back().adaptation.enabled = false;
  }
  const std::vector<EpisodeLog> logs = run_s2s_sweep(runs);

  const fs::path out(c.output_dir);
  fs::create_directories(out);
  write_csv(out / "s2s_steps.csv", r,
            [&](std::ostream& os) { write_s2s_steps_csv(os, logs[0]); });
  if (baseline) {
    write_csv(out / "s2s_baseline_steps.csv", r,
              [&](std::ostream& os) { write_s2s_steps_csv(os, logs[1]); });
  }

  s << "steps " << logs[0].steps.size() << "\n";
  s << "adaptation " << (cfg.adaptation.enabled ? "on" : "off") << "\n";
  const auto segs = segment_velocities(cfg, logs[0], c.assertions.transient_steps);
  double worst_seg = 0.0;
  for (const auto& g : segs) {
    s << "segment v_x_d=" << fmt(g.v_x_d) << " mean=" << fmt(g.mean_velocity)
      << " rel_error=" << fmt(g.rel_error) << " samples=" << g.samples << "\n";
    if (g.samples > 0) worst_seg = std::max(worst_seg, g.rel_error);
  }
  const double e_main = tail_mean_error(logs[0], c.error_window);
  s << "tail_mean_error " << fmt(e_main) << " (last " << c.error_window
    << " steps, frontal (p, v) Euclidean)\n";
  double reduction = 0.0;
  if (baseline) {
    const double e_base = tail_mean_error(logs[1], c.error_window);
    reduction = e_base > 0.0 ? 1.0 - e_main / e_base : 0.0;
    s << "baseline_tail_mean_error " << fmt(e_base) << "\n";
    s << "error_reduction " << fmt(reduction) << "\n";
  }
  s << "events " << logs[0].events.size() << "\n";
  for (const auto& e : logs[0].events) s << "  " << e << "\n";

  const Assertions& a = c.assertions;
  if (a.segment_tolerance) {
    check(r, s, "segment_velocity", worst_seg <= *a.segment_tolerance,
          worst_seg, "<= " + fmt(*a.segment_tolerance));
  }
  if (a.min_error_reduction) {
    check(r, s, "error_reduction", baseline && reduction >= *a.min_error_reduction,
          reduction, ">= " + fmt(*a.min_error_reduction));
  }
  r.summary = s.str();
  write_text(out / "summary.txt", r.summary, r);
  return r;
}

CommandResult cmd_walk(const ScenarioConfig& c) {
  CommandResult r;
  const RobotModel model = load_model_file(c.model_path);
  const EpisodeLog log = run_kinematic_walk(model, c.walk);
  const WalkSummary w = summarize_walk(c.walk, log);

  const fs::path out(c.output_dir);
  fs::create_directories(out);
  write_csv(out / "walk_steps.csv", r,
            [&](std::ostream& os) { write_walk_steps_csv(os, log); });
  if (c.walk.record_ticks) {
    write_csv(out / "walk_ticks.csv", r,
              [&](std::ostream& os) { write_walk_ticks_csv(os, log); });
  }

  std::ostringstream s;
  s << "mode walk\n";
  s << "model " << model.name << " (nq " << model.nq() << ", nv " << model.nv()
    << ", passive " << model.passive_count() << ")\n";
  s << "steps " << log.steps.size() << " ticks " << log.ticks.size() << "\n";
  s << "period2 " << fmt(w.period2) << " (max |q_k - q_k+2|_inf, k >= "
    << w.period2_from << ")\n";
  s << "com_height_max_dev " << fmt(w.com_height_max_dev) << "\n";
  s << "touchdown_max " << fmt(w.touchdown_max) << "\n";
  s << "swing_tracking_max " << fmt(w.swing_tracking_max) << "\n";
  s << "kkt_max " << fmt(w.kkt_max) << "\n";
  s << "events " << log.events.size() << "\n";
  for (const auto& e : log.events) s << "  " << e << "\n";

  const Assertions& a = c.assertions;
  if (a.period2_max) {
    check(r, s, "period2", w.period2 <= *a.period2_max, w.period2,
          "<= " + fmt(*a.period2_max));
  }
  if (a.com_height_band) {
    check(r, s, "com_height", w.com_height_max_dev <= *a.com_height_band,
          w.com_height_max_dev, "<= " + fmt(*a.com_height_band));
  }
  if (a.touchdown_max) {
    check(r, s, "touchdown", w.touchdown_max <= *a.touchdown_max,
          w.touchdown_max, "<= " + fmt(*a.touchdown_max));
  }
  r.summary = s.str();
  write_text(out / "summary.txt", r.summary, r);

  std::ostringstream lat;
  lat << "solve_tick latency p50 " << w.latency_p50 * 1e6 << " us, p99 "
      << w.latency_p99 * 1e6 << " us";
  r.console.push_back(lat.str());
  return r;
}

}  // namespace

std::string apply_override(const std::string& json_text,
                           const std::string& assignment) {
  Json doc = parse_json(json_text);
  Overrides ov;
  ov.set.push_back(assignment);
  apply_overrides(doc, ov);
  return doc.dump();
}

ScenarioConfig parse_scenario(const std::string& json_text,
                              const std::string& base_dir,
                              const Overrides& overrides) {
  Json doc = parse_json(json_text);
  if (!doc.is_object()) throw SchemaError("", "expected an object");
  apply_overrides(doc, overrides);
  try {
    return parse_document(doc, base_dir);
  } catch (const ParameterError& e) {
    throw SchemaError("", e.what());
  }
}

ScenarioConfig load_scenario(const std::string& path,
                             const Overrides& overrides) {
  const std::string dir = fs::path(path).parent_path().string();
  return parse_scenario(read_file(path), dir.empty() ? "." : dir, overrides);
}

CommandResult run_command(Mode mode, const ScenarioConfig& config) {
  if (config.mode && *config.mode != mode) {
    throw SchemaError("/mode", std::string("scenario is for mode '") +
                                   mode_name(*config.mode) + "', not '" +
                                   mode_name(mode) + "'");
  }
  switch (mode) {
    case Mode::kOrbit:
      return cmd_orbit(config);
    case Mode::kS2s:
      return cmd_s2s(config);
    case Mode::kWalk:
      return cmd_walk(config);
  }
  return {};
}

std::string validate_document(const std::string& path,
                              const Overrides& overrides) {
  const std::string text = read_file(path);
  const Json doc = parse_json(text);
  if (doc.is_object() && doc.contains("joints")) {
    const RobotModel m = load_model(text);
    return "model '" + m.name + "' ok: " + std::to_string(m.joints.size()) +
           " joints, nq " + std::to_string(m.nq()) + ", nv " +
           std::to_string(m.nv()) + ", " + std::to_string(m.passive_count()) +
           " passive";
  }
  const ScenarioConfig c = load_scenario(path, overrides);
  std::string mode = c.mode ? mode_name(*c.mode) : "any";
  if (c.mode == Mode::kWalk) load_model_file(c.model_path);
  return "scenario ok (mode " + mode + ")";
}

}  // namespace steplab
