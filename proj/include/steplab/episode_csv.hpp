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

// CSV serialisation of episode logs and orbit reports.
//
// Dialect: comma separated, '.' decimal point, one header row, LF line
// endings. Doubles use the shortest representation that round-trips.
// Wall-clock timings are never written, so files are reproducible.

#ifndef STEPLAB_EPISODE_CSV_HPP_
#define STEPLAB_EPISODE_CSV_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "steplab/simlab.hpp"

namespace steplab {

std::string format_double(double value);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& names);
  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(int v);
  CsvWriter& operator<<(char v);
  CsvWriter& operator<<(const std::string& v);
  void end_row();

 private:
  void sep();
  std::ostream& os_;
  bool first_ = true;
};

// One row per step. Columns documented in the README.
void write_s2s_steps_csv(std::ostream& os, const EpisodeLog& log);
void write_walk_steps_csv(std::ostream& os, const EpisodeLog& log);
// One row per tick.
void write_walk_ticks_csv(std::ostream& os, const EpisodeLog& log);

struct OrbitRow {
  double v_x_d = 0.0;
  double v_y_d = 0.0;
  double lambda = 0.0;
  OrbitalLines lines;
  P1Target p1;
  P2Target p2;
  Eigen::RowVector2d K = Eigen::RowVector2d::Zero();
};

struct TracePoint {
  double v_x_d = 0.0;
  std::string plane;  // "sagittal" or "frontal"
  char stance = 'L';
  double t = 0.0;
  LipState x;
};

void write_orbit_csv(std::ostream& os, const std::vector<OrbitRow>& rows);
void write_orbit_traces_csv(std::ostream& os,
                            const std::vector<TracePoint>& points);

}  // namespace steplab

#endif  // STEPLAB_EPISODE_CSV_HPP_
