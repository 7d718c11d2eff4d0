// Copyright 2026 The Scanmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCANMATCH_SIM_HPP_
#define SCANMATCH_SIM_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "scanmatch/pose.hpp"
#include "scanmatch/probability_grid.hpp"
#include "scanmatch/scan_matcher.hpp"
#include "scanmatch/solver_common.hpp"

namespace scanmatch {

// Mapping simulator: a segment world, a raycast lidar, a scripted path, and
// an incremental match-then-insert loop per backend.

struct Segment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
};

struct Environment {
  std::vector<Segment> segments;
};

struct LidarConfig {
  int num_beams = 120;
  double fov = 2.0 * 3.14159265358979323846;  // radians
  double max_range = 10.0;                    // meters
  double noise_sigma = 0.0;                   // meters
};

struct Scenario {
  Environment environment;
  std::vector<Pose2D> waypoints;
  int scans_per_leg = 10;
  LidarConfig lidar;
  std::uint64_t seed = 0;
  double resolution = 0.05;

  void Validate() const;
};

// Distance from the pose origin to the nearest segment along each beam
// direction (body-frame angles, so the world direction is theta + angle),
// capped at max_range. Noise is the caller's business.
std::vector<double> Raycast(const Environment& environment, const Pose2D& pose,
                            const std::vector<double>& angles, double max_range);

// Line-oriented scenario text: one directive per line among
//   SEGMENT x1 y1 x2 y2
//   WAYPOINT x y theta
//   LIDAR beams fov max_range noise_sigma
//   SCANS_PER_LEG n
//   SEED n
//   RESOLUTION r
// `#` starts a comment; blank lines are skipped. Unknown directives or
// malformed arguments raise a parse error naming the line.
Scenario ParseScenario(std::istream& in);
Scenario LoadScenario(const std::string& path);

// The empty map the mapping run starts from: the environment bounding box
// plus a one-meter margin at the scenario resolution, all cells 0.5.
ProbabilityGrid MakeScenarioGrid(const Scenario& scenario);

struct SimOptions {
  Backend backend = Backend::kResidual;
  double odometry_sigma_xy = 0.02;     // meters, per step
  double odometry_sigma_theta = 0.01;  // radians, per step
  MatchWeights weights = SimDefaultWeights();
  SolverOptions solver;
  OddsUpdate odds;
  // When set, stops processing scans once the summed match wall time exceeds
  // this budget; the map keeps whatever was built by then.
  std::optional<double> max_total_match_ms;

  static MatchWeights SimDefaultWeights() {
    // Mapping trusts odometry more than the benchmark does: the prediction
    // is one noisy step away, while the map ridge is quantized to cells.
    MatchWeights weights;
    weights.occupied_space = 10.0;
    weights.translation = 30.0;
    weights.rotation = 120.0;
    return weights;
  }
};

struct StepRecord {
  int step = 0;
  Pose2D true_pose;
  Pose2D estimated_pose;
  int iterations = 0;
  std::int64_t time_us = 0;
};

struct SimResult {
  ProbabilityGrid map;
  std::vector<StepRecord> trajectory;
  std::vector<SolverReport> reports;  // one per matched scan (steps >= 1)
};

// Walks the waypoint path with `scans_per_leg` poses per leg. At every step:
// simulate a scan at the true pose, predict from the previous estimate and
// the noisy odometry increment, match against the map so far, then insert
// the scan at the matched pose. The first scan seeds the map at the known
// start pose. Writes `<prefix>_map.pgm` and `<prefix>_trajectory.csv` when
// `out_prefix` is nonempty.
SimResult RunMapping(const Scenario& scenario, const SimOptions& options,
                     const std::string& out_prefix = "");

// ASCII PGM, header `P2\n<width> <height>\n255\n`, gray = round(255*(1-p))
// so occupied cells come out dark, rows written north-up.
void WritePgm(const ProbabilityGrid& grid, std::ostream& out);
void WritePgmFile(const ProbabilityGrid& grid, const std::string& path);

inline constexpr const char* kTrajectoryCsvHeader =
    "step,true_x,true_y,true_theta,est_x,est_y,est_theta,iterations,time_us";

}  // namespace scanmatch

#endif  // SCANMATCH_SIM_HPP_
