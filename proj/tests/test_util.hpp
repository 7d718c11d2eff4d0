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

#ifndef SCANMATCH_TESTS_TEST_UTIL_HPP_
#define SCANMATCH_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include <Eigen/Core>

#include "scanmatch/bench.hpp"
#include "scanmatch/pose.hpp"
#include "scanmatch/rng.hpp"
#include "scanmatch/sim.hpp"

namespace scanmatch::testing {

// Central finite differences of a scalar function of three parameters; the
// independent oracle the jet derivatives are checked against.
inline Eigen::Vector3d FiniteDifferenceGradient(
    const std::function<double(const Eigen::Vector3d&)>& f, const Eigen::Vector3d& at,
    double step = 1e-6) {
  Eigen::Vector3d gradient;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d forward = at;
    Eigen::Vector3d backward = at;
    forward[k] += step;
    backward[k] -= step;
    gradient[k] = (f(forward) - f(backward)) / (2.0 * step);
  }
  return gradient;
}

inline bool GradientsClose(const Eigen::Vector3d& analytic, const Eigen::Vector3d& numeric,
                           double absolute, double relative) {
  for (int k = 0; k < 3; ++k) {
    const double error = std::abs(analytic[k] - numeric[k]);
    const double scale = std::max(std::abs(analytic[k]), std::abs(numeric[k]));
    if (error > absolute && error > relative * scale) {
      return false;
    }
  }
  return true;
}

// A benchmark-style scan-matching instance used across solver tests.
inline BenchTrial MakeTrial(std::uint64_t seed, int index) {
  BenchConfig config;
  return GenerateTrial(seed, index, config);
}

// The rectangular-room scenario shared between the simulator tests and the
// acceptance suite: a 4 x 3 m room with a loop path and a full-circle lidar.
inline constexpr const char* kRoomScenarioText = R"(# rectangular room, zero noise
SEGMENT -2 -1.5  2 -1.5
SEGMENT  2 -1.5  2  1.5
SEGMENT  2  1.5 -2  1.5
SEGMENT -2  1.5 -2 -1.5
WAYPOINT -1.0 -0.5 0.0
WAYPOINT  1.0 -0.5 0.0
WAYPOINT  1.0  0.5 1.5707963
WAYPOINT -1.0  0.5 3.1415926
LIDAR 120 6.283185307179586 8.0 0.0
SCANS_PER_LEG 8
SEED 77
RESOLUTION 0.05
)";

inline Scenario MakeRoomScenario() {
  std::istringstream stream(kRoomScenarioText);
  return ParseScenario(stream);
}

// Rasterizes the environment walls into grid cells; the independent
// reference a built map is compared against.
inline std::set<std::pair<int, int>> RasterizedWallCells(const Scenario& scenario,
                                                         const ProbabilityGrid& grid) {
  std::set<std::pair<int, int>> cells;
  const double step = grid.resolution() / 4.0;
  for (const Segment& segment : scenario.environment.segments) {
    const double length = (segment.b - segment.a).norm();
    const int samples = std::max(1, static_cast<int>(std::ceil(length / step)));
    for (int i = 0; i <= samples; ++i) {
      const Eigen::Vector2d p =
          segment.a + (static_cast<double>(i) / samples) * (segment.b - segment.a);
      const Eigen::Vector2i cell = grid.CellIndex(p);
      if (grid.Contains(cell.x(), cell.y())) {
        cells.insert({cell.x(), cell.y()});
      }
    }
  }
  return cells;
}

// Fraction of wall cells with a high-probability map cell within one cell.
inline double WallCoverage(const Scenario& scenario, const ProbabilityGrid& map) {
  const std::set<std::pair<int, int>> wall_cells = RasterizedWallCells(scenario, map);
  int covered = 0;
  for (const auto& [ix, iy] : wall_cells) {
    bool near_occupied = false;
    for (int dy = -1; dy <= 1 && !near_occupied; ++dy) {
      for (int dx = -1; dx <= 1 && !near_occupied; ++dx) {
        if (map.Contains(ix + dx, iy + dy) && map.At(ix + dx, iy + dy) > 0.6) {
          near_occupied = true;
        }
      }
    }
    if (near_occupied) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(wall_cells.size());
}

}  // namespace scanmatch::testing

#endif  // SCANMATCH_TESTS_TEST_UTIL_HPP_
