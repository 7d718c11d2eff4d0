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

#include "scanmatch/sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "scanmatch/rng.hpp"

namespace scanmatch {

namespace {

double Cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

std::string FormatDouble(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

}  // namespace

void Scenario::Validate() const {
  if (environment.segments.empty()) {
    throw std::invalid_argument("Scenario: needs at least one segment");
  }
  if (waypoints.size() < 2) {
    throw std::invalid_argument("Scenario: needs at least two waypoints");
  }
  if (scans_per_leg < 1) {
    throw std::invalid_argument("Scenario: scans_per_leg must be >= 1");
  }
  if (lidar.num_beams < 2) {
    throw std::invalid_argument("Scenario: lidar needs at least two beams");
  }
  if (!(lidar.max_range > 0.0) || !(lidar.fov > 0.0)) {
    throw std::invalid_argument("Scenario: lidar fov and max_range must be positive");
  }
  if (lidar.noise_sigma < 0.0) {
    throw std::invalid_argument("Scenario: lidar noise sigma must be nonnegative");
  }
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("Scenario: resolution must be positive");
  }
  for (const Segment& segment : environment.segments) {
    if (!segment.a.allFinite() || !segment.b.allFinite()) {
      throw std::invalid_argument("Scenario: segment coordinates must be finite");
    }
  }
}

std::vector<double> Raycast(const Environment& environment, const Pose2D& pose,
                            const std::vector<double>& angles, double max_range) {
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("Raycast: max_range must be positive");
  }
  const Eigen::Vector2d origin = pose.translation();
  std::vector<double> ranges;
  ranges.reserve(angles.size());
  for (double angle : angles) {
    const double world_angle = pose.theta + angle;
    const Eigen::Vector2d direction(std::cos(world_angle), std::sin(world_angle));
    double range = max_range;
    for (const Segment& segment : environment.segments) {
      const Eigen::Vector2d edge = segment.b - segment.a;
      const double denom = Cross2(direction, edge);
      if (std::abs(denom) < 1e-15) continue;  // parallel
      const Eigen::Vector2d to_start = segment.a - origin;
      const double t = Cross2(to_start, edge) / denom;
      const double s = Cross2(to_start, direction) / denom;
      if (t >= 0.0 && s >= 0.0 && s <= 1.0) {
        range = std::min(range, t);
      }
    }
    ranges.push_back(range);
  }
  return ranges;
}

Scenario ParseScenario(std::istream& in) {
  Scenario scenario;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const size_t comment = line.find('#');
    if (comment != std::string::npos) {
      line.erase(comment);
    }
    std::istringstream tokens(line);
    std::string directive;
    if (!(tokens >> directive)) continue;  // blank line

    const auto fail = [line_number](const std::string& message) {
      throw std::runtime_error("scenario parse error at line " +
                               std::to_string(line_number) + ": " + message);
    };
    const auto expect_end = [&tokens, &fail]() {
      std::string rest;
      if (tokens >> rest) {
        fail("unexpected trailing token '" + rest + "'");
      }
    };

    if (directive == "SEGMENT") {
      Segment segment;
      if (!(tokens >> segment.a.x() >> segment.a.y() >> segment.b.x() >> segment.b.y())) {
        fail("SEGMENT expects x1 y1 x2 y2");
      }
      expect_end();
      scenario.environment.segments.push_back(segment);
    } else if (directive == "WAYPOINT") {
      double x, y, theta;
      if (!(tokens >> x >> y >> theta)) {
        fail("WAYPOINT expects x y theta");
      }
      expect_end();
      scenario.waypoints.emplace_back(x, y, theta);
    } else if (directive == "LIDAR") {
      LidarConfig lidar;
      if (!(tokens >> lidar.num_beams >> lidar.fov >> lidar.max_range >> lidar.noise_sigma)) {
        fail("LIDAR expects beams fov max_range noise_sigma");
      }
      expect_end();
      scenario.lidar = lidar;
    } else if (directive == "SCANS_PER_LEG") {
      if (!(tokens >> scenario.scans_per_leg)) {
        fail("SCANS_PER_LEG expects an integer");
      }
      expect_end();
    } else if (directive == "SEED") {
      if (!(tokens >> scenario.seed)) {
        fail("SEED expects an integer");
      }
      expect_end();
    } else if (directive == "RESOLUTION") {
      if (!(tokens >> scenario.resolution)) {
        fail("RESOLUTION expects a number");
      }
      expect_end();
    } else {
      fail("unknown directive '" + directive + "'");
    }
  }
  scenario.Validate();
  return scenario;
}

Scenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file: " + path);
  }
  return ParseScenario(in);
}

ProbabilityGrid MakeScenarioGrid(const Scenario& scenario) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  for (const Segment& segment : scenario.environment.segments) {
    min_x = std::min({min_x, segment.a.x(), segment.b.x()});
    min_y = std::min({min_y, segment.a.y(), segment.b.y()});
    max_x = std::max({max_x, segment.a.x(), segment.b.x()});
    max_y = std::max({max_y, segment.a.y(), segment.b.y()});
  }
  constexpr double kMarginMeters = 1.0;
  const double resolution = scenario.resolution;
  const Eigen::Vector2d origin(min_x - kMarginMeters, min_y - kMarginMeters);
  const int width =
      static_cast<int>(std::ceil((max_x + kMarginMeters - origin.x()) / resolution)) + 1;
  const int height =
      static_cast<int>(std::ceil((max_y + kMarginMeters - origin.y()) / resolution)) + 1;
  return ProbabilityGrid(width, height, resolution, origin, 0.5);
}

namespace {

std::vector<Pose2D> PathPoses(const Scenario& scenario) {
  std::vector<Pose2D> poses;
  poses.push_back(scenario.waypoints.front());
  for (size_t leg = 0; leg + 1 < scenario.waypoints.size(); ++leg) {
    const Pose2D& from = scenario.waypoints[leg];
    const Pose2D& to = scenario.waypoints[leg + 1];
    const double dtheta = NormalizeAngle(to.theta - from.theta);
    for (int j = 1; j <= scenario.scans_per_leg; ++j) {
      const double f = static_cast<double>(j) / scenario.scans_per_leg;
      poses.emplace_back(from.x + f * (to.x - from.x), from.y + f * (to.y - from.y),
                         from.theta + f * dtheta);
    }
  }
  return poses;
}

std::vector<double> BeamAngles(const LidarConfig& lidar) {
  // Evenly spaced over [-fov/2, fov/2); a full-circle fov has no duplicate
  // beam at +pi.
  std::vector<double> angles(lidar.num_beams);
  const double step = lidar.fov / lidar.num_beams;
  for (int i = 0; i < lidar.num_beams; ++i) {
    angles[i] = -0.5 * lidar.fov + i * step;
  }
  return angles;
}

}  // namespace

SimResult RunMapping(const Scenario& scenario, const SimOptions& options,
                     const std::string& out_prefix) {
  scenario.Validate();
  options.solver.Validate();

  const std::vector<Pose2D> path = PathPoses(scenario);
  const std::vector<double> angles = BeamAngles(scenario.lidar);
  const double max_range = scenario.lidar.max_range;
  Rng rng(scenario.seed);

  SimResult result{MakeScenarioGrid(scenario), {}, {}};
  ProbabilityGrid& map = result.map;

  Pose2D previous_truth;
  Pose2D previous_estimate;
  double total_match_ms = 0.0;

  for (size_t step = 0; step < path.size(); ++step) {
    const Pose2D& truth = path[step];

    std::vector<double> ranges = Raycast(scenario.environment, truth, angles, max_range);
    PointCloud2D insert_cloud;
    PointCloud2D match_cloud;
    insert_cloud.reserve(ranges.size());
    for (size_t i = 0; i < ranges.size(); ++i) {
      double range = ranges[i];
      const bool is_hit = range < max_range * (1.0 - 1e-12);
      if (is_hit) {
        range = std::clamp(range + rng.Gaussian(scenario.lidar.noise_sigma), 1e-6, max_range);
      }
      const Eigen::Vector2d point(range * std::cos(angles[i]), range * std::sin(angles[i]));
      insert_cloud.push_back(point);
      if (range < max_range * (1.0 - 1e-12)) {
        match_cloud.push_back(point);
      }
    }

    StepRecord record;
    record.step = static_cast<int>(step);
    record.true_pose = truth;

    if (step == 0) {
      // The first scan defines the map; the start pose is known.
      record.estimated_pose = truth;
      InsertScan(&map, truth, insert_cloud, max_range, options.odds);
    } else {
      const Pose2D true_increment = Between(previous_truth, truth);
      const Pose2D noisy_increment(
          true_increment.x + rng.Gaussian(options.odometry_sigma_xy),
          true_increment.y + rng.Gaussian(options.odometry_sigma_xy),
          true_increment.theta + rng.Gaussian(options.odometry_sigma_theta));
      const Pose2D predicted = Compose(previous_estimate, noisy_increment);

      if (options.max_total_match_ms && total_match_ms > *options.max_total_match_ms) {
        break;  // compute budget exhausted; keep the map as built
      }

      if (match_cloud.empty()) {
        record.estimated_pose = predicted;
      } else {
        MatchRequest request;
        request.target_translation = predicted.translation();
        request.initial_pose = predicted;
        request.cloud = &match_cloud;
        request.grid = &map;
        request.backend = options.backend;
        request.weights = options.weights;
        request.options = options.solver;
        const MatchResult match = Match(request);
        record.estimated_pose = match.pose_estimate;
        record.iterations = match.report.iterations;
        record.time_us = match.report.wall_time_us;
        result.reports.push_back(match.report);
        total_match_ms += static_cast<double>(match.report.wall_time_us) / 1000.0;
      }
      InsertScan(&map, record.estimated_pose, insert_cloud, max_range, options.odds);
    }

    result.trajectory.push_back(record);
    previous_truth = truth;
    previous_estimate = record.estimated_pose;
  }

  if (!out_prefix.empty()) {
    WritePgmFile(map, out_prefix + "_map.pgm");
    std::ofstream csv(out_prefix + "_trajectory.csv");
    if (!csv) {
      throw std::runtime_error("cannot open trajectory output: " + out_prefix +
                               "_trajectory.csv");
    }
    csv << kTrajectoryCsvHeader << "\n";
    for (const StepRecord& record : result.trajectory) {
      csv << record.step << ',' << FormatDouble(record.true_pose.x) << ','
          << FormatDouble(record.true_pose.y) << ',' << FormatDouble(record.true_pose.theta)
          << ',' << FormatDouble(record.estimated_pose.x) << ','
          << FormatDouble(record.estimated_pose.y) << ','
          << FormatDouble(record.estimated_pose.theta) << ',' << record.iterations << ','
          << record.time_us << "\n";
    }
  }
  return result;
}

void WritePgm(const ProbabilityGrid& grid, std::ostream& out) {
  out << "P2\n" << grid.width() << ' ' << grid.height() << "\n255\n";
  for (int iy = grid.height() - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < grid.width(); ++ix) {
      const long gray = std::lround(255.0 * (1.0 - grid.At(ix, iy)));
      out << std::clamp(gray, 0L, 255L);
      out << (ix + 1 < grid.width() ? ' ' : '\n');
    }
  }
}

void WritePgmFile(const ProbabilityGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open PGM output file: " + path);
  }
  WritePgm(grid, out);
  if (!out.good()) {
    throw std::runtime_error("failed writing PGM output file: " + path);
  }
}

}  // namespace scanmatch
