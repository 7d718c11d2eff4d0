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

#ifndef SCANMATCH_BENCH_HPP_
#define SCANMATCH_BENCH_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scanmatch/pose.hpp"
#include "scanmatch/probability_grid.hpp"
#include "scanmatch/scan_matcher.hpp"
#include "scanmatch/solver_common.hpp"

namespace scanmatch {

// Synthetic solver-comparison benchmark: seeded random scan-matching
// instances run through both backends, per-trial CSV rows plus per-backend
// RMSE / iteration / timing summaries.
struct BenchConfig {
  std::uint64_t seed = 42;
  int trials = 20;
  int points_per_cloud = 5;
  double max_translation_perturbation = 0.3;  // meters
  double max_rotation_perturbation = 0.15;    // radians
  std::vector<Backend> backends = {Backend::kResidual, Backend::kGraph};
  double grid_resolution = 0.05;  // meters per cell
  int grid_padding = 10;          // cells
  MatchWeights weights;
  SolverOptions options;
  bool rmse_with_theta = false;

  void Validate() const;
};

struct BenchTrial {
  ProbabilityGrid grid;
  PointCloud2D cloud;        // body frame
  Pose2D truth_pose;
  Pose2D initial_pose;
};

// Deterministic in (seed, index): samples the ground-truth pose in
// [-1, 1]^2 x [-pi/4, pi/4], `points_per_cloud` body-frame points in
// [-2, 2]^2, builds the grid from the truth-transformed points, and perturbs
// the truth uniformly within the configured bounds to get the initial pose.
BenchTrial GenerateTrial(std::uint64_t seed, int index, const BenchConfig& config);

// Translation-only root-mean-square pose error across trials.
double Rmse(const std::vector<Pose2D>& estimates, const std::vector<Pose2D>& truths);

// Variant that adds the wrapped heading difference as a third error
// component.
double RmseWithTheta(const std::vector<Pose2D>& estimates, const std::vector<Pose2D>& truths);

struct TrialRecord {
  int trial = 0;
  Backend backend = Backend::kResidual;
  Pose2D initial_pose;
  Pose2D truth_pose;
  Pose2D estimated_pose;
  double final_cost = 0.0;
  int iterations = 0;
  std::int64_t time_us = 0;
};

struct BackendSummary {
  double rmse = 0.0;
  double mean_iterations = 0.0;
  double mean_time_us = 0.0;
};

struct BenchResult {
  std::vector<TrialRecord> records;  // trial-major, backend order as configured
  std::map<Backend, BackendSummary> summaries;
  // Trials where the backends' final costs differ by more than 1e-6
  // relative, with the gradient infinity norms at both solutions.
  struct Divergence {
    int trial;
    double residual_cost;
    double graph_cost;
    double residual_gradient_inf_norm;
    double graph_gradient_inf_norm;
  };
  std::vector<Divergence> divergences;
};

BenchResult RunBenchmark(const BenchConfig& config);

// One row per record under the fixed header
// trial,backend,init_x,init_y,init_theta,gt_x,gt_y,gt_theta,est_x,est_y,est_theta,final_cost,iterations,time_us
void WriteCsv(const BenchResult& result, std::ostream& out);
void WriteCsvFile(const BenchResult& result, const std::string& path);

// Plain-text pose table (one line per trial: initial pose and each backend's
// estimate) for external plotting.
void WritePoseDump(const BenchResult& result, const BenchConfig& config, std::ostream& out);

void PrintSummary(const BenchResult& result, std::ostream& out);

inline constexpr const char* kBenchCsvHeader =
    "trial,backend,init_x,init_y,init_theta,gt_x,gt_y,gt_theta,est_x,est_y,est_theta,"
    "final_cost,iterations,time_us";

}  // namespace scanmatch

#endif  // SCANMATCH_BENCH_HPP_
