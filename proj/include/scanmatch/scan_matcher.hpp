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

#ifndef SCANMATCH_SCAN_MATCHER_HPP_
#define SCANMATCH_SCAN_MATCHER_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "scanmatch/costs.hpp"
#include "scanmatch/pose.hpp"
#include "scanmatch/probability_grid.hpp"
#include "scanmatch/solver_common.hpp"

namespace scanmatch {

enum class Backend { kResidual, kGraph };

std::string ToString(Backend backend);

// Default weights keep the pose priors soft against the map evidence of a
// five-point scan; a heavier rotation prior measurably drags the heading
// toward the (perturbed) initial estimate.
struct MatchWeights {
  double occupied_space = 10.0;
  double translation = 10.0;
  double rotation = 15.0;
  // Whether the occupied-space block is scaled by 1/sqrt(point count) so the
  // map term's magnitude does not grow with scan size.
  bool normalize_occupied_by_count = true;
};

// Inputs of one scan-to-map alignment. The rotation constraint always
// targets the initial pose's heading; the translation constraint targets
// target_translation.
struct MatchRequest {
  Eigen::Vector2d target_translation = Eigen::Vector2d::Zero();
  Pose2D initial_pose;
  const PointCloud2D* cloud = nullptr;
  const ProbabilityGrid* grid = nullptr;
  Backend backend = Backend::kResidual;
  MatchWeights weights;
  SolverOptions options;
};

struct MatchResult {
  Pose2D pose_estimate;
  SolverReport report;
};

// Aligns the scan with the grid: builds the occupied-space, translation and
// rotation constraints, runs the selected backend from the initial pose, and
// returns the refined pose (theta wrapped to [-pi, pi)) with the solver
// report. Neither the grid nor the cloud is modified; concurrent matches
// against one shared grid are safe. On numerical failure the best pose seen
// is returned and the report says so.
MatchResult Match(const MatchRequest& request);

// The constraint list Match optimizes, exposed so callers can evaluate costs
// and gradients of a request at arbitrary poses.
std::vector<ResidualSpec> MatchResidualSpecs(const MatchRequest& request);

}  // namespace scanmatch

#endif  // SCANMATCH_SCAN_MATCHER_HPP_
