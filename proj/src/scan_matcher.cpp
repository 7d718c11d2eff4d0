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

#include "scanmatch/scan_matcher.hpp"

#include <stdexcept>

#include "scanmatch/graph_solver.hpp"
#include "scanmatch/residual_solver.hpp"

namespace scanmatch {

std::string ToString(Backend backend) {
  return backend == Backend::kResidual ? "residual" : "graph";
}

namespace {

void ValidateRequest(const MatchRequest& request) {
  if (request.cloud == nullptr || request.cloud->empty()) {
    throw std::invalid_argument("Match: point cloud is empty");
  }
  if (request.grid == nullptr) {
    throw std::invalid_argument("Match: no grid");
  }
  if (request.grid->width() < 4 || request.grid->height() < 4) {
    throw std::invalid_argument("Match: grid must be at least 4x4 cells for interpolation");
  }
  if (request.weights.occupied_space < 0.0 || request.weights.translation < 0.0 ||
      request.weights.rotation < 0.0) {
    throw std::invalid_argument("Match: weights must be nonnegative");
  }
}

}  // namespace

std::vector<ResidualSpec> MatchResidualSpecs(const MatchRequest& request) {
  ValidateRequest(request);
  return {
      ResidualSpec::OccupiedSpace(*request.cloud, *request.grid,
                                  request.weights.occupied_space,
                                  request.weights.normalize_occupied_by_count),
      ResidualSpec::TranslationDelta(request.target_translation, request.weights.translation),
      ResidualSpec::RotationDelta(request.initial_pose.theta, request.weights.rotation),
  };
}

MatchResult Match(const MatchRequest& request) {
  ValidateRequest(request);
  MatchResult result;
  if (request.backend == Backend::kResidual) {
    LeastSquaresProblem problem;
    problem.parameter = request.initial_pose;
    problem.blocks = MatchResidualSpecs(request);
    auto [pose, report] = SolveResidualBlocks(problem, request.options);
    result.pose_estimate = pose;
    result.report = report;
  } else {
    Graph graph;
    graph.AddVertex(0, request.initial_pose);
    graph.AddEdge({ResidualKind::kOccupiedSpace, {0}, request.weights.occupied_space});
    graph.AddEdge({ResidualKind::kTranslationDelta, {0}, request.weights.translation});
    graph.AddEdge({ResidualKind::kRotationDelta, {0}, request.weights.rotation});
    EdgeContext context;
    context.grid = request.grid;
    context.cloud = request.cloud;
    context.normalize_occupied_by_count = request.weights.normalize_occupied_by_count;
    context.target_translation = request.target_translation;
    context.target_rotation = request.initial_pose.theta;
    result.report = OptimizeGraph(&graph, context, request.options);
    result.pose_estimate = graph.vertices.at(0).estimate;
  }
  result.pose_estimate = Pose2D(result.pose_estimate.x, result.pose_estimate.y,
                                NormalizeAngle(result.pose_estimate.theta));
  return result;
}

}  // namespace scanmatch
