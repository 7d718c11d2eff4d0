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

#ifndef SCANMATCH_GRAPH_SOLVER_HPP_
#define SCANMATCH_GRAPH_SOLVER_HPP_

#include <map>
#include <vector>

#include <Eigen/Core>

#include "scanmatch/costs.hpp"
#include "scanmatch/pose.hpp"
#include "scanmatch/probability_grid.hpp"
#include "scanmatch/solver_common.hpp"

namespace scanmatch {

// Graph backend: explicit pose vertices updated through the box-plus rule and
// typed edges whose error functions are the shared cost residuals. This is a
// deliberately separate implementation from the residual-block backend (own
// traversal, own state update, own damping defaults); the two share only the
// Cholesky solve and the residual definitions.

struct PoseVertex {
  int id = 0;
  Pose2D estimate;
  bool fixed = false;
};

// A constraint over one vertex (scan matching) or two (relative-pose style
// delta constraints between vertex_ids[0] and vertex_ids[1]).
struct GraphEdge {
  ResidualKind kind = ResidualKind::kTranslationDelta;
  std::vector<int> vertex_ids;
  double information_weight = 1.0;
};

struct Graph {
  std::map<int, PoseVertex> vertices;
  std::vector<GraphEdge> edges;

  void AddVertex(int id, const Pose2D& estimate, bool fixed = false) {
    vertices[id] = PoseVertex{id, estimate, fixed};
  }
  void AddEdge(GraphEdge edge) { edges.push_back(std::move(edge)); }
};

// Shared context for edge error evaluation: the map/scan pair used by
// occupied-space edges and the targets of the delta edges.
struct EdgeContext {
  const ProbabilityGrid* grid = nullptr;
  const PointCloud2D* cloud = nullptr;
  bool normalize_occupied_by_count = true;
  Eigen::Vector2d target_translation = Eigen::Vector2d::Zero();
  double target_rotation = 0.0;
};

// Box-plus: increments the estimate by (d0, d1, d2) and re-wraps theta.
// Applying an update to a fixed vertex is a contract violation.
PoseVertex Oplus(const PoseVertex& vertex, const Eigen::Vector3d& delta);

struct EdgeEvaluation {
  Eigen::VectorXd error;
  // One block per entry of edge.vertex_ids, each ResidualCount() x 3.
  std::vector<Eigen::MatrixXd> jacobians;
};

// Error of an edge at the current vertex estimates plus its Jacobian blocks
// from Jet3 seeding of each vertex's parameters. Unary edges evaluate the
// cost residual at the vertex; binary delta edges penalize the difference
// between the two estimates against the context target.
EdgeEvaluation EvaluateEdge(const GraphEdge& edge, const Graph& graph,
                            const EdgeContext& context);

double GraphCost(const Graph& graph, const EdgeContext& context);

// Infinity norm of the stacked gradient over the free vertices.
double GraphGradientInfNorm(const Graph& graph, const EdgeContext& context);

// Iteratively adjusts the free vertex estimates, Levenberg-Marquardt on the
// stacked 3 * n_free system, until the shared convergence criteria fire.
// Vertex estimates are updated in place.
SolverReport OptimizeGraph(Graph* graph, const EdgeContext& context,
                           const SolverOptions& options);

}  // namespace scanmatch

#endif  // SCANMATCH_GRAPH_SOLVER_HPP_
