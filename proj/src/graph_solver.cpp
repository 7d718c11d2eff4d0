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

#include "scanmatch/graph_solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace scanmatch {

namespace {

constexpr double kDefaultInitialLambda = 1e-3;
constexpr double kDefaultLambdaAcceptScale = 1.0 / 3.0;
constexpr double kDefaultLambdaRejectScale = 2.0;
constexpr double kMinLmLambda = 1e-12;

const PoseVertex& VertexOrThrow(const Graph& graph, int id) {
  const auto it = graph.vertices.find(id);
  if (it == graph.vertices.end()) {
    throw std::invalid_argument("Graph edge references unknown vertex id");
  }
  return it->second;
}

ResidualSpec UnarySpec(const GraphEdge& edge, const EdgeContext& context) {
  switch (edge.kind) {
    case ResidualKind::kOccupiedSpace:
      if (context.cloud == nullptr || context.grid == nullptr) {
        throw std::invalid_argument("OccupiedSpace edge needs a cloud and grid in the context");
      }
      return ResidualSpec::OccupiedSpace(*context.cloud, *context.grid,
                                         edge.information_weight,
                                         context.normalize_occupied_by_count);
    case ResidualKind::kTranslationDelta:
      return ResidualSpec::TranslationDelta(context.target_translation,
                                            edge.information_weight);
    case ResidualKind::kRotationDelta:
      return ResidualSpec::RotationDelta(context.target_rotation, edge.information_weight);
  }
  throw std::invalid_argument("Unknown edge kind");
}

// Relative-pose flavor of the delta constraints: penalizes the difference
// between the second and first vertex against the context target.
template <typename T>
void EvaluateBinaryDelta(const GraphEdge& edge, const EdgeContext& context, const T from[3],
                         const T to[3], T* error) {
  switch (edge.kind) {
    case ResidualKind::kTranslationDelta:
      error[0] =
          edge.information_weight * (to[0] - from[0] - context.target_translation.x());
      error[1] =
          edge.information_weight * (to[1] - from[1] - context.target_translation.y());
      break;
    case ResidualKind::kRotationDelta:
      error[0] = edge.information_weight *
                 NormalizeAngle(to[2] - from[2] - context.target_rotation);
      break;
    case ResidualKind::kOccupiedSpace:
      throw std::invalid_argument("OccupiedSpace edges are unary");
  }
}

void SeedVertex(const Pose2D& estimate, bool as_variables, Jet3 params[3]) {
  if (as_variables) {
    params[0] = Jet3::Variable(estimate.x, 0);
    params[1] = Jet3::Variable(estimate.y, 1);
    params[2] = Jet3::Variable(estimate.theta, 2);
  } else {
    params[0] = Jet3::Constant(estimate.x);
    params[1] = Jet3::Constant(estimate.y);
    params[2] = Jet3::Constant(estimate.theta);
  }
}

}  // namespace

PoseVertex Oplus(const PoseVertex& vertex, const Eigen::Vector3d& delta) {
  if (vertex.fixed) {
    throw std::logic_error("Oplus applied to a fixed vertex");
  }
  PoseVertex updated = vertex;
  updated.estimate = Pose2D(vertex.estimate.x + delta[0], vertex.estimate.y + delta[1],
                            NormalizeAngle(vertex.estimate.theta + delta[2]));
  return updated;
}

EdgeEvaluation EvaluateEdge(const GraphEdge& edge, const Graph& graph,
                            const EdgeContext& context) {
  EdgeEvaluation evaluation;
  if (edge.vertex_ids.size() == 1) {
    const PoseVertex& vertex = VertexOrThrow(graph, edge.vertex_ids[0]);
    const ResidualSpec spec = UnarySpec(edge, context);
    const int dim = spec.ResidualCount();
    Jet3 params[3];
    SeedVertex(vertex.estimate, /*as_variables=*/true, params);
    std::vector<Jet3> residuals(dim);
    EvaluateResiduals(spec, params, residuals.data());
    evaluation.error.resize(dim);
    evaluation.jacobians.assign(1, Eigen::MatrixXd(dim, 3));
    for (int i = 0; i < dim; ++i) {
      evaluation.error(i) = residuals[i].a;
      evaluation.jacobians[0].row(i) = residuals[i].v.transpose();
    }
    return evaluation;
  }
  if (edge.vertex_ids.size() == 2) {
    const PoseVertex& from = VertexOrThrow(graph, edge.vertex_ids[0]);
    const PoseVertex& to = VertexOrThrow(graph, edge.vertex_ids[1]);
    const int dim = edge.kind == ResidualKind::kTranslationDelta ? 2 : 1;
    evaluation.error.resize(dim);
    evaluation.jacobians.assign(2, Eigen::MatrixXd(dim, 3));
    std::vector<Jet3> residuals(dim);
    Jet3 from_params[3];
    Jet3 to_params[3];
    // One differentiation pass per vertex; the other end stays constant.
    for (int pass = 0; pass < 2; ++pass) {
      SeedVertex(from.estimate, pass == 0, from_params);
      SeedVertex(to.estimate, pass == 1, to_params);
      EvaluateBinaryDelta(edge, context, from_params, to_params, residuals.data());
      for (int i = 0; i < dim; ++i) {
        evaluation.jacobians[pass].row(i) = residuals[i].v.transpose();
        if (pass == 0) {
          evaluation.error(i) = residuals[i].a;
        }
      }
    }
    return evaluation;
  }
  throw std::invalid_argument("GraphEdge must reference one or two vertices");
}

double GraphCost(const Graph& graph, const EdgeContext& context) {
  double cost = 0.0;
  for (const GraphEdge& edge : graph.edges) {
    if (edge.vertex_ids.size() == 1) {
      const PoseVertex& vertex = VertexOrThrow(graph, edge.vertex_ids[0]);
      const ResidualSpec spec = UnarySpec(edge, context);
      std::vector<double> residuals(spec.ResidualCount());
      const double params[3] = {vertex.estimate.x, vertex.estimate.y, vertex.estimate.theta};
      EvaluateResiduals(spec, params, residuals.data());
      for (double r : residuals) {
        cost += r * r;
      }
    } else {
      const PoseVertex& from = VertexOrThrow(graph, edge.vertex_ids[0]);
      const PoseVertex& to = VertexOrThrow(graph, edge.vertex_ids[1]);
      const double from_params[3] = {from.estimate.x, from.estimate.y, from.estimate.theta};
      const double to_params[3] = {to.estimate.x, to.estimate.y, to.estimate.theta};
      double residuals[2] = {0.0, 0.0};
      EvaluateBinaryDelta(edge, context, from_params, to_params, residuals);
      const int dim = edge.kind == ResidualKind::kTranslationDelta ? 2 : 1;
      for (int i = 0; i < dim; ++i) {
        cost += residuals[i] * residuals[i];
      }
    }
  }
  return cost;
}

namespace {

struct StackedSystem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;  // J^T e stacked over free vertices
};

// Column offset of every free vertex in the stacked system, in id order.
std::map<int, int> FreeVertexOffsets(const Graph& graph) {
  std::map<int, int> offsets;
  int next = 0;
  for (const auto& [id, vertex] : graph.vertices) {
    if (!vertex.fixed) {
      offsets[id] = next;
      next += 3;
    }
  }
  return offsets;
}

StackedSystem BuildSystem(const Graph& graph, const EdgeContext& context,
                          const std::map<int, int>& offsets) {
  const int dimension = 3 * static_cast<int>(offsets.size());
  StackedSystem system;
  system.hessian = Eigen::MatrixXd::Zero(dimension, dimension);
  system.gradient = Eigen::VectorXd::Zero(dimension);
  for (const GraphEdge& edge : graph.edges) {
    const EdgeEvaluation evaluation = EvaluateEdge(edge, graph, context);
    for (size_t a = 0; a < edge.vertex_ids.size(); ++a) {
      const auto row_it = offsets.find(edge.vertex_ids[a]);
      if (row_it == offsets.end()) continue;  // fixed vertex
      const int row = row_it->second;
      system.gradient.segment<3>(row) +=
          evaluation.jacobians[a].transpose() * evaluation.error;
      for (size_t b = 0; b < edge.vertex_ids.size(); ++b) {
        const auto col_it = offsets.find(edge.vertex_ids[b]);
        if (col_it == offsets.end()) continue;
        system.hessian.block<3, 3>(row, col_it->second) +=
            evaluation.jacobians[a].transpose() * evaluation.jacobians[b];
      }
    }
  }
  return system;
}

void ApplyStep(Graph* graph, const std::map<int, int>& offsets, const Eigen::VectorXd& delta) {
  for (const auto& [id, offset] : offsets) {
    PoseVertex& vertex = graph->vertices.at(id);
    vertex = Oplus(vertex, delta.segment<3>(offset));
  }
}

std::map<int, Pose2D> SnapshotEstimates(const Graph& graph, const std::map<int, int>& offsets) {
  std::map<int, Pose2D> estimates;
  for (const auto& [id, offset] : offsets) {
    estimates[id] = graph.vertices.at(id).estimate;
  }
  return estimates;
}

void RestoreEstimates(Graph* graph, const std::map<int, Pose2D>& estimates) {
  for (const auto& [id, estimate] : estimates) {
    graph->vertices.at(id).estimate = estimate;
  }
}

}  // namespace

double GraphGradientInfNorm(const Graph& graph, const EdgeContext& context) {
  const auto offsets = FreeVertexOffsets(graph);
  if (offsets.empty()) {
    throw std::invalid_argument("GraphGradientInfNorm: no free vertices");
  }
  return BuildSystem(graph, context, offsets).gradient.cwiseAbs().maxCoeff();
}

SolverReport OptimizeGraph(Graph* graph, const EdgeContext& context,
                           const SolverOptions& options) {
  options.Validate();
  const auto offsets = FreeVertexOffsets(*graph);
  if (offsets.empty()) {
    throw std::invalid_argument("OptimizeGraph: graph has no free vertices");
  }
  if (graph->edges.empty()) {
    throw std::invalid_argument("OptimizeGraph: graph has no edges");
  }

  const auto start = std::chrono::steady_clock::now();
  const bool use_lm = options.algorithm == SolverAlgorithm::kLevenbergMarquardt;
  double lambda = options.initial_lm_lambda.value_or(kDefaultInitialLambda);
  const double accept_scale = options.lm_lambda_accept_scale.value_or(kDefaultLambdaAcceptScale);
  const double reject_scale = options.lm_lambda_reject_scale.value_or(kDefaultLambdaRejectScale);

  SolverReport report;
  double cost = GraphCost(*graph, context);
  report.initial_cost = cost;
  report.termination = Termination::kMaxIterations;

  std::map<int, Pose2D> best_estimates = SnapshotEstimates(*graph, offsets);
  double best_cost = cost;

  while (report.iterations < options.max_iterations) {
    const StackedSystem system = BuildSystem(*graph, context, offsets);
    if (!std::isfinite(cost) || !system.gradient.allFinite()) {
      report.termination = Termination::kNumericalFailure;
      break;
    }
    if (system.gradient.cwiseAbs().maxCoeff() <= options.gradient_tolerance) {
      report.termination = Termination::kConverged;
      break;
    }

    Eigen::MatrixXd damped = system.hessian;
    if (use_lm) {
      damped.diagonal() += lambda * system.hessian.diagonal();
    }
    Eigen::VectorXd delta;
    if (!CholeskySolve(damped, -system.gradient, &delta)) {
      if (!use_lm) {
        report.termination = Termination::kNumericalFailure;
        break;
      }
      ++report.iterations;
      lambda *= reject_scale;
      if (lambda > kMaxLmLambda) {
        report.termination = Termination::kNumericalFailure;
        break;
      }
      continue;
    }

    const std::map<int, Pose2D> previous = SnapshotEstimates(*graph, offsets);
    ApplyStep(graph, offsets, delta);
    const double candidate_cost = GraphCost(*graph, context);
    ++report.iterations;

    const bool accept =
        !use_lm || (std::isfinite(candidate_cost) && candidate_cost < cost);
    if (accept) {
      const double cost_change = std::abs(cost - candidate_cost);
      cost = candidate_cost;
      if (cost < best_cost) {
        best_cost = cost;
        best_estimates = SnapshotEstimates(*graph, offsets);
      }
      if (use_lm) {
        lambda = std::max(lambda * accept_scale, kMinLmLambda);
      }
      if (delta.norm() <= options.parameter_tolerance) {
        report.termination = Termination::kConverged;
        break;
      }
      if (cost_change <= options.function_tolerance * cost) {
        report.termination = Termination::kConverged;
        break;
      }
    } else {
      RestoreEstimates(graph, previous);
      if (delta.norm() <= options.parameter_tolerance) {
        report.termination = Termination::kConverged;
        break;
      }
      lambda *= reject_scale;
      if (lambda > kMaxLmLambda) {
        report.termination = Termination::kNumericalFailure;
        break;
      }
    }
  }

  if (report.termination == Termination::kNumericalFailure) {
    RestoreEstimates(graph, best_estimates);
    report.final_cost = best_cost;
  } else {
    report.final_cost = cost;
  }
  report.wall_time_us = std::chrono::duration_cast<std::chrono::microseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return report;
}

}  // namespace scanmatch
