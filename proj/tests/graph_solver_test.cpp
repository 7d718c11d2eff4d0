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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scanmatch/graph_solver.hpp"
#include "scanmatch/residual_solver.hpp"
#include "test_util.hpp"

namespace scanmatch {
namespace {

constexpr double kPi = std::numbers::pi;

TEST_CASE("oplus applies an additive update with angle wrap") {
  const PoseVertex v{0, Pose2D(1.0, 2.0, 3.0), false};
  const PoseVertex updated = Oplus(v, {0.1, 0.0, -0.5});
  CHECK(updated.estimate.x == doctest::Approx(1.1));
  CHECK(updated.estimate.y == doctest::Approx(2.0));
  CHECK(updated.estimate.theta == doctest::Approx(2.5));

  const PoseVertex unchanged = Oplus(v, {0.0, 0.0, 0.0});
  CHECK(unchanged.estimate.x == v.estimate.x);
  CHECK(unchanged.estimate.y == v.estimate.y);
  CHECK(unchanged.estimate.theta == v.estimate.theta);

  const PoseVertex wrapped = Oplus(PoseVertex{1, Pose2D(0, 0, 3.0), false}, {0, 0, 0.3});
  CHECK(wrapped.estimate.theta == doctest::Approx(3.3 - 2.0 * kPi));
}

TEST_CASE("oplus on a fixed vertex is a contract violation") {
  const PoseVertex fixed{0, Pose2D(0, 0, 0), true};
  CHECK_THROWS_AS(Oplus(fixed, {0.1, 0.0, 0.0}), std::logic_error);
}

TEST_CASE("delta edges have the expected error and Jacobian") {
  Graph graph;
  graph.AddVertex(0, Pose2D(1.0, 2.0, 0.3));
  EdgeContext context;
  context.target_translation = {1.0, 2.0};
  context.target_rotation = 0.3;

  const double w = 4.0;
  const GraphEdge translation{ResidualKind::kTranslationDelta, {0}, w};
  const EdgeEvaluation te = EvaluateEdge(translation, graph, context);
  CHECK(te.error.norm() == doctest::Approx(0.0));
  CHECK(te.jacobians[0](0, 0) == doctest::Approx(w));
  CHECK(te.jacobians[0](0, 1) == 0.0);
  CHECK(te.jacobians[0](0, 2) == 0.0);
  CHECK(te.jacobians[0](1, 0) == 0.0);
  CHECK(te.jacobians[0](1, 1) == doctest::Approx(w));
  CHECK(te.jacobians[0](1, 2) == 0.0);

  const GraphEdge rotation{ResidualKind::kRotationDelta, {0}, w};
  const EdgeEvaluation re = EvaluateEdge(rotation, graph, context);
  CHECK(re.error(0) == doctest::Approx(0.0));
  CHECK(re.jacobians[0](0, 0) == 0.0);
  CHECK(re.jacobians[0](0, 1) == 0.0);
  CHECK(re.jacobians[0](0, 2) == doctest::Approx(w));
}

TEST_CASE("occupied-space edge Jacobian matches finite differences") {
  for (int instance = 0; instance < 20; ++instance) {
    const BenchTrial trial = testing::MakeTrial(500, instance);
    Graph graph;
    graph.AddVertex(0, trial.initial_pose);
    EdgeContext context;
    context.grid = &trial.grid;
    context.cloud = &trial.cloud;

    const GraphEdge edge{ResidualKind::kOccupiedSpace, {0}, 10.0};
    const EdgeEvaluation evaluation = EvaluateEdge(edge, graph, context);

    const Eigen::Vector3d at(trial.initial_pose.x, trial.initial_pose.y,
                             trial.initial_pose.theta);
    const ResidualSpec spec = ResidualSpec::OccupiedSpace(trial.cloud, trial.grid, 10.0);
    for (int row = 0; row < evaluation.error.size(); ++row) {
      const auto value_at = [&spec, row](const Eigen::Vector3d& p) {
        std::vector<double> values(spec.ResidualCount());
        const double pose[3] = {p[0], p[1], p[2]};
        EvaluateResiduals(spec, pose, values.data());
        return values[row];
      };
      const Eigen::Vector3d numeric = testing::FiniteDifferenceGradient(value_at, at);
      const Eigen::Vector3d analytic = evaluation.jacobians[0].row(row).transpose();
      CHECK(testing::GradientsClose(analytic, numeric, 1e-5, 1e-5));
    }
  }
}

TEST_CASE("a separable linear graph converges to its targets") {
  Graph graph;
  graph.AddVertex(0, Pose2D(0, 0, 0));
  graph.AddEdge({ResidualKind::kTranslationDelta, {0}, 1.0});
  graph.AddEdge({ResidualKind::kRotationDelta, {0}, 1.0});
  EdgeContext context;
  context.target_translation = {2.0, 3.0};
  context.target_rotation = 0.5;

  const SolverReport report = OptimizeGraph(&graph, context, SolverOptions{});
  CHECK(report.termination == Termination::kConverged);
  const Pose2D estimate = graph.vertices.at(0).estimate;
  CHECK(estimate.x == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(estimate.y == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(estimate.theta == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(report.final_cost < 1e-16);
}

TEST_CASE("graphs without free vertices or edges are rejected") {
  Graph all_fixed;
  all_fixed.AddVertex(0, Pose2D(0, 0, 0), /*fixed=*/true);
  all_fixed.AddEdge({ResidualKind::kRotationDelta, {0}, 1.0});
  CHECK_THROWS_AS(OptimizeGraph(&all_fixed, EdgeContext{}, SolverOptions{}),
                  std::invalid_argument);

  Graph no_edges;
  no_edges.AddVertex(0, Pose2D(0, 0, 0));
  CHECK_THROWS_AS(OptimizeGraph(&no_edges, EdgeContext{}, SolverOptions{}),
                  std::invalid_argument);
}

TEST_CASE("edges referencing unknown vertices are rejected") {
  Graph graph;
  graph.AddVertex(0, Pose2D(0, 0, 0));
  graph.AddEdge({ResidualKind::kRotationDelta, {7}, 1.0});
  CHECK_THROWS_AS(OptimizeGraph(&graph, EdgeContext{}, SolverOptions{}),
                  std::invalid_argument);
}

TEST_CASE("binary delta edges pull the second vertex relative to the first") {
  Graph graph;
  graph.AddVertex(0, Pose2D(1.0, 1.0, 0.2), /*fixed=*/true);
  graph.AddVertex(1, Pose2D(0.0, 0.0, 0.0));
  graph.AddEdge({ResidualKind::kTranslationDelta, {0, 1}, 1.0});
  graph.AddEdge({ResidualKind::kRotationDelta, {0, 1}, 1.0});
  EdgeContext context;
  context.target_translation = {2.0, 3.0};
  context.target_rotation = 0.5;

  const SolverReport report = OptimizeGraph(&graph, context, SolverOptions{});
  CHECK(report.termination == Termination::kConverged);

  // The fixed vertex must be bit-identical.
  const Pose2D anchor = graph.vertices.at(0).estimate;
  CHECK(anchor.x == 1.0);
  CHECK(anchor.y == 1.0);
  CHECK(anchor.theta == 0.2);

  const Pose2D moved = graph.vertices.at(1).estimate;
  CHECK(moved.x == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(moved.y == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(moved.theta == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("multi-vertex graphs stack blocks at the right offsets") {
  // Two free vertices chained to a fixed anchor through binary rotation
  // edges with the same relative target; both must end up consistent.
  Graph graph;
  graph.AddVertex(0, Pose2D(0, 0, 0), /*fixed=*/true);
  graph.AddVertex(1, Pose2D(0.3, -0.2, 0.1));
  graph.AddVertex(2, Pose2D(-0.1, 0.4, -0.3));
  graph.AddEdge({ResidualKind::kTranslationDelta, {0, 1}, 2.0});
  graph.AddEdge({ResidualKind::kTranslationDelta, {1, 2}, 2.0});
  graph.AddEdge({ResidualKind::kRotationDelta, {0, 1}, 3.0});
  graph.AddEdge({ResidualKind::kRotationDelta, {1, 2}, 3.0});
  EdgeContext context;
  context.target_translation = {1.0, 0.0};
  context.target_rotation = 0.25;

  const SolverReport report = OptimizeGraph(&graph, context, SolverOptions{});
  CHECK(report.termination == Termination::kConverged);
  CHECK(graph.vertices.at(1).estimate.x == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(graph.vertices.at(1).estimate.theta == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(graph.vertices.at(2).estimate.x == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(graph.vertices.at(2).estimate.theta == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("graph and residual backends agree on the scan-matching cost") {
  int agreements = 0;
  const int instances = 50;
  for (int instance = 0; instance < instances; ++instance) {
    const BenchTrial trial = testing::MakeTrial(501, instance);

    LeastSquaresProblem problem;
    problem.parameter = trial.initial_pose;
    problem.blocks = {
        ResidualSpec::OccupiedSpace(trial.cloud, trial.grid, 10.0),
        ResidualSpec::TranslationDelta(trial.truth_pose.translation(), 10.0),
        ResidualSpec::RotationDelta(trial.initial_pose.theta, 40.0),
    };
    const auto [residual_pose, residual_report] =
        SolveResidualBlocks(problem, SolverOptions{});

    Graph graph;
    graph.AddVertex(0, trial.initial_pose);
    graph.AddEdge({ResidualKind::kOccupiedSpace, {0}, 10.0});
    graph.AddEdge({ResidualKind::kTranslationDelta, {0}, 10.0});
    graph.AddEdge({ResidualKind::kRotationDelta, {0}, 40.0});
    EdgeContext context;
    context.grid = &trial.grid;
    context.cloud = &trial.cloud;
    context.target_translation = trial.truth_pose.translation();
    context.target_rotation = trial.initial_pose.theta;
    const SolverReport graph_report = OptimizeGraph(&graph, context, SolverOptions{});

    const double scale =
        std::max({residual_report.final_cost, graph_report.final_cost, 1e-300});
    if (std::abs(residual_report.final_cost - graph_report.final_cost) <= 1e-6 * scale) {
      ++agreements;
    }
  }
  CHECK(agreements >= static_cast<int>(0.95 * instances));
}

TEST_CASE("graph optimization is deterministic") {
  const BenchTrial trial = testing::MakeTrial(502, 3);
  Pose2D results[2];
  int iterations[2];
  for (int run = 0; run < 2; ++run) {
    Graph graph;
    graph.AddVertex(0, trial.initial_pose);
    graph.AddEdge({ResidualKind::kOccupiedSpace, {0}, 10.0});
    graph.AddEdge({ResidualKind::kTranslationDelta, {0}, 10.0});
    graph.AddEdge({ResidualKind::kRotationDelta, {0}, 40.0});
    EdgeContext context;
    context.grid = &trial.grid;
    context.cloud = &trial.cloud;
    context.target_translation = trial.truth_pose.translation();
    context.target_rotation = trial.initial_pose.theta;
    const SolverReport report = OptimizeGraph(&graph, context, SolverOptions{});
    results[run] = graph.vertices.at(0).estimate;
    iterations[run] = report.iterations;
  }
  CHECK(results[0].x == results[1].x);
  CHECK(results[0].y == results[1].y);
  CHECK(results[0].theta == results[1].theta);
  CHECK(iterations[0] == iterations[1]);
}

}  // namespace
}  // namespace scanmatch
