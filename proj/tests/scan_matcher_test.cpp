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
#include <thread>

#include "scanmatch/scan_matcher.hpp"
#include "test_util.hpp"

namespace scanmatch {
namespace {

MatchRequest RequestForTrial(const BenchTrial& trial, Backend backend) {
  MatchRequest request;
  request.target_translation = trial.truth_pose.translation();
  request.initial_pose = trial.initial_pose;
  request.cloud = &trial.cloud;
  request.grid = &trial.grid;
  request.backend = backend;
  return request;
}

TEST_CASE("starting at the generating truth stays at a stationary point") {
  for (Backend backend : {Backend::kResidual, Backend::kGraph}) {
    for (int instance = 0; instance < 5; ++instance) {
      BenchConfig config;
      config.max_translation_perturbation = 0.0;
      config.max_rotation_perturbation = 0.0;
      // A fine grid keeps the interpolated peak within a fraction of a
      // millimeter of the generating truth.
      config.grid_resolution = 0.015;
      const BenchTrial trial = GenerateTrial(600, instance, config);
      REQUIRE(trial.initial_pose.x == trial.truth_pose.x);

      MatchRequest request = RequestForTrial(trial, backend);
      // Drive the solver to stationarity rather than stopping on a flat cost
      // difference, so the gradient bound below is meaningful. The uniform
      // weight scale leaves the minimizer unchanged while keeping the
      // gradient floor of double-precision cost comparisons far below the
      // bound.
      request.weights.occupied_space = 1.0;
      request.weights.translation = 1.0;
      request.weights.rotation = 1.5;
      request.options.gradient_tolerance = 1e-8;
      request.options.function_tolerance = 1e-15;
      request.options.parameter_tolerance = 1e-15;
      request.options.max_iterations = 500;
      const MatchResult result = Match(request);

      const double gradient =
          CostGradientInfNorm(MatchResidualSpecs(request), result.pose_estimate);
      CHECK(gradient < 1e-6);
      CHECK(std::abs(result.pose_estimate.x - trial.truth_pose.x) < 1e-3);
      CHECK(std::abs(result.pose_estimate.y - trial.truth_pose.y) < 1e-3);
      CHECK(std::abs(NormalizeAngle(result.pose_estimate.theta - trial.truth_pose.theta)) <
            1e-3);
    }
  }
}

TEST_CASE("perturbed initial poses are recovered on benchmark grids") {
  // Smaller sample of the Monte-Carlo the acceptance suite runs in full.
  for (Backend backend : {Backend::kResidual, Backend::kGraph}) {
    int recovered = 0;
    const int trials = 40;
    for (int instance = 0; instance < trials; ++instance) {
      BenchConfig config;
      config.max_translation_perturbation = 0.1;
      config.max_rotation_perturbation = 0.05;
      const BenchTrial trial = GenerateTrial(601, instance, config);
      const MatchResult result = Match(RequestForTrial(trial, backend));
      const double dx = result.pose_estimate.x - trial.truth_pose.x;
      const double dy = result.pose_estimate.y - trial.truth_pose.y;
      const double dtheta =
          NormalizeAngle(result.pose_estimate.theta - trial.truth_pose.theta);
      if (std::hypot(dx, dy) <= 0.02 && std::abs(dtheta) <= 0.01) {
        ++recovered;
      }
    }
    CHECK(recovered >= static_cast<int>(0.9 * trials));
  }
}

TEST_CASE("an empty cloud is rejected") {
  const BenchTrial trial = testing::MakeTrial(602, 0);
  const PointCloud2D empty;
  MatchRequest request = RequestForTrial(trial, Backend::kResidual);
  request.cloud = &empty;
  CHECK_THROWS_AS(Match(request), std::invalid_argument);
}

TEST_CASE("degenerate grids are rejected") {
  const ProbabilityGrid tiny(3, 3, 0.1, {0.0, 0.0}, 0.5);
  const PointCloud2D cloud = {{0.1, 0.1}};
  MatchRequest request;
  request.cloud = &cloud;
  request.grid = &tiny;
  CHECK_THROWS_AS(Match(request), std::invalid_argument);
}

TEST_CASE("both backends return matching costs on identical requests") {
  int agreements = 0;
  const int instances = 30;
  for (int instance = 0; instance < instances; ++instance) {
    const BenchTrial trial = testing::MakeTrial(603, instance);
    const MatchResult residual = Match(RequestForTrial(trial, Backend::kResidual));
    const MatchResult graph = Match(RequestForTrial(trial, Backend::kGraph));
    const double scale =
        std::max({residual.report.final_cost, graph.report.final_cost, 1e-300});
    if (std::abs(residual.report.final_cost - graph.report.final_cost) <= 1e-6 * scale) {
      ++agreements;
    }
    CHECK(residual.pose_estimate.theta >= -std::numbers::pi);
    CHECK(residual.pose_estimate.theta < std::numbers::pi);
    CHECK(graph.pose_estimate.theta >= -std::numbers::pi);
    CHECK(graph.pose_estimate.theta < std::numbers::pi);
  }
  CHECK(agreements >= static_cast<int>(0.95 * instances));
}

TEST_CASE("match leaves the grid and cloud untouched") {
  const BenchTrial trial = testing::MakeTrial(604, 1);
  const std::vector<double> cells_before = trial.grid.cells();
  const PointCloud2D cloud_before = trial.cloud;
  (void)Match(RequestForTrial(trial, Backend::kResidual));
  (void)Match(RequestForTrial(trial, Backend::kGraph));
  CHECK(trial.grid.cells() == cells_before);
  REQUIRE(trial.cloud.size() == cloud_before.size());
  for (size_t i = 0; i < cloud_before.size(); ++i) {
    CHECK(trial.cloud[i] == cloud_before[i]);
  }
}

TEST_CASE("concurrent matches on one shared grid reproduce the serial results") {
  const BenchTrial trial = testing::MakeTrial(605, 2);
  const MatchRequest request = RequestForTrial(trial, Backend::kResidual);
  const MatchResult serial = Match(request);

  constexpr int kThreads = 8;
  std::vector<MatchResult> results(kThreads);
  std::vector<std::thread> threads;
  threads.reserve(kThreads);
  for (int i = 0; i < kThreads; ++i) {
    threads.emplace_back([&request, &results, i]() { results[i] = Match(request); });
  }
  for (std::thread& thread : threads) {
    thread.join();
  }
  for (const MatchResult& result : results) {
    CHECK(result.pose_estimate.x == serial.pose_estimate.x);
    CHECK(result.pose_estimate.y == serial.pose_estimate.y);
    CHECK(result.pose_estimate.theta == serial.pose_estimate.theta);
    CHECK(result.report.final_cost == serial.report.final_cost);
  }
}

}  // namespace
}  // namespace scanmatch
