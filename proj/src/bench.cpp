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

#include "scanmatch/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "scanmatch/rng.hpp"

namespace scanmatch {

namespace {

constexpr double kCostAgreementRelativeTolerance = 1e-6;

std::string FormatDouble(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

}  // namespace

void BenchConfig::Validate() const {
  if (trials < 1) {
    throw std::invalid_argument("BenchConfig: trials must be >= 1");
  }
  if (points_per_cloud < 1) {
    throw std::invalid_argument("BenchConfig: points_per_cloud must be >= 1");
  }
  if (backends.empty()) {
    throw std::invalid_argument("BenchConfig: no backends selected");
  }
  if (max_translation_perturbation < 0.0 || max_rotation_perturbation < 0.0) {
    throw std::invalid_argument("BenchConfig: perturbation bounds must be nonnegative");
  }
  options.Validate();
}

BenchTrial GenerateTrial(std::uint64_t seed, int index, const BenchConfig& config) {
  Rng rng(seed, static_cast<std::uint64_t>(index));

  constexpr double kQuarterPi = std::numbers::pi / 4.0;
  const Pose2D truth(rng.Uniform(-1.0, 1.0), rng.Uniform(-1.0, 1.0),
                     rng.Uniform(-kQuarterPi, kQuarterPi));

  PointCloud2D cloud(config.points_per_cloud);
  for (Eigen::Vector2d& point : cloud) {
    point.x() = rng.Uniform(-2.0, 2.0);
    point.y() = rng.Uniform(-2.0, 2.0);
  }

  PointCloud2D world_points;
  world_points.reserve(cloud.size());
  for (const Eigen::Vector2d& point : cloud) {
    world_points.push_back(TransformPoint(truth, point));
  }

  const double dx = rng.Uniform(-config.max_translation_perturbation,
                                config.max_translation_perturbation);
  const double dy = rng.Uniform(-config.max_translation_perturbation,
                                config.max_translation_perturbation);
  const double dtheta = rng.Uniform(-config.max_rotation_perturbation,
                                    config.max_rotation_perturbation);

  return BenchTrial{GridFromPointCloud(world_points, config.grid_resolution,
                                       config.grid_padding),
                    std::move(cloud), truth,
                    Pose2D(truth.x + dx, truth.y + dy, truth.theta + dtheta)};
}

namespace {

double RmseImpl(const std::vector<Pose2D>& estimates, const std::vector<Pose2D>& truths,
                bool with_theta) {
  if (estimates.size() != truths.size()) {
    throw std::invalid_argument("Rmse: estimate and truth counts differ");
  }
  if (estimates.empty()) {
    throw std::invalid_argument("Rmse: needs at least one pose pair");
  }
  double sum = 0.0;
  for (size_t i = 0; i < estimates.size(); ++i) {
    const double ex = estimates[i].x - truths[i].x;
    const double ey = estimates[i].y - truths[i].y;
    sum += ex * ex + ey * ey;
    if (with_theta) {
      const double et = NormalizeAngle(estimates[i].theta - truths[i].theta);
      sum += et * et;
    }
  }
  return std::sqrt(sum / static_cast<double>(estimates.size()));
}

}  // namespace

double Rmse(const std::vector<Pose2D>& estimates, const std::vector<Pose2D>& truths) {
  return RmseImpl(estimates, truths, /*with_theta=*/false);
}

double RmseWithTheta(const std::vector<Pose2D>& estimates, const std::vector<Pose2D>& truths) {
  return RmseImpl(estimates, truths, /*with_theta=*/true);
}

BenchResult RunBenchmark(const BenchConfig& config) {
  config.Validate();
  BenchResult result;

  struct Accumulator {
    std::vector<Pose2D> estimates;
    std::vector<Pose2D> truths;
    double iterations = 0.0;
    double time_us = 0.0;
  };
  std::map<Backend, Accumulator> accumulators;

  for (int trial = 0; trial < config.trials; ++trial) {
    const BenchTrial instance = GenerateTrial(config.seed, trial, config);

    std::map<Backend, double> final_costs;
    std::map<Backend, Pose2D> estimates;
    for (Backend backend : config.backends) {
      MatchRequest request;
      request.target_translation = instance.truth_pose.translation();
      request.initial_pose = instance.initial_pose;
      request.cloud = &instance.cloud;
      request.grid = &instance.grid;
      request.backend = backend;
      request.weights = config.weights;
      request.options = config.options;

      const MatchResult match = Match(request);

      TrialRecord record;
      record.trial = trial;
      record.backend = backend;
      record.initial_pose = instance.initial_pose;
      record.truth_pose = instance.truth_pose;
      record.estimated_pose = match.pose_estimate;
      record.final_cost = match.report.final_cost;
      record.iterations = match.report.iterations;
      record.time_us = match.report.wall_time_us;
      result.records.push_back(record);

      Accumulator& acc = accumulators[backend];
      acc.estimates.push_back(match.pose_estimate);
      acc.truths.push_back(instance.truth_pose);
      acc.iterations += match.report.iterations;
      acc.time_us += static_cast<double>(match.report.wall_time_us);

      final_costs[backend] = match.report.final_cost;
      estimates[backend] = match.pose_estimate;
    }

    if (final_costs.count(Backend::kResidual) && final_costs.count(Backend::kGraph)) {
      const double residual_cost = final_costs[Backend::kResidual];
      const double graph_cost = final_costs[Backend::kGraph];
      const double scale = std::max({std::abs(residual_cost), std::abs(graph_cost), 1e-300});
      if (std::abs(residual_cost - graph_cost) > kCostAgreementRelativeTolerance * scale) {
        MatchRequest request;
        request.target_translation = instance.truth_pose.translation();
        request.initial_pose = instance.initial_pose;
        request.cloud = &instance.cloud;
        request.grid = &instance.grid;
        request.weights = config.weights;
        const auto specs = MatchResidualSpecs(request);
        result.divergences.push_back(
            {trial, residual_cost, graph_cost,
             CostGradientInfNorm(specs, estimates[Backend::kResidual]),
             CostGradientInfNorm(specs, estimates[Backend::kGraph])});
      }
    }
  }

  for (const auto& [backend, acc] : accumulators) {
    BackendSummary summary;
    summary.rmse = config.rmse_with_theta ? RmseWithTheta(acc.estimates, acc.truths)
                                          : Rmse(acc.estimates, acc.truths);
    summary.mean_iterations = acc.iterations / static_cast<double>(config.trials);
    summary.mean_time_us = acc.time_us / static_cast<double>(config.trials);
    result.summaries[backend] = summary;
  }
  return result;
}

void WriteCsv(const BenchResult& result, std::ostream& out) {
  out << kBenchCsvHeader << "\n";
  for (const TrialRecord& record : result.records) {
    out << record.trial << ',' << ToString(record.backend) << ','
        << FormatDouble(record.initial_pose.x) << ',' << FormatDouble(record.initial_pose.y)
        << ',' << FormatDouble(record.initial_pose.theta) << ','
        << FormatDouble(record.truth_pose.x) << ',' << FormatDouble(record.truth_pose.y) << ','
        << FormatDouble(record.truth_pose.theta) << ','
        << FormatDouble(record.estimated_pose.x) << ','
        << FormatDouble(record.estimated_pose.y) << ','
        << FormatDouble(record.estimated_pose.theta) << ','
        << FormatDouble(record.final_cost) << ',' << record.iterations << ','
        << record.time_us << "\n";
  }
}

void WriteCsvFile(const BenchResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open CSV output file: " + path);
  }
  WriteCsv(result, out);
  if (!out.good()) {
    throw std::runtime_error("failed writing CSV output file: " + path);
  }
}

void WritePoseDump(const BenchResult& result, const BenchConfig& config, std::ostream& out) {
  out << "# trial init_x init_y init_theta";
  for (Backend backend : config.backends) {
    const std::string name = ToString(backend);
    out << ' ' << name << "_x " << name << "_y " << name << "_theta";
  }
  out << "\n";
  for (int trial = 0; trial < config.trials; ++trial) {
    const TrialRecord* first = nullptr;
    for (const TrialRecord& record : result.records) {
      if (record.trial == trial) {
        first = &record;
        break;
      }
    }
    if (first == nullptr) continue;
    out << trial << ' ' << FormatDouble(first->initial_pose.x) << ' '
        << FormatDouble(first->initial_pose.y) << ' '
        << FormatDouble(first->initial_pose.theta);
    for (Backend backend : config.backends) {
      for (const TrialRecord& record : result.records) {
        if (record.trial == trial && record.backend == backend) {
          out << ' ' << FormatDouble(record.estimated_pose.x) << ' '
              << FormatDouble(record.estimated_pose.y) << ' '
              << FormatDouble(record.estimated_pose.theta);
          break;
        }
      }
    }
    out << "\n";
  }
}

void PrintSummary(const BenchResult& result, std::ostream& out) {
  for (const auto& [backend, summary] : result.summaries) {
    out << ToString(backend) << ": rmse=" << FormatDouble(summary.rmse)
        << " m, mean_iterations=" << FormatDouble(summary.mean_iterations)
        << ", mean_time=" << FormatDouble(summary.mean_time_us / 1000.0) << " ms\n";
  }
  for (const auto& divergence : result.divergences) {
    out << "trial " << divergence.trial << ": backend final costs diverge ("
        << FormatDouble(divergence.residual_cost) << " vs "
        << FormatDouble(divergence.graph_cost)
        << "), gradient inf-norms " << FormatDouble(divergence.residual_gradient_inf_norm)
        << " / " << FormatDouble(divergence.graph_gradient_inf_norm) << "\n";
  }
}

}  // namespace scanmatch
