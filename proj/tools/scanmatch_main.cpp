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

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scanmatch/bench.hpp"
#include "scanmatch/scan_matcher.hpp"
#include "scanmatch/sim.hpp"

namespace {

bool ParseBackend(const std::string& name, scanmatch::Backend* backend) {
  if (name == "residual") {
    *backend = scanmatch::Backend::kResidual;
    return true;
  }
  if (name == "graph") {
    *backend = scanmatch::Backend::kGraph;
    return true;
  }
  return false;
}

int RunBench(const std::string& backend_name, const std::string& out_path,
             const std::string& dump_path, scanmatch::BenchConfig config) {
  if (backend_name == "both") {
    config.backends = {scanmatch::Backend::kResidual, scanmatch::Backend::kGraph};
  } else {
    scanmatch::Backend backend;
    if (!ParseBackend(backend_name, &backend)) {
      std::cerr << "unknown backend '" << backend_name << "'\n";
      return 1;
    }
    config.backends = {backend};
  }

  const scanmatch::BenchResult result = scanmatch::RunBenchmark(config);
  if (!out_path.empty()) {
    scanmatch::WriteCsvFile(result, out_path);
  } else {
    scanmatch::WriteCsv(result, std::cout);
  }
  if (!dump_path.empty()) {
    std::ofstream dump(dump_path);
    if (!dump) {
      std::cerr << "cannot open pose dump file: " << dump_path << "\n";
      return 1;
    }
    scanmatch::WritePoseDump(result, config, dump);
  }
  scanmatch::PrintSummary(result, std::cerr);
  return 0;
}

int RunSim(const std::string& scenario_path, const std::string& backend_name,
           const std::string& out_prefix, scanmatch::SimOptions options) {
  if (!ParseBackend(backend_name, &options.backend)) {
    std::cerr << "unknown backend '" << backend_name << "' (expected residual or graph)\n";
    return 1;
  }
  const scanmatch::Scenario scenario = scanmatch::LoadScenario(scenario_path);
  const scanmatch::SimResult result = scanmatch::RunMapping(scenario, options, out_prefix);

  double total_match_ms = 0.0;
  double total_iterations = 0.0;
  for (const scanmatch::SolverReport& report : result.reports) {
    total_match_ms += static_cast<double>(report.wall_time_us) / 1000.0;
    total_iterations += report.iterations;
  }
  std::cerr << "steps=" << result.trajectory.size()
            << " matches=" << result.reports.size()
            << " total_match_time_ms=" << total_match_ms
            << " mean_iterations="
            << (result.reports.empty() ? 0.0
                                       : total_iterations /
                                             static_cast<double>(result.reports.size()))
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D lidar scan matching: solver benchmark and mapping simulator"};
  app.require_subcommand(1);

  // bench
  auto* bench = app.add_subcommand("bench", "run the seeded random solver benchmark");
  scanmatch::BenchConfig config;
  std::string bench_backend = "both";
  std::string out_path;
  std::string dump_path;
  double tolerance = 1e-10;
  bench->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
  bench->add_option("--trials", config.trials, "number of trials")->capture_default_str();
  bench->add_option("--points", config.points_per_cloud, "points per cloud")
      ->capture_default_str();
  bench->add_option("--backend", bench_backend, "residual|graph|both")->capture_default_str();
  bench->add_option("--tolerance", tolerance, "residual-reduction (function) tolerance")
      ->capture_default_str();
  bench->add_option("--max-iterations", config.options.max_iterations, "iteration cap")
      ->capture_default_str();
  bench->add_option("--out", out_path, "CSV output path (stdout when omitted)");
  bench->add_option("--dump-poses", dump_path, "write a plain-text pose table for plotting");
  bench->add_option("--perturb-translation", config.max_translation_perturbation,
                    "initial-pose translation perturbation bound, meters")
      ->capture_default_str();
  bench->add_option("--perturb-rotation", config.max_rotation_perturbation,
                    "initial-pose rotation perturbation bound, radians")
      ->capture_default_str();
  bench->add_option("--resolution", config.grid_resolution, "grid resolution, meters/cell")
      ->capture_default_str();
  bench->add_flag("--rmse-with-theta", config.rmse_with_theta,
                  "include the heading error in the RMSE");

  // sim
  auto* sim = app.add_subcommand("sim", "run the mapping simulator on a scenario file");
  scanmatch::SimOptions sim_options;
  std::string scenario_path;
  std::string sim_backend;
  std::string out_prefix;
  double budget_ms = 0.0;
  sim->add_option("--scenario", scenario_path, "scenario file")->required();
  sim->add_option("--backend", sim_backend, "residual|graph")->required();
  sim->add_option("--out", out_prefix, "output prefix for <prefix>_map.pgm and "
                                       "<prefix>_trajectory.csv")
      ->required();
  sim->add_option("--odom-sigma-xy", sim_options.odometry_sigma_xy,
                  "odometry translation noise sigma per step, meters")
      ->capture_default_str();
  sim->add_option("--odom-sigma-theta", sim_options.odometry_sigma_theta,
                  "odometry rotation noise sigma per step, radians")
      ->capture_default_str();
  sim->add_option("--max-total-match-ms", budget_ms,
                  "stop matching once this much match wall time is spent");

  try {
    app.parse(argc, argv);
    if (bench->parsed()) {
      config.options.function_tolerance = tolerance;
      return RunBench(bench_backend, out_path, dump_path, config);
    }
    if (sim->parsed()) {
      if (budget_ms > 0.0) {
        sim_options.max_total_match_ms = budget_ms;
      }
      return RunSim(scenario_path, sim_backend, out_prefix, sim_options);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
