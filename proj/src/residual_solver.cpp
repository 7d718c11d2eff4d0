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

#include "scanmatch/residual_solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace scanmatch {

namespace {

constexpr double kDefaultInitialLambda = 1e-4;
constexpr double kDefaultLambdaAcceptScale = 0.5;
constexpr double kDefaultLambdaRejectScale = 4.0;
constexpr double kMinLmLambda = 1e-12;

}  // namespace

void EvaluateBlocks(const std::vector<ResidualSpec>& blocks, const Eigen::VectorXd& params,
                    Eigen::VectorXd* residuals, Eigen::MatrixXd* jacobian) {
  int row = 0;
  if (jacobian != nullptr) {
    const Jet3 pose[3] = {Jet3::Variable(params[0], 0), Jet3::Variable(params[1], 1),
                          Jet3::Variable(params[2], 2)};
    std::vector<Jet3> block_residuals;
    for (const ResidualSpec& block : blocks) {
      block_residuals.resize(block.ResidualCount());
      EvaluateResiduals(block, pose, block_residuals.data());
      for (const Jet3& r : block_residuals) {
        (*residuals)(row) = r.a;
        jacobian->row(row) = r.v.transpose();
        ++row;
      }
    }
  } else {
    const double pose[3] = {params[0], params[1], params[2]};
    std::vector<double> block_residuals;
    for (const ResidualSpec& block : blocks) {
      block_residuals.resize(block.ResidualCount());
      EvaluateResiduals(block, pose, block_residuals.data());
      for (double r : block_residuals) {
        (*residuals)(row) = r;
        ++row;
      }
    }
  }
}

SolverReport SolveLeastSquares(const ResidualEvaluator& evaluate, int num_residuals,
                               Eigen::VectorXd* parameters, const SolverOptions& options,
                               const ParameterUpdate& update) {
  options.Validate();
  if (num_residuals < 1) {
    throw std::invalid_argument("SolveLeastSquares: needs at least one residual");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto apply_update = [&update](Eigen::VectorXd* params, const Eigen::VectorXd& delta) {
    if (update) {
      update(params, delta);
    } else {
      *params += delta;
    }
  };

  const int n = static_cast<int>(parameters->size());
  const bool use_lm = options.algorithm == SolverAlgorithm::kLevenbergMarquardt;
  double lambda = options.initial_lm_lambda.value_or(kDefaultInitialLambda);
  const double accept_scale = options.lm_lambda_accept_scale.value_or(kDefaultLambdaAcceptScale);
  const double reject_scale = options.lm_lambda_reject_scale.value_or(kDefaultLambdaRejectScale);

  Eigen::VectorXd residuals(num_residuals);
  Eigen::MatrixXd jacobian(num_residuals, n);
  Eigen::VectorXd candidate_residuals(num_residuals);

  SolverReport report;
  evaluate(*parameters, &residuals, &jacobian);
  double cost = residuals.squaredNorm();
  report.initial_cost = cost;

  Eigen::VectorXd best_parameters = *parameters;
  double best_cost = cost;

  bool refresh_derivatives = false;  // (residuals, jacobian) valid at *parameters
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  report.termination = Termination::kMaxIterations;

  while (report.iterations < options.max_iterations) {
    if (refresh_derivatives) {
      evaluate(*parameters, &residuals, &jacobian);
      cost = residuals.squaredNorm();
      refresh_derivatives = false;
    }
    gradient = jacobian.transpose() * residuals;
    if (!std::isfinite(cost) || !gradient.allFinite()) {
      report.termination = Termination::kNumericalFailure;
      break;
    }
    if (gradient.cwiseAbs().maxCoeff() <= options.gradient_tolerance) {
      report.termination = Termination::kConverged;
      break;
    }
    hessian = jacobian.transpose() * jacobian;

    Eigen::MatrixXd damped = hessian;
    if (use_lm) {
      damped.diagonal() += lambda * hessian.diagonal();
    }
    Eigen::VectorXd delta;
    if (!CholeskySolve(damped, -gradient, &delta)) {
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

    Eigen::VectorXd candidate = *parameters;
    apply_update(&candidate, delta);
    evaluate(candidate, &candidate_residuals, nullptr);
    const double candidate_cost = candidate_residuals.squaredNorm();
    ++report.iterations;

    const bool accept =
        !use_lm || (std::isfinite(candidate_cost) && candidate_cost < cost);
    if (accept) {
      const double cost_change = std::abs(cost - candidate_cost);
      *parameters = candidate;
      cost = candidate_cost;
      refresh_derivatives = true;
      if (cost < best_cost) {
        best_cost = cost;
        best_parameters = *parameters;
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
      // Step rejected: the previous parameters stay untouched.
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
    *parameters = best_parameters;
    report.final_cost = best_cost;
  } else {
    report.final_cost = cost;
  }
  report.wall_time_us = std::chrono::duration_cast<std::chrono::microseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return report;
}

std::pair<Pose2D, SolverReport> SolveResidualBlocks(const LeastSquaresProblem& problem,
                                                    const SolverOptions& options) {
  if (problem.blocks.empty()) {
    throw std::invalid_argument("SolveResidualBlocks: problem has no residual blocks");
  }
  int num_residuals = 0;
  for (const ResidualSpec& block : problem.blocks) {
    num_residuals += block.ResidualCount();
  }
  if (num_residuals < 1) {
    throw std::invalid_argument("SolveResidualBlocks: total residual count is zero");
  }

  Eigen::VectorXd params(3);
  params << problem.parameter.x, problem.parameter.y, problem.parameter.theta;

  const auto evaluator = [&problem](const Eigen::VectorXd& p, Eigen::VectorXd* r,
                                    Eigen::MatrixXd* j) { EvaluateBlocks(problem.blocks, p, r, j); };
  const auto update = [](Eigen::VectorXd* p, const Eigen::VectorXd& delta) {
    *p += delta;
    (*p)(2) = NormalizeAngle((*p)(2));
  };

  SolverReport report = SolveLeastSquares(evaluator, num_residuals, &params, options, update);
  return {Pose2D(params(0), params(1), params(2)), report};
}

}  // namespace scanmatch
