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

#ifndef SCANMATCH_SOLVER_COMMON_HPP_
#define SCANMATCH_SOLVER_COMMON_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace scanmatch {

enum class SolverAlgorithm { kGaussNewton, kLevenbergMarquardt };

enum class Termination { kConverged, kMaxIterations, kNumericalFailure };

std::string ToString(Termination termination);

// Shared solver configuration. The Levenberg-Marquardt damping schedule is
// optional: when unset, each backend applies its own default (the residual
// backend starts at 1e-4 with x0.5 on accept / x4 on reject, the graph
// backend at 1e-3 with x1/3 on accept / x2 on reject).
struct SolverOptions {
  SolverAlgorithm algorithm = SolverAlgorithm::kLevenbergMarquardt;
  int max_iterations = 100;
  double function_tolerance = 1e-10;
  double gradient_tolerance = 1e-10;
  double parameter_tolerance = 1e-12;
  std::optional<double> initial_lm_lambda;
  std::optional<double> lm_lambda_accept_scale;
  std::optional<double> lm_lambda_reject_scale;

  void Validate() const;
};

struct SolverReport {
  int iterations = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  std::int64_t wall_time_us = 0;
  Termination termination = Termination::kConverged;
};

// Damping above this aborts a Levenberg-Marquardt run as a numerical failure.
inline constexpr double kMaxLmLambda = 1e32;

// Solves A x = b for symmetric positive definite A through an L L^T
// factorization. Returns false on a non-positive pivot (the LM caller then
// raises the damping) or non-finite input.
bool CholeskySolve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd* x);

}  // namespace scanmatch

#endif  // SCANMATCH_SOLVER_COMMON_HPP_
