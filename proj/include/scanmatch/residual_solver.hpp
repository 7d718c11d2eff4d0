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

#ifndef SCANMATCH_RESIDUAL_SOLVER_HPP_
#define SCANMATCH_RESIDUAL_SOLVER_HPP_

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "scanmatch/costs.hpp"
#include "scanmatch/pose.hpp"
#include "scanmatch/solver_common.hpp"

namespace scanmatch {

// Residual-block backend: one 3-parameter pose optimized against a list of
// residual specs, Jacobians from Jet3 seeding, Gauss-Newton or
// Levenberg-Marquardt steps on the dense normal equations.
struct LeastSquaresProblem {
  Pose2D parameter;
  std::vector<ResidualSpec> blocks;
};

std::pair<Pose2D, SolverReport> SolveResidualBlocks(const LeastSquaresProblem& problem,
                                                    const SolverOptions& options);

// Fills the stacked residual vector and, when requested, the m x 3 Jacobian
// of a block list at the given pose parameters.
void EvaluateBlocks(const std::vector<ResidualSpec>& blocks, const Eigen::VectorXd& params,
                    Eigen::VectorXd* residuals, Eigen::MatrixXd* jacobian);

// Dense least-squares driver underneath SolveResidualBlocks, exposed for
// problems that are not scan matching (arbitrary parameter count, caller
// supplied residuals/Jacobian). `jacobian` is null when only values are
// needed. `update` applies a step to the parameters; when empty it defaults
// to plain addition.
using ResidualEvaluator = std::function<void(const Eigen::VectorXd& params,
                                             Eigen::VectorXd* residuals,
                                             Eigen::MatrixXd* jacobian)>;
using ParameterUpdate =
    std::function<void(Eigen::VectorXd* params, const Eigen::VectorXd& delta)>;

SolverReport SolveLeastSquares(const ResidualEvaluator& evaluate, int num_residuals,
                               Eigen::VectorXd* parameters, const SolverOptions& options,
                               const ParameterUpdate& update = nullptr);

}  // namespace scanmatch

#endif  // SCANMATCH_RESIDUAL_SOLVER_HPP_
