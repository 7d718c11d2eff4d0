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

#include "scanmatch/solver_common.hpp"

#include <cmath>
#include <stdexcept>

namespace scanmatch {

std::string ToString(Termination termination) {
  switch (termination) {
    case Termination::kConverged:
      return "Converged";
    case Termination::kMaxIterations:
      return "MaxIterations";
    case Termination::kNumericalFailure:
      return "NumericalFailure";
  }
  return "Unknown";
}

void SolverOptions::Validate() const {
  if (max_iterations < 1) {
    throw std::invalid_argument("SolverOptions: max_iterations must be >= 1");
  }
  if (!(function_tolerance > 0.0) || !(gradient_tolerance > 0.0) ||
      !(parameter_tolerance > 0.0)) {
    throw std::invalid_argument("SolverOptions: tolerances must be positive");
  }
  if (initial_lm_lambda && !(*initial_lm_lambda > 0.0)) {
    throw std::invalid_argument("SolverOptions: initial_lm_lambda must be positive");
  }
}

bool CholeskySolve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd* x) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.size() != n) {
    throw std::invalid_argument("CholeskySolve: dimension mismatch");
  }
  if (!a.allFinite() || !b.allFinite()) {
    return false;
  }

  // Lower-triangular factor, column by column.
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) {
      diag -= l(j, k) * l(j, k);
    }
    if (!(diag > 0.0)) {
      return false;
    }
    l(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double sum = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) {
        sum -= l(i, k) * l(j, k);
      }
      l(i, j) = sum / l(j, j);
    }
  }

  // Forward substitution L y = b, then back substitution L^T x = y.
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = b(i);
    for (Eigen::Index k = 0; k < i; ++k) {
      sum -= l(i, k) * y(k);
    }
    y(i) = sum / l(i, i);
  }
  x->resize(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double sum = y(i);
    for (Eigen::Index k = i + 1; k < n; ++k) {
      sum -= l(k, i) * (*x)(k);
    }
    (*x)(i) = sum / l(i, i);
  }
  return true;
}

}  // namespace scanmatch
