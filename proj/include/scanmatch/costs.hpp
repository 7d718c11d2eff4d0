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

#ifndef SCANMATCH_COSTS_HPP_
#define SCANMATCH_COSTS_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "scanmatch/jet.hpp"
#include "scanmatch/pose.hpp"
#include "scanmatch/probability_grid.hpp"

namespace scanmatch {

enum class ResidualKind { kOccupiedSpace, kTranslationDelta, kRotationDelta };

// One scan-matching constraint: which residual it contributes, its weight,
// and the targets or map data the residual needs. Both solver backends
// consume the same specs so their costs are directly comparable.
struct ResidualSpec {
  ResidualKind kind = ResidualKind::kTranslationDelta;
  double weight = 0.0;

  const PointCloud2D* cloud = nullptr;      // OccupiedSpace
  const ProbabilityGrid* grid = nullptr;    // OccupiedSpace
  bool normalize_by_point_count = true;     // OccupiedSpace: scale weight by 1/sqrt(n)
  Eigen::Vector2d target_translation = Eigen::Vector2d::Zero();  // TranslationDelta
  double target_rotation = 0.0;             // RotationDelta

  int ResidualCount() const {
    switch (kind) {
      case ResidualKind::kOccupiedSpace:
        return static_cast<int>(cloud->size());
      case ResidualKind::kTranslationDelta:
        return 2;
      case ResidualKind::kRotationDelta:
        return 1;
    }
    return 0;
  }

  static ResidualSpec OccupiedSpace(const PointCloud2D& cloud, const ProbabilityGrid& grid,
                                    double weight, bool normalize_by_point_count = true) {
    if (cloud.empty()) {
      throw std::invalid_argument("OccupiedSpace residual: point cloud is empty");
    }
    if (weight < 0.0) {
      throw std::invalid_argument("OccupiedSpace residual: negative weight");
    }
    ResidualSpec spec;
    spec.kind = ResidualKind::kOccupiedSpace;
    spec.weight = weight;
    spec.cloud = &cloud;
    spec.grid = &grid;
    spec.normalize_by_point_count = normalize_by_point_count;
    return spec;
  }

  static ResidualSpec TranslationDelta(const Eigen::Vector2d& target, double weight) {
    if (weight < 0.0) {
      throw std::invalid_argument("TranslationDelta residual: negative weight");
    }
    ResidualSpec spec;
    spec.kind = ResidualKind::kTranslationDelta;
    spec.weight = weight;
    spec.target_translation = target;
    return spec;
  }

  static ResidualSpec RotationDelta(double target, double weight) {
    if (weight < 0.0) {
      throw std::invalid_argument("RotationDelta residual: negative weight");
    }
    ResidualSpec spec;
    spec.kind = ResidualKind::kRotationDelta;
    spec.weight = weight;
    spec.target_rotation = target;
    return spec;
  }
};

// Evaluates the residual vector of one spec at pose parameters (x, y, theta)
// of scalar type T. Seeding the parameters as Jet3 variables yields the
// residual Jacobian alongside the values.
//
// OccupiedSpace: r_i = (w / sqrt(n)) * (1 - M(T(pose) p_i))
// TranslationDelta: [w * (x - tx), w * (y - ty)]
// RotationDelta: [w * wrap(theta - target)]
template <typename T>
void EvaluateResiduals(const ResidualSpec& spec, const T pose[3], T* residuals) {
  switch (spec.kind) {
    case ResidualKind::kOccupiedSpace: {
      if (spec.cloud->empty()) {
        throw std::invalid_argument("OccupiedSpace residual: point cloud is empty");
      }
      const double scale =
          spec.normalize_by_point_count
              ? spec.weight / std::sqrt(static_cast<double>(spec.cloud->size()))
              : spec.weight;
      for (size_t i = 0; i < spec.cloud->size(); ++i) {
        T wx, wy;
        TransformPoint(pose, (*spec.cloud)[i], &wx, &wy);
        residuals[i] = scale * (1.0 - spec.grid->Interpolate(wx, wy));
      }
      break;
    }
    case ResidualKind::kTranslationDelta:
      residuals[0] = spec.weight * (pose[0] - spec.target_translation.x());
      residuals[1] = spec.weight * (pose[1] - spec.target_translation.y());
      break;
    case ResidualKind::kRotationDelta:
      residuals[0] = spec.weight * NormalizeAngle(pose[2] - spec.target_rotation);
      break;
  }
}

// Sum of squared residuals over a set of specs at a pose.
double EvaluateCost(const std::vector<ResidualSpec>& specs, const Pose2D& pose);

// Infinity norm of J^T r over a set of specs at a pose; the solvers' measure
// of stationarity.
double CostGradientInfNorm(const std::vector<ResidualSpec>& specs, const Pose2D& pose);

}  // namespace scanmatch

#endif  // SCANMATCH_COSTS_HPP_
