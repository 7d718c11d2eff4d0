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

#include "scanmatch/costs.hpp"

namespace scanmatch {

double EvaluateCost(const std::vector<ResidualSpec>& specs, const Pose2D& pose) {
  const double pose_params[3] = {pose.x, pose.y, pose.theta};
  double cost = 0.0;
  std::vector<double> residuals;
  for (const ResidualSpec& spec : specs) {
    residuals.resize(spec.ResidualCount());
    EvaluateResiduals(spec, pose_params, residuals.data());
    for (double r : residuals) {
      cost += r * r;
    }
  }
  return cost;
}

double CostGradientInfNorm(const std::vector<ResidualSpec>& specs, const Pose2D& pose) {
  const Jet3 pose_params[3] = {Jet3::Variable(pose.x, 0), Jet3::Variable(pose.y, 1),
                               Jet3::Variable(pose.theta, 2)};
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
  std::vector<Jet3> residuals;
  for (const ResidualSpec& spec : specs) {
    residuals.resize(spec.ResidualCount());
    EvaluateResiduals(spec, pose_params, residuals.data());
    for (const Jet3& r : residuals) {
      gradient += r.a * r.v;  // J^T r, row by row
    }
  }
  return gradient.cwiseAbs().maxCoeff();
}

}  // namespace scanmatch
