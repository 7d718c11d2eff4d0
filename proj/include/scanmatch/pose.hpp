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

#ifndef SCANMATCH_POSE_HPP_
#define SCANMATCH_POSE_HPP_

#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "scanmatch/jet.hpp"

namespace scanmatch {

// Wraps an angle into [-pi, pi). Works on double and on Jet3; the wrap
// subtracts a locally constant multiple of 2*pi, so derivatives pass through
// untouched.
template <typename T>
T NormalizeAngle(const T& angle) {
  constexpr double kPi = std::numbers::pi;
  constexpr double kTwoPi = 2.0 * kPi;
  T result = angle - kTwoPi * std::floor((ScalarValue(angle) + kPi) / kTwoPi);
  // Rounding can land the wrapped value exactly on +pi; fold it back.
  if (ScalarValue(result) >= kPi) {
    result = result - kTwoPi;
  }
  if (ScalarValue(result) < -kPi) {
    result = result + kTwoPi;
  }
  return result;
}

// Planar rigid transform (x, y, theta); the three optimized parameters.
// theta is kept normalized to [-pi, pi) by the constructor and by every
// solver update.
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2D() = default;
  Pose2D(double x_in, double y_in, double theta_in)
      : x(x_in), y(y_in), theta(NormalizeAngle(theta_in)) {}

  Eigen::Vector2d translation() const { return {x, y}; }
};

using PointCloud2D = std::vector<Eigen::Vector2d>;

// Applies R(theta) * p + t with pose parameters of scalar type T (double or
// Jet3), so the same code path yields values and pose derivatives.
template <typename T>
void TransformPoint(const T pose[3], const Eigen::Vector2d& point, T* world_x, T* world_y) {
  using std::cos;
  using std::sin;
  const T cos_theta = cos(pose[2]);
  const T sin_theta = sin(pose[2]);
  *world_x = cos_theta * point.x() - sin_theta * point.y() + pose[0];
  *world_y = sin_theta * point.x() + cos_theta * point.y() + pose[1];
}

inline Eigen::Vector2d TransformPoint(const Pose2D& pose, const Eigen::Vector2d& point) {
  const double pose_params[3] = {pose.x, pose.y, pose.theta};
  double wx, wy;
  TransformPoint(pose_params, point, &wx, &wy);
  return {wx, wy};
}

// a then b: the pose of frame b expressed through frame a.
inline Pose2D Compose(const Pose2D& a, const Pose2D& b) {
  const Eigen::Vector2d t = TransformPoint(a, b.translation());
  return Pose2D(t.x(), t.y(), a.theta + b.theta);
}

inline Pose2D Inverse(const Pose2D& pose) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return Pose2D(-c * pose.x - s * pose.y, s * pose.x - c * pose.y, -pose.theta);
}

// Relative pose taking a to b, i.e. Compose(a, Between(a, b)) == b.
inline Pose2D Between(const Pose2D& a, const Pose2D& b) { return Compose(Inverse(a), b); }

inline std::ostream& operator<<(std::ostream& os, const Pose2D& pose) {
  return os << "(" << pose.x << ", " << pose.y << ", " << pose.theta << ")";
}

}  // namespace scanmatch

#endif  // SCANMATCH_POSE_HPP_
