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

#ifndef SCANMATCH_PROBABILITY_GRID_HPP_
#define SCANMATCH_PROBABILITY_GRID_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "scanmatch/jet.hpp"
#include "scanmatch/pose.hpp"

namespace scanmatch {

namespace internal {

// Catmull-Rom segment through p1 and p2 evaluated at x in [0, 1]. Knot type K
// is double for the row pass and T for the column pass.
template <typename K, typename T>
T CubicHermite(const K& p0, const K& p1, const K& p2, const K& p3, const T& x) {
  const K a = 0.5 * (-p0 + 3.0 * p1 - 3.0 * p2 + p3);
  const K b = 0.5 * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3);
  const K c = 0.5 * (-p0 + p2);
  return p1 + x * (c + x * (b + x * a));
}

template <typename T>
T ClampScalar(const T& value, double lo, double hi) {
  if (ScalarValue(value) < lo) return T(lo);
  if (ScalarValue(value) > hi) return T(hi);
  return value;
}

}  // namespace internal

// 2D occupancy probabilities on a regular grid. The origin is the world
// coordinate of the corner of cell (0, 0); cell centers sit at
// origin + (index + 0.5) * resolution. Every cell holds a probability in
// [0, 1]. Reads (interpolation included) are safe to share across threads;
// insertion requires exclusive ownership.
class ProbabilityGrid {
 public:
  ProbabilityGrid(int width, int height, double resolution, const Eigen::Vector2d& origin,
                  double initial_probability = 0.5);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Eigen::Vector2d& origin() const { return origin_; }
  const std::vector<double>& cells() const { return cells_; }

  bool Contains(int ix, int iy) const {
    return ix >= 0 && ix < width_ && iy >= 0 && iy < height_;
  }

  double At(int ix, int iy) const { return cells_[static_cast<size_t>(iy) * width_ + ix]; }

  void Set(int ix, int iy, double probability) {
    cells_[static_cast<size_t>(iy) * width_ + ix] = std::clamp(probability, 0.0, 1.0);
  }

  Eigen::Vector2i CellIndex(const Eigen::Vector2d& world) const {
    return {static_cast<int>(std::floor((world.x() - origin_.x()) / resolution_)),
            static_cast<int>(std::floor((world.y() - origin_.y()) / resolution_))};
  }

  Eigen::Vector2d CellCenter(int ix, int iy) const {
    return origin_ + Eigen::Vector2d(ix + 0.5, iy + 0.5) * resolution_;
  }

  // C1-smooth bicubic (Catmull-Rom) lookup of the probability field at a
  // world point, generic over double and Jet3 so jets carry the map gradient.
  // Queries outside the grid are clamped to the boundary and return the
  // boundary value with zero gradient in the clamped direction; the result
  // is clamped to [0, 1]. Cell centers reproduce the stored values exactly.
  template <typename T>
  T Interpolate(const T& world_x, const T& world_y) const {
    const T u = internal::ClampScalar((world_x - origin_.x()) * inv_resolution_ - 0.5,
                                      0.0, width_ - 1.0);
    const T v = internal::ClampScalar((world_y - origin_.y()) * inv_resolution_ - 0.5,
                                      0.0, height_ - 1.0);

    int col = static_cast<int>(std::floor(ScalarValue(u)));
    int row = static_cast<int>(std::floor(ScalarValue(v)));
    col = std::min(col, width_ - 2);
    row = std::min(row, height_ - 2);

    const T local_x = u - static_cast<double>(col);
    const T local_y = v - static_cast<double>(row);

    // Interpolate each of the four sample rows along x, then the stacked
    // row values along y. Rows outside the grid are linearly extrapolated
    // from the two nearest ones, which keeps the surface C1 up to the edge.
    T row_values[4];
    for (int j = 0; j < 4; ++j) {
      const int iy = row - 1 + j;
      double s0, s1, s2, s3;
      SampleRow(iy, col, &s0, &s1, &s2, &s3);
      row_values[j] = internal::CubicHermite(s0, s1, s2, s3, local_x);
    }
    const T value = internal::CubicHermite(row_values[0], row_values[1], row_values[2],
                                           row_values[3], local_y);
    return internal::ClampScalar(value, 0.0, 1.0);
  }

 private:
  // Four consecutive x-samples of row iy starting at col - 1, with
  // out-of-range samples extended linearly (2*edge - inner).
  void SampleRow(int iy, int col, double* s0, double* s1, double* s2, double* s3) const;

  double Extended(int ix, int iy) const;

  int width_;
  int height_;
  double resolution_;
  double inv_resolution_;
  Eigen::Vector2d origin_;
  std::vector<double> cells_;
};

struct OddsUpdate {
  double hit_odds = 1.5;
  double miss_odds = 0.7;
  double min_probability = 0.02;
  double max_probability = 0.98;
};

// Builds a benchmark grid from world-frame points: every point becomes a
// Gaussian peak (sigma 1.5 cells, peak 0.9, truncated at 4 sigma) over a 0.1
// background, combined by per-cell maximum. Bounds cover all points plus
// `padding` cells on each side.
ProbabilityGrid GridFromPointCloud(const PointCloud2D& world_points, double resolution,
                                   int padding);

// Value of the splat kernel at a point-to-cell-center distance measured in
// cells. Exposed so tests can check the splat against the closed form.
double SplatKernel(double distance_cells);

// Ray-casts a scan taken at `pose` into the grid: the cell holding each
// transformed endpoint has its odds multiplied by hit_odds, cells traversed
// on the way (endpoint excluded) by miss_odds, probabilities clamped to
// [min, max]. Points at or beyond max_range mark no hit and only clear the
// ray. Out-of-grid cells are skipped; the grid never grows.
void InsertScan(ProbabilityGrid* grid, const Pose2D& pose, const PointCloud2D& cloud,
                double max_range, const OddsUpdate& update = OddsUpdate{});

}  // namespace scanmatch

#endif  // SCANMATCH_PROBABILITY_GRID_HPP_
