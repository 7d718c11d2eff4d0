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

#include "scanmatch/probability_grid.hpp"

#include <cmath>
#include <limits>

namespace scanmatch {

namespace {

constexpr double kSplatSigmaCells = 1.5;
constexpr double kSplatPeak = 0.9;
constexpr double kSplatBackground = 0.1;
constexpr double kSplatCutoffSigmas = 4.0;

double Odds(double probability) { return probability / (1.0 - probability); }

double ProbabilityFromOdds(double odds) { return odds / (1.0 + odds); }

}  // namespace

ProbabilityGrid::ProbabilityGrid(int width, int height, double resolution,
                                 const Eigen::Vector2d& origin, double initial_probability)
    : width_(width),
      height_(height),
      resolution_(resolution),
      inv_resolution_(1.0 / resolution),
      origin_(origin),
      cells_(static_cast<size_t>(width) * height, initial_probability) {
  if (width < 2 || height < 2) {
    throw std::invalid_argument("ProbabilityGrid: needs at least 2x2 cells");
  }
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("ProbabilityGrid: resolution must be positive");
  }
  if (initial_probability < 0.0 || initial_probability > 1.0) {
    throw std::invalid_argument("ProbabilityGrid: initial probability outside [0, 1]");
  }
}

double ProbabilityGrid::Extended(int ix, int iy) const {
  // Mirror-free linear extension keeps the spline C1 at the boundary.
  if (ix < 0) return 2.0 * Extended(0, iy) - Extended(1, iy);
  if (ix > width_ - 1) return 2.0 * Extended(width_ - 1, iy) - Extended(width_ - 2, iy);
  if (iy < 0) return 2.0 * At(ix, 0) - At(ix, 1);
  if (iy > height_ - 1) return 2.0 * At(ix, height_ - 1) - At(ix, height_ - 2);
  return At(ix, iy);
}

void ProbabilityGrid::SampleRow(int iy, int col, double* s0, double* s1, double* s2,
                                double* s3) const {
  *s0 = Extended(col - 1, iy);
  *s1 = Extended(col, iy);
  *s2 = Extended(col + 1, iy);
  *s3 = Extended(col + 2, iy);
}

double SplatKernel(double distance_cells) {
  if (distance_cells > kSplatCutoffSigmas * kSplatSigmaCells) {
    return kSplatBackground;
  }
  const double normalized = distance_cells / kSplatSigmaCells;
  return kSplatBackground +
         (kSplatPeak - kSplatBackground) * std::exp(-0.5 * normalized * normalized);
}

ProbabilityGrid GridFromPointCloud(const PointCloud2D& world_points, double resolution,
                                   int padding) {
  if (world_points.empty()) {
    throw std::invalid_argument("GridFromPointCloud: point cloud is empty");
  }
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("GridFromPointCloud: resolution must be positive");
  }

  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  for (const Eigen::Vector2d& p : world_points) {
    min_x = std::min(min_x, p.x());
    min_y = std::min(min_y, p.y());
    max_x = std::max(max_x, p.x());
    max_y = std::max(max_y, p.y());
  }

  // Snap the origin to the global cell lattice so identical clouds produce
  // identical grids regardless of padding.
  const int cell_min_x = static_cast<int>(std::floor(min_x / resolution)) - padding;
  const int cell_min_y = static_cast<int>(std::floor(min_y / resolution)) - padding;
  const int cell_max_x = static_cast<int>(std::floor(max_x / resolution)) + padding;
  const int cell_max_y = static_cast<int>(std::floor(max_y / resolution)) + padding;
  const Eigen::Vector2d origin(cell_min_x * resolution, cell_min_y * resolution);
  const int width = cell_max_x - cell_min_x + 1;
  const int height = cell_max_y - cell_min_y + 1;

  ProbabilityGrid grid(width, height, resolution, origin, kSplatBackground);

  const int radius = static_cast<int>(std::ceil(kSplatCutoffSigmas * kSplatSigmaCells)) + 1;
  for (const Eigen::Vector2d& p : world_points) {
    const Eigen::Vector2i center = grid.CellIndex(p);
    for (int iy = center.y() - radius; iy <= center.y() + radius; ++iy) {
      for (int ix = center.x() - radius; ix <= center.x() + radius; ++ix) {
        if (!grid.Contains(ix, iy)) continue;
        const double distance_cells = (grid.CellCenter(ix, iy) - p).norm() / resolution;
        const double value = SplatKernel(distance_cells);
        if (value > grid.At(ix, iy)) {
          grid.Set(ix, iy, value);
        }
      }
    }
  }
  return grid;
}

namespace {

void ApplyOdds(ProbabilityGrid* grid, int ix, int iy, double odds_factor,
               const OddsUpdate& update) {
  if (!grid->Contains(ix, iy)) return;
  const double updated = ProbabilityFromOdds(Odds(grid->At(ix, iy)) * odds_factor);
  grid->Set(ix, iy, std::clamp(updated, update.min_probability, update.max_probability));
}

// Visits the cells of the segment from `begin` to `end` in cell indices,
// excluding the end cell.
template <typename Visitor>
void BresenhamExclusive(Eigen::Vector2i begin, const Eigen::Vector2i& end, Visitor&& visit) {
  const int dx = std::abs(end.x() - begin.x());
  const int dy = -std::abs(end.y() - begin.y());
  const int sx = begin.x() < end.x() ? 1 : -1;
  const int sy = begin.y() < end.y() ? 1 : -1;
  int err = dx + dy;
  while (begin != end) {
    visit(begin.x(), begin.y());
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      begin.x() += sx;
    }
    if (e2 <= dx) {
      err += dx;
      begin.y() += sy;
    }
  }
}

}  // namespace

void InsertScan(ProbabilityGrid* grid, const Pose2D& pose, const PointCloud2D& cloud,
                double max_range, const OddsUpdate& update) {
  const Eigen::Vector2i sensor_cell = grid->CellIndex(pose.translation());
  for (const Eigen::Vector2d& point : cloud) {
    const double range = point.norm();
    // Returns at (or within rounding of) max_range carry no endpoint, only
    // free space along the ray.
    const bool is_hit = range < max_range * (1.0 - 1e-12);
    const Eigen::Vector2d endpoint = TransformPoint(pose, point);
    const Eigen::Vector2i end_cell = grid->CellIndex(endpoint);
    BresenhamExclusive(sensor_cell, end_cell, [&](int ix, int iy) {
      ApplyOdds(grid, ix, iy, update.miss_odds, update);
    });
    if (is_hit) {
      ApplyOdds(grid, end_cell.x(), end_cell.y(), update.hit_odds, update);
    }
  }
}

}  // namespace scanmatch
