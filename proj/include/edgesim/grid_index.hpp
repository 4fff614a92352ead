// Copyright 2026 The Edgesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDGESIM_GRID_INDEX_HPP
#define EDGESIM_GRID_INDEX_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "edgesim/errors.hpp"
#include "edgesim/geometry.hpp"

namespace edgesim {

/// Uniform grid bucketing over a rectangular area. Nearest-neighbor queries
/// expand cell rings outward and stop once the next ring cannot beat the best
/// candidate, so results are exact. Ties are broken by lowest id.
class GridIndex {
 public:
  GridIndex() = default;

  /// `cell_hint` is the target cell edge in meters; pass the expected
  /// nearest-neighbor distance (~1/sqrt(pi*lambda)) for good bucket loads.
  GridIndex(const Area& area, double cell_hint, std::span<const Point> points) {
    build(area, cell_hint, points);
  }

  void build(const Area& area, double cell_hint, std::span<const Point> points) {
    points_.assign(points.begin(), points.end());
    if (cell_hint <= 0.0) cell_hint = 1.0;
    nx_ = std::max<std::int32_t>(1, static_cast<std::int32_t>(area.width_m / cell_hint));
    ny_ = std::max<std::int32_t>(1, static_cast<std::int32_t>(area.height_m / cell_hint));
    // Keep the bucket table bounded even for tiny hints.
    while (static_cast<std::int64_t>(nx_) * ny_ > (1 << 22)) {
      nx_ = std::max(1, nx_ / 2);
      ny_ = std::max(1, ny_ / 2);
    }
    cell_w_ = area.width_m / nx_;
    cell_h_ = area.height_m / ny_;

    const std::size_t ncells = static_cast<std::size_t>(nx_) * ny_;
    std::vector<std::int32_t> counts(ncells + 1, 0);
    cell_of_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      cell_of_[i] = cell_index(points_[i]);
      ++counts[static_cast<std::size_t>(cell_of_[i]) + 1];
    }
    for (std::size_t c = 1; c <= ncells; ++c) counts[c] += counts[c - 1];
    offsets_ = counts;
    entries_.resize(points_.size());
    std::vector<std::int32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Ids ascend within each bucket because insertion order does.
    for (std::size_t i = 0; i < points_.size(); ++i) {
      entries_[static_cast<std::size_t>(cursor[cell_of_[i]]++)] =
          static_cast<std::int32_t>(i);
    }
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& point(std::int32_t id) const { return points_[static_cast<std::size_t>(id)]; }

  /// Id of the entity minimizing Euclidean distance to `q`; lowest id wins ties.
  std::int32_t nearest(const Point& q) const {
    if (points_.empty()) {
      throw ConfigError("nearest-neighbor query on an empty spatial index");
    }
    const std::int32_t qi = clamp_x(grid_x(q.x));
    const std::int32_t qj = clamp_y(grid_y(q.y));

    std::int32_t best_id = -1;
    double best_d2 = std::numeric_limits<double>::infinity();

    const std::int32_t max_ring = std::max(nx_, ny_);
    for (std::int32_t ring = 0; ring <= max_ring + 1; ++ring) {
      if (best_id >= 0) {
        // Any point in ring `ring` is at least (ring-1)*min_cell away.
        const double reach = (ring - 1) * std::min(cell_w_, cell_h_);
        if (reach > 0.0 && reach * reach > best_d2) break;
      }
      scan_ring(q, qi, qj, ring, best_id, best_d2);
    }
    return best_id;
  }

 private:
  std::int32_t grid_x(double x) const { return static_cast<std::int32_t>(x / cell_w_); }
  std::int32_t grid_y(double y) const { return static_cast<std::int32_t>(y / cell_h_); }
  std::int32_t clamp_x(std::int32_t i) const { return std::clamp(i, 0, nx_ - 1); }
  std::int32_t clamp_y(std::int32_t j) const { return std::clamp(j, 0, ny_ - 1); }

  std::int32_t cell_index(const Point& p) const {
    return clamp_y(grid_y(p.y)) * nx_ + clamp_x(grid_x(p.x));
  }

  void scan_cell(const Point& q, std::int32_t i, std::int32_t j,
                 std::int32_t& best_id, double& best_d2) const {
    if (i < 0 || i >= nx_ || j < 0 || j >= ny_) return;
    const std::size_t c = static_cast<std::size_t>(j) * nx_ + i;
    for (std::int32_t e = offsets_[c]; e < offsets_[c + 1]; ++e) {
      const std::int32_t id = entries_[static_cast<std::size_t>(e)];
      const double d2 = squared_distance(q, points_[static_cast<std::size_t>(id)]);
      if (d2 < best_d2 || (d2 == best_d2 && id < best_id)) {
        best_d2 = d2;
        best_id = id;
      }
    }
  }

  void scan_ring(const Point& q, std::int32_t qi, std::int32_t qj,
                 std::int32_t ring, std::int32_t& best_id, double& best_d2) const {
    if (ring == 0) {
      scan_cell(q, qi, qj, best_id, best_d2);
      return;
    }
    for (std::int32_t i = qi - ring; i <= qi + ring; ++i) {
      scan_cell(q, i, qj - ring, best_id, best_d2);
      scan_cell(q, i, qj + ring, best_id, best_d2);
    }
    for (std::int32_t j = qj - ring + 1; j <= qj + ring - 1; ++j) {
      scan_cell(q, qi - ring, j, best_id, best_d2);
      scan_cell(q, qi + ring, j, best_id, best_d2);
    }
  }

  std::vector<Point> points_;
  std::vector<std::int32_t> cell_of_;
  std::vector<std::int32_t> offsets_;
  std::vector<std::int32_t> entries_;
  std::int32_t nx_ = 1, ny_ = 1;
  double cell_w_ = 1.0, cell_h_ = 1.0;
};

}  // namespace edgesim

#endif  // EDGESIM_GRID_INDEX_HPP
