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

#ifndef EDGESIM_GEOMETRY_HPP
#define EDGESIM_GEOMETRY_HPP

#include <algorithm>
#include <cmath>

namespace edgesim {

/// Planar point, coordinates in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
  }
};

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(const Point& a, const Point& b) {
  return std::sqrt(squared_distance(a, b));
}

/// Rectangular service area with origin fixed at (0, 0).
struct Area {
  double width_m = 2000.0;
  double height_m = 2000.0;

  bool valid() const { return width_m > 0.0 && height_m > 0.0; }

  double area_km2() const { return width_m * height_m * 1e-6; }

  bool contains(const Point& p) const {
    return p.x >= 0.0 && p.x <= width_m && p.y >= 0.0 && p.y <= height_m;
  }

  /// Clamps a point to the area boundary.
  Point clip(const Point& p) const {
    return Point{std::clamp(p.x, 0.0, width_m), std::clamp(p.y, 0.0, height_m)};
  }
};

}  // namespace edgesim

#endif  // EDGESIM_GEOMETRY_HPP
