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

#ifndef EDGESIM_PRIVACY_HPP_
#define EDGESIM_PRIVACY_HPP_

#include <cstdint>
#include <string>

#include "edgesim/geometry.hpp"
#include "edgesim/rng.hpp"

namespace edgesim {

enum class MechanismKind {
  kPlanarLaplace,
  kUniformDisk,
};

std::string to_string(MechanismKind kind);
MechanismKind mechanism_from_string(const std::string& name);

// Radial CDF of the planar Laplace displacement: 1 - (1 + e*r) * exp(-e*r).
double planar_laplace_radial_cdf(double epsilon, double r);

// Inverse of the radial CDF for u in [0, 1). Exact at u = 0 (radius 0).
double planar_laplace_radius(double epsilon, double u);

// Adds planar-Laplace or uniform-disk noise to reported locations.
// epsilon = +infinity is the identity: positions pass through bitwise
// unchanged and no randomness is consumed.
class LocationObfuscator {
 public:
  LocationObfuscator(MechanismKind kind, double epsilon,
                     double disk_radius_factor = 3.0);

  MechanismKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  bool is_identity() const;

  // Radius of the uniform-disk mechanism (disk_radius_factor / epsilon).
  double disk_radius() const;

  Point obfuscate(Point true_pos, rng::CounterRng& rng) const;

  // Obfuscates and clips the result to the area; increments *clip_count
  // when clipping moved the point.
  Point obfuscate_clipped(Point true_pos, const Area& area,
                          rng::CounterRng& rng,
                          std::uint64_t* clip_count) const;

 private:
  MechanismKind kind_;
  double epsilon_;
  double disk_radius_factor_;
};

struct DisplacementStats {
  double mean_m = 0.0;
  double p50_m = 0.0;
  double p95_m = 0.0;
};

// Monte-Carlo displacement summary over n draws (nearest-rank percentiles).
DisplacementStats displacement_stats(const LocationObfuscator& mechanism,
                                     std::size_t n, std::uint64_t seed);

// Formats epsilon for file names and CSV cells: "inf" or the shortest
// round-trip decimal ("0.1", "0.01").
std::string epsilon_label(double epsilon);

// Accepts "inf" (case-insensitive) or a positive decimal.
double parse_epsilon(const std::string& text);

}  // namespace edgesim

#endif  // EDGESIM_PRIVACY_HPP_
