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

#include "edgesim/privacy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/lambert_w.hpp>

#include "edgesim/csv.hpp"
#include "edgesim/errors.hpp"

namespace edgesim {

std::string to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kPlanarLaplace: return "planar-laplace";
    case MechanismKind::kUniformDisk: return "uniform-disk";
  }
  return "unknown";
}

MechanismKind mechanism_from_string(const std::string& name) {
  if (name == "planar-laplace") return MechanismKind::kPlanarLaplace;
  if (name == "uniform-disk") return MechanismKind::kUniformDisk;
  throw ConfigError("unknown mechanism '" + name +
                    "' (expected planar-laplace or uniform-disk)");
}

double planar_laplace_radial_cdf(double epsilon, double r) {
  if (r <= 0.0) return 0.0;
  const double er = epsilon * r;
  return 1.0 - (1.0 + er) * std::exp(-er);
}

double planar_laplace_radius(double epsilon, double u) {
  // r solves u = 1 - (1 + e*r)*exp(-e*r); substituting w = -(1 + e*r)
  // gives w*exp(w) = (u - 1)/e with w <= -1, the Lambert W lower branch.
  constexpr double kNegInvE = -0.36787944117144233;
  const double x = (u - 1.0) / std::numbers::e;
  double w = -1.0;
  if (x > kNegInvE) w = boost::math::lambert_wm1(x);
  return -(w + 1.0) / epsilon;
}

LocationObfuscator::LocationObfuscator(MechanismKind kind, double epsilon,
                                       double disk_radius_factor)
    : kind_(kind), epsilon_(epsilon), disk_radius_factor_(disk_radius_factor) {
  if (std::isnan(epsilon_) || epsilon_ <= 0.0) {
    throw ConfigError("epsilon must be positive or infinite, got " +
                      (std::isnan(epsilon_) ? std::string("nan")
                                            : [&] {
                                                std::string s;
                                                append_number(s, epsilon_);
                                                return s;
                                              }()));
  }
  if (!(disk_radius_factor_ > 0.0)) {
    throw ConfigError("uniform-disk radius factor must be > 0");
  }
}

bool LocationObfuscator::is_identity() const {
  return std::isinf(epsilon_);
}

double LocationObfuscator::disk_radius() const {
  return disk_radius_factor_ / epsilon_;
}

Point LocationObfuscator::obfuscate(Point true_pos, rng::CounterRng& rng) const {
  if (is_identity()) return true_pos;
  double r = 0.0;
  switch (kind_) {
    case MechanismKind::kPlanarLaplace:
      r = planar_laplace_radius(epsilon_, rng.next_double());
      break;
    case MechanismKind::kUniformDisk:
      r = disk_radius() * std::sqrt(rng.next_double());
      break;
  }
  const double theta = 2.0 * std::numbers::pi * rng.next_double();
  return Point{true_pos.x + r * std::cos(theta), true_pos.y + r * std::sin(theta)};
}

Point LocationObfuscator::obfuscate_clipped(Point true_pos, const Area& area,
                                            rng::CounterRng& rng,
                                            std::uint64_t* clip_count) const {
  const Point noisy = obfuscate(true_pos, rng);
  if (area.contains(noisy)) return noisy;
  if (clip_count) ++*clip_count;
  return area.clip(noisy);
}

DisplacementStats displacement_stats(const LocationObfuscator& mechanism,
                                     std::size_t n, std::uint64_t seed) {
  DisplacementStats stats;
  if (n == 0) return stats;
  rng::CounterRng rng(seed, rng::Stream::kGeneric);
  std::vector<double> radii(n);
  double sum = 0.0;
  const Point origin{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = mechanism.obfuscate(origin, rng);
    radii[i] = distance(origin, p);
    sum += radii[i];
  }
  std::sort(radii.begin(), radii.end());
  auto nearest_rank = [&](double q) {
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    return radii[std::max<std::size_t>(rank, 1) - 1];
  };
  stats.mean_m = sum / static_cast<double>(n);
  stats.p50_m = nearest_rank(0.50);
  stats.p95_m = nearest_rank(0.95);
  return stats;
}

std::string epsilon_label(double epsilon) {
  if (std::isinf(epsilon)) return "inf";
  std::string s;
  append_number(s, epsilon);
  return s;
}

double parse_epsilon(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  double value = 0.0;
  try {
    value = parse_double(text, "epsilon");
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  if (std::isnan(value) || value <= 0.0) {
    throw ConfigError("epsilon must be positive or 'inf', got '" + text + "'");
  }
  return value;
}

}  // namespace edgesim
