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

#ifndef EDGESIM_TOPOLOGY_HPP
#define EDGESIM_TOPOLOGY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "edgesim/geometry.hpp"
#include "edgesim/grid_index.hpp"
#include "edgesim/rng.hpp"

namespace edgesim {

struct BaseStation {
  std::int32_t id = 0;
  Point position;
  double capacity_bps = 10e9;
};

struct MecHost {
  std::int32_t id = 0;
  Point position;
  double capacity_bps = 10.41e9;
};

struct TopologyConfig {
  // Fixed counts reproduce the deployment sizes exactly; the stochastic
  // intensity mode keeps the plain HPPP for statistical checks.
  bool use_intensity = false;
  std::int32_t bs_count = 475;
  std::int32_t mh_count = 95;
  double bs_intensity_per_km2 = 118.75;
  double mh_intensity_per_km2 = 23.75;
  double bs_capacity_bps = 10e9;
  double mh_capacity_bps = 10.41e9;
};

/// Homogeneous Poisson point process over `area`: Poisson count with mean
/// intensity * area_km2, positions i.i.d. uniform.
std::vector<Point> sample_hppp(double intensity_per_km2, const Area& area,
                               rng::CounterRng& rng);

/// Conditioned HPPP: exactly `count` i.i.d. uniform points.
std::vector<Point> sample_hppp_fixed_count(std::size_t count, const Area& area,
                                           rng::CounterRng& rng);

/// Immutable deployment of base stations and MEC hosts with spatial indices
/// and the precomputed BS -> closest-MH association table.
class Topology {
 public:
  static Topology build(const Area& area, const TopologyConfig& config,
                        std::uint64_t seed);

  static Topology from_entities(const Area& area, std::vector<BaseStation> bs,
                                std::vector<MecHost> mh);

  const Area& area() const { return area_; }
  const std::vector<BaseStation>& base_stations() const { return base_stations_; }
  const std::vector<MecHost>& mec_hosts() const { return mec_hosts_; }

  std::int32_t nearest_bs(const Point& p) const { return bs_index_.nearest(p); }
  std::int32_t nearest_mh(const Point& p) const { return mh_index_.nearest(p); }

  /// MH closest to base station `bs_id`.
  std::int32_t ideal_mh(std::int32_t bs_id) const {
    return ideal_mh_[static_cast<std::size_t>(bs_id)];
  }

  const Point& bs_position(std::int32_t id) const {
    return base_stations_[static_cast<std::size_t>(id)].position;
  }
  const Point& mh_position(std::int32_t id) const {
    return mec_hosts_[static_cast<std::size_t>(id)].position;
  }

  double bs_mh_distance(std::int32_t bs_id, std::int32_t mh_id) const {
    return distance(bs_position(bs_id), mh_position(mh_id));
  }

  /// Writes `id,x,y,capacity_bps` CSVs; doubles round-trip exactly.
  void save_csv(const std::string& bs_path, const std::string& mh_path) const;
  static Topology load_csv(const Area& area, const std::string& bs_path,
                           const std::string& mh_path);

 private:
  Topology() = default;
  void finalize_indices();

  Area area_;
  std::vector<BaseStation> base_stations_;
  std::vector<MecHost> mec_hosts_;
  GridIndex bs_index_;
  GridIndex mh_index_;
  std::vector<std::int32_t> ideal_mh_;
};

}  // namespace edgesim

#endif  // EDGESIM_TOPOLOGY_HPP
