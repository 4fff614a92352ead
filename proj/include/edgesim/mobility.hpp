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

#ifndef EDGESIM_MOBILITY_HPP
#define EDGESIM_MOBILITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "edgesim/geometry.hpp"
#include "edgesim/population.hpp"

namespace edgesim {

/// Synthetic mobility model: a Manhattan grid of streets with sidewalks
/// offset from them. Vehicles move on street lines only, pedestrians on
/// sidewalk lines only (crosswalk points are shared).
struct MobilityParams {
  double block_m = 100.0;
  double sidewalk_offset_m = 5.0;
  double car_speed_min_mps = 8.0;
  double car_speed_max_mps = 14.0;
  double bus_speed_min_mps = 6.0;
  double bus_speed_max_mps = 10.0;
  double ped_speed_min_mps = 1.0;
  double ped_speed_max_mps = 1.9;
  std::int32_t traffic_light_cycle_s = 30;
  double bus_stop_interval_m = 500.0;
  std::int32_t bus_stop_duration_s = 20;

  double max_speed(MobilityType t) const {
    switch (t) {
      case MobilityType::kCarPassenger: return car_speed_max_mps;
      case MobilityType::kBusPassenger: return bus_speed_max_mps;
      case MobilityType::kPedestrian: return ped_speed_max_mps;
    }
    return 0.0;
  }
};

/// Dense per-second position store, timestep-major.
class MobilityTrace {
 public:
  MobilityTrace() = default;
  MobilityTrace(std::size_t users, std::size_t steps, double resolution_s)
      : users_(users), steps_(steps), resolution_s_(resolution_s),
        xs_(users * steps, 0.0), ys_(users * steps, 0.0) {}

  std::size_t users() const { return users_; }
  std::size_t steps() const { return steps_; }
  double resolution_s() const { return resolution_s_; }

  Point at(std::size_t user, std::size_t t) const {
    const std::size_t i = t * users_ + user;
    return Point{xs_[i], ys_[i]};
  }

  void set(std::size_t user, std::size_t t, const Point& p) {
    const std::size_t i = t * users_ + user;
    xs_[i] = p.x;
    ys_[i] = p.y;
  }

  /// Canonical positions CSV: header `t,user_id,x,y`, rows in (t, user) order.
  void save_csv(const std::string& path) const;

 private:
  std::size_t users_ = 0;
  std::size_t steps_ = 0;
  double resolution_s_ = 1.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

MobilityTrace generate_synthetic(const PopulationSpec& population,
                                 const MobilityParams& params, const Area& area,
                                 double duration_s, double resolution_s,
                                 std::uint64_t seed);

/// Ingestion warnings (counted, never fatal).
struct IngestStats {
  std::size_t clipped_positions = 0;
  std::size_t speed_cap_violations = 0;
};

/// Reads the canonical positions CSV. Every declared user must have a
/// position at every timestep (gap -> TraceError naming user and time);
/// out-of-area points are clipped and counted.
MobilityTrace ingest_positions_csv(const std::string& path,
                                   const PopulationSpec& population,
                                   const MobilityParams& params, const Area& area,
                                   double duration_s, double resolution_s,
                                   IngestStats* stats = nullptr);

/// Entity-id prefixes classifying vehicles in floating-car-data XML.
struct FcdEntityPrefixes {
  std::string car = "car";
  std::string bus = "bus";
  std::string pedestrian = "ped";
};

/// Reads floating-car-data XML (timestep elements holding vehicle/person
/// elements with id/x/y attributes) and expands vehicle traces to passenger
/// traces: users of each mobility class are assigned round-robin over the
/// lexicographically sorted entity ids of that class.
MobilityTrace ingest_fcd_xml(const std::string& path,
                             const PopulationSpec& population,
                             const MobilityParams& params,
                             const FcdEntityPrefixes& prefixes, const Area& area,
                             double duration_s, double resolution_s,
                             IngestStats* stats = nullptr);

/// Timesteps in [0, duration/resolution).
std::size_t step_count(double duration_s, double resolution_s);

}  // namespace edgesim

#endif  // EDGESIM_MOBILITY_HPP
