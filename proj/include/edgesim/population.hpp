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

#ifndef EDGESIM_POPULATION_HPP
#define EDGESIM_POPULATION_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "edgesim/errors.hpp"

namespace edgesim {

enum class MobilityType : std::uint8_t { kCarPassenger = 0, kBusPassenger = 1, kPedestrian = 2 };

inline constexpr std::string_view to_string(MobilityType t) {
  switch (t) {
    case MobilityType::kCarPassenger: return "car";
    case MobilityType::kBusPassenger: return "bus";
    case MobilityType::kPedestrian: return "pedestrian";
  }
  return "?";
}

enum class ApplicationType : std::uint8_t { kVideo = 0, kAr = 1, kVr = 2 };

inline constexpr std::string_view to_string(ApplicationType a) {
  switch (a) {
    case ApplicationType::kVideo: return "video";
    case ApplicationType::kAr: return "ar";
    case ApplicationType::kVr: return "vr";
  }
  return "?";
}

/// Network-side demands of one application class.
struct AppParams {
  double throughput_bps = 0.0;
  double latency_ms = 0.0;
};

struct AppCatalog {
  AppParams video{70e6, 10.0};
  AppParams ar{100e6, 30.0};
  AppParams vr{132e6, 14.0};

  const AppParams& of(ApplicationType a) const {
    switch (a) {
      case ApplicationType::kVideo: return video;
      case ApplicationType::kAr: return ar;
      case ApplicationType::kVr: return vr;
    }
    return video;
  }
};

/// Percent of users of one mobility type running each application.
struct AppMix {
  double video_pct = 70.0;
  double ar_pct = 15.0;
  double vr_pct = 15.0;

  double sum() const { return video_pct + ar_pct + vr_pct; }
};

struct AppMixTable {
  AppMix car{70.0, 15.0, 15.0};
  AppMix bus{70.0, 15.0, 15.0};
  AppMix pedestrian{70.0, 30.0, 0.0};

  const AppMix& of(MobilityType t) const {
    switch (t) {
      case MobilityType::kCarPassenger: return car;
      case MobilityType::kBusPassenger: return bus;
      case MobilityType::kPedestrian: return pedestrian;
    }
    return car;
  }
};

struct PopulationSpec {
  std::int32_t car_passengers = 400;
  std::int32_t bus_passengers = 400;
  std::int32_t pedestrians = 450;
  std::int32_t passengers_per_bus = 10;

  std::int32_t total() const { return car_passengers + bus_passengers + pedestrians; }

  std::int32_t bus_count() const {
    if (bus_passengers == 0) return 0;
    return (bus_passengers + passengers_per_bus - 1) / passengers_per_bus;
  }
};

struct UserAgent {
  std::int32_t id = 0;
  MobilityType mobility = MobilityType::kPedestrian;
  ApplicationType application = ApplicationType::kVideo;
  double privacy_epsilon = 0.0;  // set per run; inf means no protection
  std::int32_t vehicle_id = -1;  // car or bus index; -1 for pedestrians
};

/// Lays out users with fixed id ranges: cars first, then bus passengers
/// (round-robin over buses), then pedestrians.
inline std::vector<UserAgent> make_population(const PopulationSpec& spec) {
  if (spec.car_passengers < 0 || spec.bus_passengers < 0 || spec.pedestrians < 0) {
    throw ConfigError("population counts must be >= 0");
  }
  if (spec.bus_passengers > 0 && spec.passengers_per_bus <= 0) {
    throw ConfigError("passengers_per_bus must be > 0 when there are bus passengers");
  }
  std::vector<UserAgent> users;
  users.reserve(static_cast<std::size_t>(spec.total()));
  std::int32_t id = 0;
  for (std::int32_t i = 0; i < spec.car_passengers; ++i, ++id) {
    users.push_back(UserAgent{id, MobilityType::kCarPassenger, ApplicationType::kVideo, 0.0, i});
  }
  const std::int32_t buses = spec.bus_count();
  for (std::int32_t i = 0; i < spec.bus_passengers; ++i, ++id) {
    users.push_back(UserAgent{id, MobilityType::kBusPassenger, ApplicationType::kVideo, 0.0,
                              buses > 0 ? i % buses : -1});
  }
  for (std::int32_t i = 0; i < spec.pedestrians; ++i, ++id) {
    users.push_back(UserAgent{id, MobilityType::kPedestrian, ApplicationType::kVideo, 0.0, -1});
  }
  return users;
}

}  // namespace edgesim

#endif  // EDGESIM_POPULATION_HPP
