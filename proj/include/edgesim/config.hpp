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

#ifndef EDGESIM_CONFIG_HPP_
#define EDGESIM_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgesim/geometry.hpp"
#include "edgesim/link_model.hpp"
#include "edgesim/mobility.hpp"
#include "edgesim/population.hpp"
#include "edgesim/privacy.hpp"
#include "edgesim/topology.hpp"

namespace edgesim {

// Full experiment description. The on-disk form is a single flat JSON
// object of dotted keys ("radio.tx_power_dbm": 30); unknown keys are
// rejected with an exhaustive listing. Every field here has a default, so
// the empty object {} is a valid config.
struct SimConfig {
  Area area;
  TopologyConfig topology;
  std::uint64_t topology_seed = 0;
  // When set, the deployment is redrawn per seed instead of shared.
  bool topology_resample_per_seed = false;

  PopulationSpec population;

  std::string mobility_source = "synthetic";  // synthetic | csv | fcd
  std::string mobility_trace_path;
  MobilityParams mobility;
  FcdEntityPrefixes fcd_prefixes;

  MechanismKind mechanism = MechanismKind::kPlanarLaplace;
  double uniform_disk_radius_factor = 3.0;
  std::vector<double> epsilons;  // default {inf, 0.1, 0.01}

  RadioParams radio;
  LatencyParams latency;
  AppCatalog apps;
  AppMixTable mix;

  double duration_s = 3600.0;
  double resolution_s = 1.0;
  std::vector<std::uint64_t> seeds;  // default {1..30}
  std::int32_t threads = 0;          // 0: machine parallelism
  bool pf_iterate_after_denial = false;

  SimConfig();

  static SimConfig from_json(const nlohmann::json& j);
  static SimConfig load(const std::string& path);

  // Canonical form: every key present, stable ordering.
  nlohmann::json to_json() const;
  void save(const std::string& path) const;

  // FNV-1a over the canonical serialization; invariant under key reordering
  // of the input file.
  std::uint64_t config_hash() const;
  std::string config_hash_hex() const;

  void validate() const;
};

}  // namespace edgesim

#endif  // EDGESIM_CONFIG_HPP_
