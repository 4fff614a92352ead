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

#include "edgesim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>

#include "edgesim/errors.hpp"

namespace edgesim {

SimConfig::SimConfig() {
  epsilons = {std::numeric_limits<double>::infinity(), 0.1, 0.01};
  seeds.resize(30);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
}

namespace {

using nlohmann::json;

struct KeyTable {
  std::map<std::string, std::function<void(const json&)>> handlers;
  std::vector<std::string> errors;

  void type_error(const std::string& key, const char* expected) {
    errors.push_back("'" + key + "' must be " + expected);
  }

  void add_double(const std::string& key, double& target) {
    handlers[key] = [this, key, &target](const json& v) {
      if (!v.is_number()) return type_error(key, "a number");
      target = v.get<double>();
    };
  }

  void add_int32(const std::string& key, std::int32_t& target) {
    handlers[key] = [this, key, &target](const json& v) {
      if (!v.is_number_integer()) return type_error(key, "an integer");
      target = v.get<std::int32_t>();
    };
  }

  void add_uint64(const std::string& key, std::uint64_t& target) {
    handlers[key] = [this, key, &target](const json& v) {
      if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0)) {
        return type_error(key, "a non-negative integer");
      }
      target = v.get<std::uint64_t>();
    };
  }

  void add_bool(const std::string& key, bool& target) {
    handlers[key] = [this, key, &target](const json& v) {
      if (!v.is_boolean()) return type_error(key, "a boolean");
      target = v.get<bool>();
    };
  }

  void add_string(const std::string& key, std::string& target) {
    handlers[key] = [this, key, &target](const json& v) {
      if (!v.is_string()) return type_error(key, "a string");
      target = v.get<std::string>();
    };
  }
};

json epsilon_to_json(double e) {
  if (std::isinf(e)) return json("inf");
  return json(e);
}

}  // namespace

SimConfig SimConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  SimConfig c;
  KeyTable table;

  table.add_double("area.width_m", c.area.width_m);
  table.add_double("area.height_m", c.area.height_m);

  table.add_bool("topology.use_intensity", c.topology.use_intensity);
  table.add_int32("topology.bs_count", c.topology.bs_count);
  table.add_int32("topology.mh_count", c.topology.mh_count);
  table.add_double("topology.bs_intensity_per_km2", c.topology.bs_intensity_per_km2);
  table.add_double("topology.mh_intensity_per_km2", c.topology.mh_intensity_per_km2);
  table.add_double("topology.bs_capacity_bps", c.topology.bs_capacity_bps);
  table.add_double("topology.mh_capacity_bps", c.topology.mh_capacity_bps);
  table.add_uint64("topology.seed", c.topology_seed);
  table.add_bool("topology.resample_per_seed", c.topology_resample_per_seed);

  table.add_int32("population.car_passengers", c.population.car_passengers);
  table.add_int32("population.bus_passengers", c.population.bus_passengers);
  table.add_int32("population.pedestrians", c.population.pedestrians);
  table.add_int32("population.passengers_per_bus", c.population.passengers_per_bus);

  table.add_string("mobility.source", c.mobility_source);
  table.add_string("mobility.trace_path", c.mobility_trace_path);
  table.add_double("mobility.block_m", c.mobility.block_m);
  table.add_double("mobility.sidewalk_offset_m", c.mobility.sidewalk_offset_m);
  table.add_double("mobility.car_speed_min_mps", c.mobility.car_speed_min_mps);
  table.add_double("mobility.car_speed_max_mps", c.mobility.car_speed_max_mps);
  table.add_double("mobility.bus_speed_min_mps", c.mobility.bus_speed_min_mps);
  table.add_double("mobility.bus_speed_max_mps", c.mobility.bus_speed_max_mps);
  table.add_double("mobility.ped_speed_min_mps", c.mobility.ped_speed_min_mps);
  table.add_double("mobility.ped_speed_max_mps", c.mobility.ped_speed_max_mps);
  table.add_int32("mobility.traffic_light_cycle_s", c.mobility.traffic_light_cycle_s);
  table.add_double("mobility.bus_stop_interval_m", c.mobility.bus_stop_interval_m);
  table.add_int32("mobility.bus_stop_duration_s", c.mobility.bus_stop_duration_s);
  table.add_string("mobility.fcd_car_prefix", c.fcd_prefixes.car);
  table.add_string("mobility.fcd_bus_prefix", c.fcd_prefixes.bus);
  table.add_string("mobility.fcd_ped_prefix", c.fcd_prefixes.pedestrian);

  std::string mechanism_name = to_string(c.mechanism);
  table.add_string("privacy.mechanism", mechanism_name);
  table.add_double("privacy.uniform_disk_radius_factor", c.uniform_disk_radius_factor);
  table.handlers["privacy.epsilons"] = [&](const json& v) {
    if (!v.is_array() || v.empty()) {
      table.errors.push_back("'privacy.epsilons' must be a non-empty array");
      return;
    }
    std::vector<double> eps;
    for (const auto& e : v) {
      try {
        if (e.is_string()) {
          eps.push_back(parse_epsilon(e.get<std::string>()));
        } else if (e.is_number()) {
          const double x = e.get<double>();
          if (std::isnan(x) || x <= 0.0) throw ConfigError("epsilon must be positive");
          eps.push_back(x);
        } else {
          throw ConfigError("epsilon entries must be numbers or 'inf'");
        }
      } catch (const ConfigError& err) {
        table.errors.push_back("'privacy.epsilons': " + std::string(err.what()));
        return;
      }
    }
    c.epsilons = std::move(eps);
  };

  table.add_double("radio.bandwidth_per_ue_hz", c.radio.bandwidth_per_ue_hz);
  table.add_double("radio.tx_power_dbm", c.radio.tx_power_dbm);
  table.add_double("radio.noise_power_dbm", c.radio.noise_power_dbm);
  table.add_double("radio.pathloss_exponent", c.radio.pathloss_exponent);
  table.add_double("radio.pathloss_ref_db", c.radio.pathloss_ref_db);
  table.add_double("radio.ref_distance_m", c.radio.ref_distance_m);
  table.add_double("radio.min_distance_m", c.radio.min_distance_m);

  table.add_double("latency.base_ms", c.latency.base_ms);
  table.add_double("latency.ms_per_km", c.latency.ms_per_km);

  double video_mbps = c.apps.video.throughput_bps / 1e6;
  double ar_mbps = c.apps.ar.throughput_bps / 1e6;
  double vr_mbps = c.apps.vr.throughput_bps / 1e6;
  table.add_double("apps.video_throughput_mbps", video_mbps);
  table.add_double("apps.video_latency_ms", c.apps.video.latency_ms);
  table.add_double("apps.ar_throughput_mbps", ar_mbps);
  table.add_double("apps.ar_latency_ms", c.apps.ar.latency_ms);
  table.add_double("apps.vr_throughput_mbps", vr_mbps);
  table.add_double("apps.vr_latency_ms", c.apps.vr.latency_ms);

  table.add_double("mix.car_video_pct", c.mix.car.video_pct);
  table.add_double("mix.car_ar_pct", c.mix.car.ar_pct);
  table.add_double("mix.car_vr_pct", c.mix.car.vr_pct);
  table.add_double("mix.bus_video_pct", c.mix.bus.video_pct);
  table.add_double("mix.bus_ar_pct", c.mix.bus.ar_pct);
  table.add_double("mix.bus_vr_pct", c.mix.bus.vr_pct);
  table.add_double("mix.pedestrian_video_pct", c.mix.pedestrian.video_pct);
  table.add_double("mix.pedestrian_ar_pct", c.mix.pedestrian.ar_pct);
  table.add_double("mix.pedestrian_vr_pct", c.mix.pedestrian.vr_pct);

  table.add_double("run.duration_s", c.duration_s);
  table.add_double("run.resolution_s", c.resolution_s);
  table.handlers["run.seeds"] = [&](const json& v) {
    if (!v.is_array() || v.empty()) {
      table.errors.push_back("'run.seeds' must be a non-empty array of integers");
      return;
    }
    std::vector<std::uint64_t> seeds;
    for (const auto& s : v) {
      if (!s.is_number_integer() || s.get<std::int64_t>() < 0) {
        table.errors.push_back("'run.seeds' entries must be non-negative integers");
        return;
      }
      seeds.push_back(s.get<std::uint64_t>());
    }
    c.seeds = std::move(seeds);
  };
  table.add_int32("run.threads", c.threads);
  table.add_bool("pf.iterate_after_denial", c.pf_iterate_after_denial);

  std::vector<std::string> unknown;
  for (const auto& [key, value] : j.items()) {
    const auto it = table.handlers.find(key);
    if (it == table.handlers.end()) {
      unknown.push_back(key);
    } else {
      it->second(value);
    }
  }
  if (!unknown.empty()) {
    std::sort(unknown.begin(), unknown.end());
    std::string msg = "unknown config key";
    if (unknown.size() > 1) msg += "s";
    msg += ": ";
    for (std::size_t i = 0; i < unknown.size(); ++i) {
      if (i) msg += ", ";
      msg += "'" + unknown[i] + "'";
    }
    table.errors.insert(table.errors.begin(), msg);
  }
  if (!table.errors.empty()) {
    std::string msg;
    for (std::size_t i = 0; i < table.errors.size(); ++i) {
      if (i) msg += "; ";
      msg += table.errors[i];
    }
    throw ConfigError(msg);
  }

  c.mechanism = mechanism_from_string(mechanism_name);
  c.apps.video.throughput_bps = video_mbps * 1e6;
  c.apps.ar.throughput_bps = ar_mbps * 1e6;
  c.apps.vr.throughput_bps = vr_mbps * 1e6;
  c.validate();
  return c;
}

SimConfig SimConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

nlohmann::json SimConfig::to_json() const {
  json j;
  j["area.width_m"] = area.width_m;
  j["area.height_m"] = area.height_m;

  j["topology.use_intensity"] = topology.use_intensity;
  j["topology.bs_count"] = topology.bs_count;
  j["topology.mh_count"] = topology.mh_count;
  j["topology.bs_intensity_per_km2"] = topology.bs_intensity_per_km2;
  j["topology.mh_intensity_per_km2"] = topology.mh_intensity_per_km2;
  j["topology.bs_capacity_bps"] = topology.bs_capacity_bps;
  j["topology.mh_capacity_bps"] = topology.mh_capacity_bps;
  j["topology.seed"] = topology_seed;
  j["topology.resample_per_seed"] = topology_resample_per_seed;

  j["population.car_passengers"] = population.car_passengers;
  j["population.bus_passengers"] = population.bus_passengers;
  j["population.pedestrians"] = population.pedestrians;
  j["population.passengers_per_bus"] = population.passengers_per_bus;

  j["mobility.source"] = mobility_source;
  j["mobility.trace_path"] = mobility_trace_path;
  j["mobility.block_m"] = mobility.block_m;
  j["mobility.sidewalk_offset_m"] = mobility.sidewalk_offset_m;
  j["mobility.car_speed_min_mps"] = mobility.car_speed_min_mps;
  j["mobility.car_speed_max_mps"] = mobility.car_speed_max_mps;
  j["mobility.bus_speed_min_mps"] = mobility.bus_speed_min_mps;
  j["mobility.bus_speed_max_mps"] = mobility.bus_speed_max_mps;
  j["mobility.ped_speed_min_mps"] = mobility.ped_speed_min_mps;
  j["mobility.ped_speed_max_mps"] = mobility.ped_speed_max_mps;
  j["mobility.traffic_light_cycle_s"] = mobility.traffic_light_cycle_s;
  j["mobility.bus_stop_interval_m"] = mobility.bus_stop_interval_m;
  j["mobility.bus_stop_duration_s"] = mobility.bus_stop_duration_s;
  j["mobility.fcd_car_prefix"] = fcd_prefixes.car;
  j["mobility.fcd_bus_prefix"] = fcd_prefixes.bus;
  j["mobility.fcd_ped_prefix"] = fcd_prefixes.pedestrian;

  j["privacy.mechanism"] = to_string(mechanism);
  j["privacy.uniform_disk_radius_factor"] = uniform_disk_radius_factor;
  json eps = json::array();
  for (const double e : epsilons) eps.push_back(epsilon_to_json(e));
  j["privacy.epsilons"] = eps;

  j["radio.bandwidth_per_ue_hz"] = radio.bandwidth_per_ue_hz;
  j["radio.tx_power_dbm"] = radio.tx_power_dbm;
  j["radio.noise_power_dbm"] = radio.noise_power_dbm;
  j["radio.pathloss_exponent"] = radio.pathloss_exponent;
  j["radio.pathloss_ref_db"] = radio.pathloss_ref_db;
  j["radio.ref_distance_m"] = radio.ref_distance_m;
  j["radio.min_distance_m"] = radio.min_distance_m;

  j["latency.base_ms"] = latency.base_ms;
  j["latency.ms_per_km"] = latency.ms_per_km;

  j["apps.video_throughput_mbps"] = apps.video.throughput_bps / 1e6;
  j["apps.video_latency_ms"] = apps.video.latency_ms;
  j["apps.ar_throughput_mbps"] = apps.ar.throughput_bps / 1e6;
  j["apps.ar_latency_ms"] = apps.ar.latency_ms;
  j["apps.vr_throughput_mbps"] = apps.vr.throughput_bps / 1e6;
  j["apps.vr_latency_ms"] = apps.vr.latency_ms;

  j["mix.car_video_pct"] = mix.car.video_pct;
  j["mix.car_ar_pct"] = mix.car.ar_pct;
  j["mix.car_vr_pct"] = mix.car.vr_pct;
  j["mix.bus_video_pct"] = mix.bus.video_pct;
  j["mix.bus_ar_pct"] = mix.bus.ar_pct;
  j["mix.bus_vr_pct"] = mix.bus.vr_pct;
  j["mix.pedestrian_video_pct"] = mix.pedestrian.video_pct;
  j["mix.pedestrian_ar_pct"] = mix.pedestrian.ar_pct;
  j["mix.pedestrian_vr_pct"] = mix.pedestrian.vr_pct;

  j["run.duration_s"] = duration_s;
  j["run.resolution_s"] = resolution_s;
  j["run.seeds"] = seeds;
  j["run.threads"] = threads;
  j["pf.iterate_after_denial"] = pf_iterate_after_denial;
  return j;
}

void SimConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file '" + path + "'");
  out << to_json().dump(2) << "\n";
}

std::uint64_t SimConfig::config_hash() const {
  const std::string dump = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string SimConfig::config_hash_hex() const {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = config_hash();
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return s;
}

void SimConfig::validate() const {
  std::vector<std::string> errors;
  const auto check = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };

  check(area.valid(), "'area.width_m' and 'area.height_m' must be > 0");
  if (topology.use_intensity) {
    check(topology.bs_intensity_per_km2 > 0.0, "'topology.bs_intensity_per_km2' must be > 0");
    check(topology.mh_intensity_per_km2 > 0.0, "'topology.mh_intensity_per_km2' must be > 0");
  } else {
    check(topology.bs_count >= 1, "'topology.bs_count' must be >= 1");
    check(topology.mh_count >= 1, "'topology.mh_count' must be >= 1");
  }
  check(topology.bs_capacity_bps > 0.0, "'topology.bs_capacity_bps' must be > 0");
  check(topology.mh_capacity_bps > 0.0, "'topology.mh_capacity_bps' must be > 0");

  check(population.car_passengers >= 0, "'population.car_passengers' must be >= 0");
  check(population.bus_passengers >= 0, "'population.bus_passengers' must be >= 0");
  check(population.pedestrians >= 0, "'population.pedestrians' must be >= 0");
  check(population.passengers_per_bus >= 1, "'population.passengers_per_bus' must be >= 1");

  check(mobility_source == "synthetic" || mobility_source == "csv" ||
            mobility_source == "fcd",
        "'mobility.source' must be one of synthetic, csv, fcd");
  if (mobility_source != "synthetic") {
    check(!mobility_trace_path.empty(),
          "'mobility.trace_path' is required when 'mobility.source' is not synthetic");
  }
  check(mobility.block_m > 0.0, "'mobility.block_m' must be > 0");
  check(mobility.sidewalk_offset_m > 0.0 &&
            mobility.sidewalk_offset_m * 2.0 < mobility.block_m,
        "'mobility.sidewalk_offset_m' must be in (0, block_m/2)");
  const auto speed_pair = [&](double lo, double hi, const char* what) {
    check(lo >= 0.0 && hi >= lo,
          std::string("'mobility.") + what + "_speed_min_mps/max_mps' must satisfy 0 <= min <= max");
  };
  speed_pair(mobility.car_speed_min_mps, mobility.car_speed_max_mps, "car");
  speed_pair(mobility.bus_speed_min_mps, mobility.bus_speed_max_mps, "bus");
  speed_pair(mobility.ped_speed_min_mps, mobility.ped_speed_max_mps, "ped");
  check(mobility.traffic_light_cycle_s >= 0, "'mobility.traffic_light_cycle_s' must be >= 0");
  check(mobility.bus_stop_interval_m >= 0.0, "'mobility.bus_stop_interval_m' must be >= 0");
  check(mobility.bus_stop_duration_s >= 0, "'mobility.bus_stop_duration_s' must be >= 0");

  check(uniform_disk_radius_factor > 0.0, "'privacy.uniform_disk_radius_factor' must be > 0");
  check(!epsilons.empty(), "'privacy.epsilons' must be non-empty");
  for (const double e : epsilons) {
    if (std::isnan(e) || e <= 0.0) {
      errors.push_back("'privacy.epsilons' entries must be positive or 'inf'");
      break;
    }
  }

  try {
    radio.validate();
  } catch (const ConfigError& e) {
    errors.push_back(e.what());
  }
  try {
    latency.validate();
  } catch (const ConfigError& e) {
    errors.push_back(e.what());
  }

  const auto check_app = [&](const AppParams& app, const char* name) {
    check(app.throughput_bps > 0.0, std::string("'apps.") + name + "_throughput_mbps' must be > 0");
    check(app.latency_ms > 0.0, std::string("'apps.") + name + "_latency_ms' must be > 0");
  };
  check_app(apps.video, "video");
  check_app(apps.ar, "ar");
  check_app(apps.vr, "vr");

  const auto check_mix = [&](const AppMix& m, const char* name) {
    check(m.video_pct >= 0.0 && m.ar_pct >= 0.0 && m.vr_pct >= 0.0,
          std::string("'mix.") + name + "_*' percentages must be >= 0");
    check(std::abs(m.sum() - 100.0) < 1e-9,
          std::string("'mix.") + name + "_*' percentages must sum to 100");
  };
  check_mix(mix.car, "car");
  check_mix(mix.bus, "bus");
  check_mix(mix.pedestrian, "pedestrian");
  check(mix.pedestrian.vr_pct == 0.0, "'mix.pedestrian_vr_pct' must be 0");

  check(duration_s > 0.0, "'run.duration_s' must be > 0");
  check(resolution_s > 0.0, "'run.resolution_s' must be > 0");
  if (resolution_s > 0.0 && duration_s > 0.0) {
    const double steps = duration_s / resolution_s;
    check(std::abs(steps - std::round(steps)) < 1e-9,
          "'run.duration_s' must be an integer multiple of 'run.resolution_s'");
  }
  check(!seeds.empty(), "'run.seeds' must be non-empty");
  check(threads >= 0, "'run.threads' must be >= 0");

  if (!errors.empty()) {
    std::string msg;
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (i) msg += "; ";
      msg += errors[i];
    }
    throw ConfigError(msg);
  }
}

}  // namespace edgesim
