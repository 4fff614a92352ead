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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "edgesim/config.hpp"
#include "edgesim/errors.hpp"

using namespace edgesim;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string error_of(const json& j) {
  try {
    SimConfig::from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected ConfigError");
  return {};
}

}  // namespace

TEST_CASE("defaults are complete and valid") {
  const SimConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.area.width_m == 2000.0);
  CHECK(c.area.height_m == 2000.0);
  CHECK(c.topology.bs_count == 475);
  CHECK(c.topology.mh_count == 95);
  REQUIRE(c.epsilons.size() == 3);
  CHECK(std::isinf(c.epsilons[0]));
  CHECK(c.epsilons[1] == 0.1);
  CHECK(c.epsilons[2] == 0.01);
  REQUIRE(c.seeds.size() == 30);
  CHECK(c.seeds.front() == 1);
  CHECK(c.seeds.back() == 30);
  CHECK(c.threads == 0);
  CHECK(c.duration_s == 3600.0);
  CHECK(c.resolution_s == 1.0);
  CHECK(c.mechanism == MechanismKind::kPlanarLaplace);
  CHECK_FALSE(c.pf_iterate_after_denial);
  CHECK(c.mix.pedestrian.vr_pct == 0.0);
}

TEST_CASE("empty object parses to the defaults") {
  const SimConfig parsed = SimConfig::from_json(json::object());
  const SimConfig defaults;
  CHECK(parsed.config_hash() == defaults.config_hash());
  CHECK(parsed.to_json() == defaults.to_json());
}

TEST_CASE("config root must be an object") {
  CHECK_THROWS_AS(SimConfig::from_json(json::parse("[1, 2]")), ConfigError);
  CHECK_THROWS_AS(SimConfig::from_json(json(42)), ConfigError);
}

TEST_CASE("unknown keys are listed exhaustively and sorted") {
  SUBCASE("single key") {
    const std::string what = error_of({{"bogus_key", 1}});
    CHECK(what == "unknown config key: 'bogus_key'");
  }
  SUBCASE("several keys come back sorted") {
    const std::string what = error_of({{"zeta", 1}, {"alpha", 2}, {"mid.key", 3}});
    CHECK(what == "unknown config keys: 'alpha', 'mid.key', 'zeta'");
  }
  SUBCASE("unknown keys join other complaints") {
    const std::string what = error_of({{"bogus", 1}, {"run.threads", "many"}});
    CHECK(what == "unknown config key: 'bogus'; 'run.threads' must be an integer");
  }
}

TEST_CASE("type mismatches are reported per key") {
  CHECK(error_of({{"area.width_m", "wide"}}) == "'area.width_m' must be a number");
  CHECK(error_of({{"topology.resample_per_seed", 1}}) ==
        "'topology.resample_per_seed' must be a boolean");
  CHECK(error_of({{"mobility.source", 7}}) == "'mobility.source' must be a string");
  CHECK(error_of({{"topology.seed", -4}}) == "'topology.seed' must be a non-negative integer");
  CHECK(error_of({{"run.seeds", json::array({1, -2})}}) ==
        "'run.seeds' entries must be non-negative integers");
  CHECK(error_of({{"run.seeds", json::array()}}) ==
        "'run.seeds' must be a non-empty array of integers");
}

TEST_CASE("privacy levels accept numbers and the string inf") {
  json j;
  j["privacy.epsilons"] = json::array({"inf", 0.5, "0.01"});
  const SimConfig c = SimConfig::from_json(j);
  REQUIRE(c.epsilons.size() == 3);
  CHECK(std::isinf(c.epsilons[0]));
  CHECK(c.epsilons[1] == 0.5);
  CHECK(c.epsilons[2] == 0.01);

  CHECK(error_of({{"privacy.epsilons", json::array({0.0})}}).find("must be positive") !=
        std::string::npos);
  CHECK(error_of({{"privacy.epsilons", json::array({true})}}).find("numbers or 'inf'") !=
        std::string::npos);
  CHECK(error_of({{"privacy.epsilons", json::array()}}) ==
        "'privacy.epsilons' must be a non-empty array");
}

TEST_CASE("validation failures are collected into one message") {
  json j;
  j["area.width_m"] = -5.0;
  j["mix.car_video_pct"] = 20.0;  // car mix now sums to 50
  const std::string what = error_of(j);
  CHECK(what.find("'area.width_m' and 'area.height_m' must be > 0") != std::string::npos);
  CHECK(what.find("'mix.car_*' percentages must sum to 100") != std::string::npos);
  CHECK(what.find("; ") != std::string::npos);
}

TEST_CASE("individual validation rules") {
  SUBCASE("pedestrians never run the most demanding app") {
    json j;
    j["mix.pedestrian_video_pct"] = 70.0;
    j["mix.pedestrian_ar_pct"] = 20.0;
    j["mix.pedestrian_vr_pct"] = 10.0;
    CHECK(error_of(j) == "'mix.pedestrian_vr_pct' must be 0");
  }
  SUBCASE("duration must tile into whole steps") {
    json j;
    j["run.duration_s"] = 10.0;
    j["run.resolution_s"] = 3.0;
    CHECK(error_of(j) ==
          "'run.duration_s' must be an integer multiple of 'run.resolution_s'");
  }
  SUBCASE("mobility source is a closed set") {
    CHECK(error_of({{"mobility.source", "teleport"}}) ==
          "'mobility.source' must be one of synthetic, csv, fcd; "
          "'mobility.trace_path' is required when 'mobility.source' is not synthetic");
  }
  SUBCASE("external sources need a trace path") {
    CHECK(error_of({{"mobility.source", "csv"}}) ==
          "'mobility.trace_path' is required when 'mobility.source' is not synthetic");
  }
  SUBCASE("nested validators surface their own message") {
    CHECK(error_of({{"radio.bandwidth_per_ue_hz", -1.0}}) ==
          "radio.bandwidth_per_ue_hz must be > 0");
    CHECK(error_of({{"latency.ms_per_km", -2.0}}) == "latency.ms_per_km must be >= 0");
  }
  SUBCASE("mechanism names are checked") {
    CHECK(error_of({{"privacy.mechanism", "carrier-pigeon"}}).find("carrier-pigeon") !=
          std::string::npos);
  }
  SUBCASE("sidewalks must fit inside a block") {
    CHECK(error_of({{"mobility.sidewalk_offset_m", 60.0}}) ==
          "'mobility.sidewalk_offset_m' must be in (0, block_m/2)");
  }
}

TEST_CASE("serialization round-trips every field") {
  SimConfig c;
  c.area = Area{1234.0, 987.5};
  c.topology.bs_count = 12;
  c.topology.mh_count = 4;
  c.topology.bs_capacity_bps = 5e9;
  c.topology_seed = 77;
  c.topology_resample_per_seed = true;
  c.population.car_passengers = 3;
  c.population.bus_passengers = 6;
  c.population.pedestrians = 9;
  c.population.passengers_per_bus = 2;
  c.mobility_source = "fcd";
  c.mobility_trace_path = "/tmp/trace.xml";
  c.mobility.block_m = 120.0;
  c.mechanism = MechanismKind::kUniformDisk;
  c.uniform_disk_radius_factor = 2.5;
  c.epsilons = {kInf, 0.25};
  c.radio.tx_power_dbm = 28.0;
  c.latency.ms_per_km = 8.0;
  c.apps.vr.latency_ms = 16.0;
  c.mix.car = AppMix{50.0, 25.0, 25.0};
  c.duration_s = 120.0;
  c.resolution_s = 0.5;
  c.seeds = {4, 5, 6};
  c.threads = 2;
  c.pf_iterate_after_denial = true;

  const json j = c.to_json();
  CHECK(j.at("privacy.epsilons") == json::array({"inf", 0.25}));
  const SimConfig back = SimConfig::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.config_hash() == c.config_hash());
  CHECK(back.mechanism == MechanismKind::kUniformDisk);
  CHECK(back.apps.vr.latency_ms == 16.0);
  CHECK(back.seeds == c.seeds);
}

TEST_CASE("hash ignores key order but tracks every value") {
  const SimConfig a = SimConfig::from_json(
      json::parse(R"({"run.threads": 2, "area.width_m": 500.0, "area.height_m": 500.0})"));
  const SimConfig b = SimConfig::from_json(
      json::parse(R"({"area.height_m": 500.0, "area.width_m": 500.0, "run.threads": 2})"));
  CHECK(a.config_hash() == b.config_hash());

  SimConfig c = a;
  c.threads = 3;
  CHECK(c.config_hash() != a.config_hash());
  SimConfig d = a;
  d.epsilons = {kInf, 0.1, 0.011};
  CHECK(d.config_hash() != a.config_hash());

  const std::string hex = a.config_hash_hex();
  REQUIRE(hex.size() == 16);
  for (const char ch : hex) CHECK(std::isxdigit(static_cast<unsigned char>(ch)));
  CHECK(hex == SimConfig::from_json(a.to_json()).config_hash_hex());
}

TEST_CASE("save and load round-trip through a file") {
  SimConfig c;
  c.seeds = {11, 12};
  c.duration_s = 60.0;
  const std::string path = temp_path("edgesim_config_roundtrip.json");
  c.save(path);
  const SimConfig back = SimConfig::load(path);
  CHECK(back.config_hash() == c.config_hash());
  std::remove(path.c_str());
}

TEST_CASE("load failures carry the file path") {
  CHECK_THROWS_AS(SimConfig::load("/nonexistent/edgesim.json"), IoError);

  const std::string path = temp_path("edgesim_config_bad.json");
  std::ofstream(path) << "{ not json";
  try {
    SimConfig::load(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find(path) != std::string::npos);
    CHECK(what.find("not valid JSON") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("shipped configs parse and validate") {
  const std::string repo = EDGESIM_REPO_DIR;
  for (const char* name : {"desk.json", "full.json", "smoke.json"}) {
    const SimConfig c = SimConfig::load(repo + "/configs/" + name);
    CHECK_NOTHROW(c.validate());
    CHECK_FALSE(c.seeds.empty());
    CHECK_FALSE(c.epsilons.empty());
  }
  const SimConfig desk = SimConfig::load(repo + "/configs/desk.json");
  CHECK(desk.population.total() == 125);
  CHECK(desk.duration_s == 600.0);
  REQUIRE(desk.seeds.size() == 3);
  const SimConfig full = SimConfig::load(repo + "/configs/full.json");
  CHECK(full.population.total() == 1250);
  CHECK(full.seeds.size() == 30);
}
