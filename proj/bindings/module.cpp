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

#include <bit>
#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "edgesim/commands.hpp"
#include "edgesim/config.hpp"
#include "edgesim/errors.hpp"
#include "edgesim/geometry.hpp"
#include "edgesim/link_model.hpp"
#include "edgesim/privacy.hpp"
#include "edgesim/rng.hpp"
#include "edgesim/topology.hpp"

namespace py = pybind11;
using namespace edgesim;

namespace {

SimConfig config_from_text(const std::string& text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  return SimConfig::from_json(parsed);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Privacy-aware MEC offloading simulator core";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TraceError>(m, "TraceError", PyExc_ValueError);
  py::register_exception<PairingError>(m, "PairingError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<RadioParams>(m, "RadioParams")
      .def(py::init<>())
      .def_readwrite("bandwidth_per_ue_hz", &RadioParams::bandwidth_per_ue_hz)
      .def_readwrite("tx_power_dbm", &RadioParams::tx_power_dbm)
      .def_readwrite("noise_power_dbm", &RadioParams::noise_power_dbm)
      .def_readwrite("pathloss_exponent", &RadioParams::pathloss_exponent)
      .def_readwrite("pathloss_ref_db", &RadioParams::pathloss_ref_db)
      .def_readwrite("ref_distance_m", &RadioParams::ref_distance_m)
      .def_readwrite("min_distance_m", &RadioParams::min_distance_m);

  py::class_<LatencyParams>(m, "LatencyParams")
      .def(py::init<>())
      .def_readwrite("base_ms", &LatencyParams::base_ms)
      .def_readwrite("ms_per_km", &LatencyParams::ms_per_km);

  m.def("path_loss_db", &path_loss_db, py::arg("distance_m"),
        py::arg("params") = RadioParams{});
  m.def("snr_db", &snr_db, py::arg("distance_m"), py::arg("params") = RadioParams{});
  m.def("shannon_capacity_bps", &shannon_capacity_bps, py::arg("bandwidth_hz"),
        py::arg("snr"));
  m.def("ue_bs_capacity_bps", &ue_bs_capacity_bps, py::arg("distance_m"),
        py::arg("params") = RadioParams{});
  m.def("bs_mh_latency_ms", &bs_mh_latency_ms, py::arg("distance_m"),
        py::arg("params") = LatencyParams{});
  m.def(
      "proportional_fair",
      [](const std::vector<double>& demands, const std::vector<double>& caps,
         double capacity) { return proportional_fair_allocate(demands, caps, capacity); },
      py::arg("demands_bps"), py::arg("caps_bps"), py::arg("capacity_bps"));
  m.def(
      "proportional_fair",
      [](const std::vector<double>& demands, double capacity) {
        return proportional_fair_allocate(demands, capacity);
      },
      py::arg("demands_bps"), py::arg("capacity_bps"));

  m.def("planar_laplace_cdf", &planar_laplace_radial_cdf, py::arg("epsilon"),
        py::arg("r"));
  m.def("planar_laplace_radius", &planar_laplace_radius, py::arg("epsilon"),
        py::arg("u"));
  m.def(
      "obfuscate",
      [](double x, double y, double epsilon, std::uint64_t seed, std::uint64_t user,
         std::uint64_t t, const std::string& mechanism, double disk_radius_factor) {
        const LocationObfuscator obf(mechanism_from_string(mechanism), epsilon,
                                     disk_radius_factor);
        rng::CounterRng rng(seed, rng::Stream::kObfuscation,
                            std::bit_cast<std::uint64_t>(epsilon), user, t);
        const Point p = obf.obfuscate(Point{x, y}, rng);
        return std::make_pair(p.x, p.y);
      },
      py::arg("x"), py::arg("y"), py::arg("epsilon"), py::arg("seed"),
      py::arg("user") = 0, py::arg("t") = 0, py::arg("mechanism") = "planar-laplace",
      py::arg("disk_radius_factor") = 3.0,
      "One obfuscated report, keyed exactly like the experiment engine.");
  m.def(
      "displacement_stats",
      [](double epsilon, const std::string& mechanism, double disk_radius_factor,
         std::size_t n, std::uint64_t seed) {
        const LocationObfuscator obf(mechanism_from_string(mechanism), epsilon,
                                     disk_radius_factor);
        const DisplacementStats s = displacement_stats(obf, n, seed);
        py::dict d;
        d["mean_m"] = s.mean_m;
        d["p50_m"] = s.p50_m;
        d["p95_m"] = s.p95_m;
        return d;
      },
      py::arg("epsilon"), py::arg("mechanism") = "planar-laplace",
      py::arg("disk_radius_factor") = 3.0, py::arg("n") = 10000, py::arg("seed") = 1);

  m.def("epsilon_label", &epsilon_label, py::arg("epsilon"));
  m.def("parse_epsilon", &parse_epsilon, py::arg("text"));

  m.def("default_config", [] { return SimConfig{}.to_json().dump(2); },
        "Canonical JSON of the built-in defaults.");
  m.def(
      "config_hash",
      [](const std::string& text) { return config_from_text(text).config_hash_hex(); },
      py::arg("config_json"));
  m.def(
      "validate_config",
      [](const std::string& text) { config_from_text(text).validate(); },
      py::arg("config_json"));

  py::class_<Topology>(m, "Topology")
      .def_static(
          "build",
          [](double width_m, double height_m, std::int32_t bs_count,
             std::int32_t mh_count, std::uint64_t seed) {
            TopologyConfig tc;
            tc.bs_count = bs_count;
            tc.mh_count = mh_count;
            return Topology::build(Area{width_m, height_m}, tc, seed);
          },
          py::arg("width_m"), py::arg("height_m"), py::arg("bs_count") = 475,
          py::arg("mh_count") = 95, py::arg("seed") = 0)
      .def("bs_count", [](const Topology& t) { return t.base_stations().size(); })
      .def("mh_count", [](const Topology& t) { return t.mec_hosts().size(); })
      .def(
          "nearest_bs",
          [](const Topology& t, double x, double y) { return t.nearest_bs(Point{x, y}); },
          py::arg("x"), py::arg("y"))
      .def(
          "nearest_mh",
          [](const Topology& t, double x, double y) { return t.nearest_mh(Point{x, y}); },
          py::arg("x"), py::arg("y"))
      .def("ideal_mh", &Topology::ideal_mh, py::arg("bs_id"))
      .def(
          "bs_position",
          [](const Topology& t, std::int32_t id) {
            const Point& p = t.bs_position(id);
            return std::make_pair(p.x, p.y);
          },
          py::arg("bs_id"));

  const auto run_stage = [](void (*stage)(const SimConfig&, const std::string&, bool,
                                          std::ostream&),
                            const std::string& text, const std::string& out_dir,
                            bool overwrite) {
    const SimConfig config = config_from_text(text);
    stage(config, out_dir, overwrite, std::cerr);
  };
  m.def(
      "generate",
      [run_stage](const std::string& config_json, const std::string& out_dir,
                  bool overwrite) { run_stage(cmd_generate, config_json, out_dir, overwrite); },
      py::arg("config_json"), py::arg("out_dir"), py::arg("overwrite") = false,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "run",
      [run_stage](const std::string& config_json, const std::string& out_dir,
                  bool overwrite) { run_stage(cmd_run, config_json, out_dir, overwrite); },
      py::arg("config_json"), py::arg("out_dir"), py::arg("overwrite") = false,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "report",
      [run_stage](const std::string& config_json, const std::string& out_dir,
                  bool overwrite) { run_stage(cmd_report, config_json, out_dir, overwrite); },
      py::arg("config_json"), py::arg("out_dir"), py::arg("overwrite") = false,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_all",
      [run_stage](const std::string& config_json, const std::string& out_dir,
                  bool overwrite) { run_stage(cmd_all, config_json, out_dir, overwrite); },
      py::arg("config_json"), py::arg("out_dir"), py::arg("overwrite") = false,
      py::call_guard<py::gil_scoped_release>());
}
