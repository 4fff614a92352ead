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

#include "edgesim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "edgesim/csv.hpp"
#include "edgesim/errors.hpp"
#include "edgesim/rng.hpp"

namespace edgesim {

std::size_t step_count(double duration_s, double resolution_s) {
  if (resolution_s <= 0.0) throw ConfigError("resolution_s must be > 0");
  if (duration_s < 0.0) throw ConfigError("duration_s must be >= 0");
  return static_cast<std::size_t>(std::llround(duration_s / resolution_s));
}

void MobilityTrace::save_csv(const std::string& path) const {
  CsvWriter w(path);
  w.write_raw("t,user_id,x,y\n");
  for (std::size_t t = 0; t < steps_; ++t) {
    for (std::size_t u = 0; u < users_; ++u) {
      const std::size_t i = t * users_ + u;
      auto& line = w.line();
      append_number(line, static_cast<std::int64_t>(t));
      line.push_back(',');
      append_number(line, static_cast<std::int64_t>(u));
      line.push_back(',');
      append_number(line, xs_[i]);
      line.push_back(',');
      append_number(line, ys_[i]);
      w.end_line();
    }
  }
  w.close();
}

namespace {

// ---------------------------------------------------------------------------
// Street / sidewalk lattice
// ---------------------------------------------------------------------------

struct Lattice {
  std::vector<double> street_xs;
  std::vector<double> street_ys;
  std::vector<double> side_xs;
  std::vector<double> side_ys;
};

std::vector<double> grid_lines(double extent, double block) {
  std::vector<double> lines;
  for (std::size_t i = 0;; ++i) {
    const double v = static_cast<double>(i) * block;
    if (v > extent + 1e-9) break;
    lines.push_back(std::min(v, extent));
  }
  return lines;
}

std::vector<double> offset_lines(const std::vector<double>& streets, double off,
                                 double extent) {
  std::vector<double> lines;
  for (double s : streets) {
    if (s - off >= 0.0) lines.push_back(s - off);
    if (s + off <= extent) lines.push_back(s + off);
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  return lines;
}

Lattice make_lattice(const Area& area, const MobilityParams& p) {
  if (p.block_m <= 0.0) throw ConfigError("mobility.block_m must be > 0");
  if (p.sidewalk_offset_m <= 0.0 || p.sidewalk_offset_m * 2.0 >= p.block_m) {
    throw ConfigError("mobility.sidewalk_offset_m must be in (0, block/2)");
  }
  Lattice lat;
  lat.street_xs = grid_lines(area.width_m, p.block_m);
  lat.street_ys = grid_lines(area.height_m, p.block_m);
  lat.side_xs = offset_lines(lat.street_xs, p.sidewalk_offset_m, area.width_m);
  lat.side_ys = offset_lines(lat.street_ys, p.sidewalk_offset_m, area.height_m);
  return lat;
}

// ---------------------------------------------------------------------------
// Car: random-turn walk over street nodes with traffic lights
// ---------------------------------------------------------------------------

// Light phase is a pure function of (seed, node); green alternates between
// the two axes every half cycle.
bool light_green_for_axis(std::uint64_t seed, std::int32_t i, std::int32_t j,
                          std::int64_t t_s, std::int32_t cycle_s, int axis) {
  if (cycle_s <= 0) return true;
  const std::uint64_t phase = rng::derive_key(seed, rng::Stream::kTrafficLight,
                                              static_cast<std::uint64_t>(i),
                                              static_cast<std::uint64_t>(j)) %
                              static_cast<std::uint64_t>(cycle_s);
  const std::int64_t local =
      (t_s + static_cast<std::int64_t>(phase)) % cycle_s;
  const bool x_green = local < cycle_s / 2;
  return axis == 0 ? x_green : !x_green;
}

struct CarWalker {
  const Lattice* lat = nullptr;
  const MobilityParams* params = nullptr;
  std::uint64_t light_seed = 0;
  rng::CounterRng rng{0};

  int axis = 0;       // 0: moving along x, 1: along y
  int dir = 1;        // +-1 toward the target node
  std::int32_t ni = 0, nj = 0;  // target node indices
  double x = 0.0, y = 0.0;
  double speed = 0.0;
  bool waiting = false;
  bool parked = false;  // degenerate lattice, no movement possible

  void init() {
    const auto& sx = lat->street_xs;
    const auto& sy = lat->street_ys;
    ni = static_cast<std::int32_t>(rng.uniform_int(sx.size()));
    nj = static_cast<std::int32_t>(rng.uniform_int(sy.size()));
    x = sx[static_cast<std::size_t>(ni)];
    y = sy[static_cast<std::size_t>(nj)];
    speed = rng.uniform(params->car_speed_min_mps, params->car_speed_max_mps);
    parked = !choose_turn(/*incoming_axis=*/-1, /*incoming_dir=*/0);
  }

  // Picks the next (axis, dir) at node (ni, nj), avoiding a U-turn unless
  // it is the only option. Returns false when the node has no neighbors.
  bool choose_turn(int incoming_axis, int incoming_dir) {
    const std::int32_t nx = static_cast<std::int32_t>(lat->street_xs.size());
    const std::int32_t ny = static_cast<std::int32_t>(lat->street_ys.size());
    int options[4][2];
    int n = 0;
    auto add = [&](int a, int d) {
      options[n][0] = a;
      options[n][1] = d;
      ++n;
    };
    if (ni + 1 < nx) add(0, 1);
    if (ni > 0) add(0, -1);
    if (nj + 1 < ny) add(1, 1);
    if (nj > 0) add(1, -1);
    if (n == 0) return false;
    if (n > 1 && incoming_axis >= 0) {
      // Drop the reverse of the incoming edge.
      for (int k = 0; k < n; ++k) {
        if (options[k][0] == incoming_axis && options[k][1] == -incoming_dir) {
          options[k][0] = options[n - 1][0];
          options[k][1] = options[n - 1][1];
          --n;
          break;
        }
      }
    }
    const int pick = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    axis = options[pick][0];
    dir = options[pick][1];
    return true;
  }

  void advance_target() {
    if (axis == 0) {
      ni += dir;
    } else {
      nj += dir;
    }
  }

  Point step(std::int64_t t_s, double dt) {
    if (parked) return Point{x, y};
    if (waiting) {
      if (!light_green_for_axis(light_seed, ni, nj, t_s, params->traffic_light_cycle_s, axis)) {
        return Point{x, y};
      }
      waiting = false;
      advance_target();
    }
    double budget = speed * dt;
    while (budget > 0.0) {
      const double target = axis == 0 ? lat->street_xs[static_cast<std::size_t>(ni)]
                                      : lat->street_ys[static_cast<std::size_t>(nj)];
      double& moving = axis == 0 ? x : y;
      const double dist = std::abs(target - moving);
      if (dist > budget) {
        moving += dir * budget;
        break;
      }
      moving = target;
      budget -= dist;
      // Arrived at node (ni, nj): turn, obey the light for the new axis.
      const int in_axis = axis, in_dir = dir;
      if (!choose_turn(in_axis, in_dir)) {
        parked = true;
        break;
      }
      speed = rng.uniform(params->car_speed_min_mps, params->car_speed_max_mps);
      if (!light_green_for_axis(light_seed, ni, nj, t_s, params->traffic_light_cycle_s, axis)) {
        waiting = true;
        break;
      }
      advance_target();
    }
    return Point{x, y};
  }
};

// ---------------------------------------------------------------------------
// Bus: fixed rectangular loop with periodic stops
// ---------------------------------------------------------------------------

struct BusWalker {
  const MobilityParams* params = nullptr;
  rng::CounterRng rng{0};

  // Loop corners (exact street coordinates), traversed 0->1->2->3->0.
  double xa = 0, xb = 0, yc = 0, yd = 0;
  int seg = 0;
  double x = 0, y = 0;
  double speed = 0.0;
  double odometer = 0.0;
  double stop_left_s = 0.0;
  bool parked = false;

  void init(const Lattice& lat) {
    const auto& sx = lat.street_xs;
    const auto& sy = lat.street_ys;
    if (sx.size() < 2 || sy.size() < 2) {
      parked = true;
      x = sx.empty() ? 0.0 : sx[0];
      y = sy.empty() ? 0.0 : sy[0];
      return;
    }
    const auto pick_pair = [&](const std::vector<double>& lines, double& lo, double& hi) {
      const std::size_t a = rng.uniform_int(lines.size() - 1);
      const std::size_t b = a + 1 + rng.uniform_int(lines.size() - 1 - a);
      lo = lines[a];
      hi = lines[b];
    };
    pick_pair(sx, xa, xb);
    pick_pair(sy, yc, yd);
    seg = static_cast<int>(rng.uniform_int(4));
    switch (seg) {
      case 0: x = xa; y = yc; break;
      case 1: x = xb; y = yc; break;
      case 2: x = xb; y = yd; break;
      case 3: x = xa; y = yd; break;
    }
    speed = rng.uniform(params->bus_speed_min_mps, params->bus_speed_max_mps);
  }

  Point step(double dt) {
    if (parked) return Point{x, y};
    if (stop_left_s > 0.0) {
      stop_left_s -= dt;
      return Point{x, y};
    }
    double budget = speed * dt;
    while (budget > 0.0) {
      double target;
      double* moving;
      int dir;
      switch (seg) {
        case 0: moving = &x; target = xb; dir = 1; y = yc; break;
        case 1: moving = &y; target = yd; dir = 1; x = xb; break;
        case 2: moving = &x; target = xa; dir = -1; y = yd; break;
        default: moving = &y; target = yc; dir = -1; x = xa; break;
      }
      const double dist_end = std::abs(target - *moving);
      const double dist_stop = params->bus_stop_interval_m > 0.0
                                   ? params->bus_stop_interval_m - odometer
                                   : std::numeric_limits<double>::infinity();
      if (budget < dist_end && budget < dist_stop) {
        *moving += dir * budget;
        odometer += budget;
        break;
      }
      if (dist_stop <= dist_end) {
        *moving += dir * dist_stop;
        odometer = 0.0;
        stop_left_s = static_cast<double>(params->bus_stop_duration_s);
        break;  // dwell for the rest of this step
      }
      *moving = target;
      budget -= dist_end;
      odometer += dist_end;
      seg = (seg + 1) % 4;
      speed = rng.uniform(params->bus_speed_min_mps, params->bus_speed_max_mps);
    }
    return Point{x, y};
  }
};

// ---------------------------------------------------------------------------
// Pedestrian: random waypoint over the sidewalk lattice
// ---------------------------------------------------------------------------

struct PedWalker {
  const Lattice* lat = nullptr;
  const MobilityParams* params = nullptr;
  rng::CounterRng rng{0};

  double x = 0, y = 0;
  std::int32_t wi = 0, wj = 0;  // waypoint node indices
  bool moving_x = true;         // x leg first, then y leg
  double speed = 1.0;
  bool parked = false;

  void init() {
    const auto& sx = lat->side_xs;
    const auto& sy = lat->side_ys;
    if (sx.empty() || sy.empty()) {
      parked = true;
      return;
    }
    x = sx[rng.uniform_int(sx.size())];
    y = sy[rng.uniform_int(sy.size())];
    pick_waypoint();
  }

  void pick_waypoint() {
    wi = static_cast<std::int32_t>(rng.uniform_int(lat->side_xs.size()));
    wj = static_cast<std::int32_t>(rng.uniform_int(lat->side_ys.size()));
    speed = rng.uniform(params->ped_speed_min_mps, params->ped_speed_max_mps);
    moving_x = true;
  }

  Point step(double dt) {
    if (parked) return Point{x, y};
    double budget = speed * dt;
    while (budget > 0.0) {
      if (moving_x) {
        const double target = lat->side_xs[static_cast<std::size_t>(wi)];
        const double d = target - x;
        if (std::abs(d) > budget) {
          x += (d > 0 ? budget : -budget);
          break;
        }
        x = target;
        budget -= std::abs(d);
        moving_x = false;
      } else {
        const double target = lat->side_ys[static_cast<std::size_t>(wj)];
        const double d = target - y;
        if (std::abs(d) > budget) {
          y += (d > 0 ? budget : -budget);
          break;
        }
        y = target;
        budget -= std::abs(d);
        const double old_x = x, old_y = y;
        pick_waypoint();
        if (lat->side_xs[static_cast<std::size_t>(wi)] == old_x &&
            lat->side_ys[static_cast<std::size_t>(wj)] == old_y) {
          break;  // waypoint is where we stand; idle out the step
        }
      }
    }
    return Point{x, y};
  }
};

}  // namespace

MobilityTrace generate_synthetic(const PopulationSpec& population,
                                 const MobilityParams& params, const Area& area,
                                 double duration_s, double resolution_s,
                                 std::uint64_t seed) {
  if (!area.valid()) throw ConfigError("mobility area must have positive extent");
  const std::size_t steps = step_count(duration_s, resolution_s);
  const std::size_t n_users = static_cast<std::size_t>(population.total());
  MobilityTrace trace(n_users, steps, resolution_s);
  if (n_users == 0 || steps == 0) return trace;

  const Lattice lat = make_lattice(area, params);

  const std::int32_t n_cars = population.car_passengers;
  const std::int32_t n_buses = population.bus_count();
  const std::int32_t n_peds = population.pedestrians;
  const std::int32_t bus_user_base = population.car_passengers;
  const std::int32_t ped_user_base = population.car_passengers + population.bus_passengers;

  // Bus b carries users {bus_user_base + b, + b + n_buses, ...}.
  std::vector<std::vector<std::int32_t>> bus_users(static_cast<std::size_t>(n_buses));
  for (std::int32_t i = 0; i < population.bus_passengers; ++i) {
    bus_users[static_cast<std::size_t>(i % n_buses)].push_back(bus_user_base + i);
  }

  for (std::int32_t c = 0; c < n_cars; ++c) {
    CarWalker w;
    w.lat = &lat;
    w.params = &params;
    w.light_seed = seed;
    w.rng = rng::CounterRng(seed, rng::Stream::kMobilityCar, static_cast<std::uint64_t>(c));
    w.init();
    for (std::size_t t = 0; t < steps; ++t) {
      const Point p = t == 0 ? Point{w.x, w.y}
                             : w.step(static_cast<std::int64_t>(t) - 1, resolution_s);
      trace.set(static_cast<std::size_t>(c), t, p);
    }
  }

  for (std::int32_t b = 0; b < n_buses; ++b) {
    BusWalker w;
    w.params = &params;
    w.rng = rng::CounterRng(seed, rng::Stream::kMobilityBus, static_cast<std::uint64_t>(b));
    w.init(lat);
    for (std::size_t t = 0; t < steps; ++t) {
      const Point p = t == 0 ? Point{w.x, w.y} : w.step(resolution_s);
      for (const std::int32_t u : bus_users[static_cast<std::size_t>(b)]) {
        trace.set(static_cast<std::size_t>(u), t, p);
      }
    }
  }

  for (std::int32_t pd = 0; pd < n_peds; ++pd) {
    PedWalker w;
    w.lat = &lat;
    w.params = &params;
    w.rng = rng::CounterRng(seed, rng::Stream::kMobilityPed, static_cast<std::uint64_t>(pd));
    w.init();
    for (std::size_t t = 0; t < steps; ++t) {
      const Point p = t == 0 ? Point{w.x, w.y} : w.step(resolution_s);
      trace.set(static_cast<std::size_t>(ped_user_base + pd), t, p);
    }
  }

  return trace;
}

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

namespace {

MobilityType type_of_user(const PopulationSpec& pop, std::int32_t user) {
  if (user < pop.car_passengers) return MobilityType::kCarPassenger;
  if (user < pop.car_passengers + pop.bus_passengers) return MobilityType::kBusPassenger;
  return MobilityType::kPedestrian;
}

void count_speed_violations(const MobilityTrace& trace, const PopulationSpec& pop,
                            const MobilityParams& params, IngestStats& stats) {
  for (std::size_t u = 0; u < trace.users(); ++u) {
    const double cap =
        params.max_speed(type_of_user(pop, static_cast<std::int32_t>(u))) *
            trace.resolution_s() +
        1e-9;
    for (std::size_t t = 1; t < trace.steps(); ++t) {
      if (distance(trace.at(u, t - 1), trace.at(u, t)) > cap) {
        ++stats.speed_cap_violations;
      }
    }
  }
}

void check_bus_groups(const MobilityTrace& trace, const PopulationSpec& pop) {
  const std::int32_t buses = pop.bus_count();
  if (buses <= 0) return;
  const std::int32_t base = pop.car_passengers;
  for (std::int32_t i = buses; i < pop.bus_passengers; ++i) {
    const std::int32_t leader = base + i % buses;
    const std::int32_t follower = base + i;
    for (std::size_t t = 0; t < trace.steps(); ++t) {
      if (!(trace.at(static_cast<std::size_t>(leader), t) ==
            trace.at(static_cast<std::size_t>(follower), t))) {
        throw TraceError("bus passengers " + std::to_string(leader) + " and " +
                         std::to_string(follower) +
                         " diverge at timestep " + std::to_string(t) +
                         " despite sharing a vehicle");
      }
    }
  }
}

}  // namespace

MobilityTrace ingest_positions_csv(const std::string& path,
                                   const PopulationSpec& population,
                                   const MobilityParams& params, const Area& area,
                                   double duration_s, double resolution_s,
                                   IngestStats* stats) {
  const std::size_t steps = step_count(duration_s, resolution_s);
  const std::size_t n_users = static_cast<std::size_t>(population.total());
  MobilityTrace trace(n_users, steps, resolution_s);
  IngestStats local;

  std::vector<bool> seen(n_users * steps, false);
  CsvReader reader(path);
  std::string_view line;
  if (!reader.next_line(line) || line != "t,user_id,x,y") {
    throw IoError("'" + path + "': expected header 't,user_id,x,y'");
  }
  std::vector<std::string_view> fields;
  while (reader.next_line(line)) {
    if (line.empty()) continue;
    split_fields(line, fields);
    if (fields.size() != 4) {
      throw IoError("'" + path + "' line " + std::to_string(reader.line_number()) +
                    ": expected 4 fields");
    }
    const std::int64_t t = parse_int(fields[0], "t");
    const std::int64_t u = parse_int(fields[1], "user_id");
    if (u < 0 || static_cast<std::size_t>(u) >= n_users) {
      throw TraceError("'" + path + "' line " + std::to_string(reader.line_number()) +
                       ": user_id " + std::to_string(u) + " outside declared population of " +
                       std::to_string(n_users));
    }
    if (t < 0 || static_cast<std::size_t>(t) >= steps) {
      throw TraceError("'" + path + "' line " + std::to_string(reader.line_number()) +
                       ": timestep " + std::to_string(t) + " outside [0, " +
                       std::to_string(steps) + ")");
    }
    Point p{parse_double(fields[2], "x"), parse_double(fields[3], "y")};
    if (!area.contains(p)) {
      p = area.clip(p);
      ++local.clipped_positions;
    }
    const std::size_t idx = static_cast<std::size_t>(t) * n_users + static_cast<std::size_t>(u);
    if (seen[idx]) {
      throw TraceError("'" + path + "': duplicate position for user " + std::to_string(u) +
                       " at timestep " + std::to_string(t));
    }
    seen[idx] = true;
    trace.set(static_cast<std::size_t>(u), static_cast<std::size_t>(t), p);
  }

  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t u = 0; u < n_users; ++u) {
      if (!seen[t * n_users + u]) {
        throw TraceError("trace gap: no position for user " + std::to_string(u) +
                         " at timestep " + std::to_string(t));
      }
    }
  }

  check_bus_groups(trace, population);
  count_speed_violations(trace, population, params, local);
  if (stats) *stats = local;
  return trace;
}

MobilityTrace ingest_fcd_xml(const std::string& path,
                             const PopulationSpec& population,
                             const MobilityParams& params,
                             const FcdEntityPrefixes& prefixes, const Area& area,
                             double duration_s, double resolution_s,
                             IngestStats* stats) {
  const std::size_t steps = step_count(duration_s, resolution_s);
  const std::size_t n_users = static_cast<std::size_t>(population.total());
  MobilityTrace trace(n_users, steps, resolution_s);
  IngestStats local;

  namespace pt = boost::property_tree;
  pt::ptree doc;
  try {
    pt::read_xml(path, doc);
  } catch (const pt::xml_parser_error& e) {
    throw IoError("'" + path + "': " + e.what());
  }

  const auto root_it = doc.begin();
  if (root_it == doc.end()) throw IoError("'" + path + "': empty XML document");
  const pt::ptree& root = root_it->second;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::map<std::string, std::vector<Point>> entities;  // id -> per-step position

  auto starts_with = [](const std::string& s, const std::string& prefix) {
    return !prefix.empty() && s.rfind(prefix, 0) == 0;
  };

  for (const auto& [name, node] : root) {
    if (name != "timestep") continue;
    const double time_s = node.get<double>("<xmlattr>.time", -1.0);
    const std::int64_t t = std::llround(time_s / resolution_s);
    if (t < 0 || static_cast<std::size_t>(t) >= steps) continue;
    for (const auto& [child_name, child] : node) {
      if (child_name != "vehicle" && child_name != "person") continue;
      const auto id = child.get_optional<std::string>("<xmlattr>.id");
      const auto x = child.get_optional<double>("<xmlattr>.x");
      const auto y = child.get_optional<double>("<xmlattr>.y");
      if (!id || !x || !y) {
        throw IoError("'" + path + "': " + child_name +
                      " element missing id/x/y attributes at time " + std::to_string(time_s));
      }
      auto [it, inserted] = entities.try_emplace(*id);
      if (inserted) it->second.assign(steps, Point{nan, nan});
      Point p{*x, *y};
      if (!area.contains(p)) {
        p = area.clip(p);
        ++local.clipped_positions;
      }
      it->second[static_cast<std::size_t>(t)] = p;
    }
  }

  // Classify entities; std::map iteration is already id-sorted.
  std::vector<const std::vector<Point>*> cars, buses, peds;
  std::vector<std::string> car_ids, bus_ids, ped_ids;
  for (const auto& [id, positions] : entities) {
    if (starts_with(id, prefixes.bus)) {
      buses.push_back(&positions);
      bus_ids.push_back(id);
    } else if (starts_with(id, prefixes.car)) {
      cars.push_back(&positions);
      car_ids.push_back(id);
    } else if (starts_with(id, prefixes.pedestrian)) {
      peds.push_back(&positions);
      ped_ids.push_back(id);
    } else {
      throw TraceError("'" + path + "': entity id '" + id +
                       "' matches no configured car/bus/pedestrian prefix");
    }
  }

  struct ClassPlan {
    std::int32_t user_base;
    std::int32_t user_count;
    const std::vector<const std::vector<Point>*>* fleet;
    const std::vector<std::string>* fleet_ids;
    const char* label;
  };
  const ClassPlan plans[3] = {
      {0, population.car_passengers, &cars, &car_ids, "car"},
      {population.car_passengers, population.bus_passengers, &buses, &bus_ids, "bus"},
      {population.car_passengers + population.bus_passengers, population.pedestrians,
       &peds, &ped_ids, "pedestrian"},
  };

  for (const auto& plan : plans) {
    if (plan.user_count == 0) continue;
    if (plan.fleet->empty()) {
      throw TraceError("'" + path + "': no " + std::string(plan.label) +
                       " entities to carry " + std::to_string(plan.user_count) + " users");
    }
    for (std::int32_t i = 0; i < plan.user_count; ++i) {
      const std::size_t e = static_cast<std::size_t>(i) % plan.fleet->size();
      const std::vector<Point>& positions = *(*plan.fleet)[e];
      const std::int32_t user = plan.user_base + i;
      for (std::size_t t = 0; t < steps; ++t) {
        if (std::isnan(positions[t].x)) {
          throw TraceError("trace gap: no position for user " + std::to_string(user) +
                           " (entity '" + (*plan.fleet_ids)[e] + "') at timestep " +
                           std::to_string(t));
        }
        trace.set(static_cast<std::size_t>(user), t, positions[t]);
      }
    }
  }

  count_speed_violations(trace, population, params, local);
  if (stats) *stats = local;
  return trace;
}

}  // namespace edgesim
