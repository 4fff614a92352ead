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

#include "edgesim/topology.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "edgesim/csv.hpp"
#include "edgesim/errors.hpp"

namespace edgesim {

namespace {

std::vector<Point> uniform_points(std::size_t count, const Area& area,
                                  rng::CounterRng& rng) {
  std::vector<Point> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    points.push_back(Point{area.width_m * rng.next_double(),
                           area.height_m * rng.next_double()});
  }
  return points;
}

// Cell edge near the expected nearest-neighbor distance 1/sqrt(pi*lambda).
double cell_hint_for(std::size_t count, const Area& area) {
  if (count == 0) return area.width_m;
  const double lambda = static_cast<double>(count) / (area.width_m * area.height_m);
  return 1.0 / std::sqrt(std::numbers::pi * lambda);
}

}  // namespace

std::vector<Point> sample_hppp(double intensity_per_km2, const Area& area,
                               rng::CounterRng& rng) {
  if (intensity_per_km2 < 0.0) {
    throw ConfigError("HPPP intensity must be >= 0");
  }
  const double mean = intensity_per_km2 * area.area_km2();
  const std::size_t count = static_cast<std::size_t>(rng.poisson(mean));
  return uniform_points(count, area, rng);
}

std::vector<Point> sample_hppp_fixed_count(std::size_t count, const Area& area,
                                           rng::CounterRng& rng) {
  return uniform_points(count, area, rng);
}

Topology Topology::build(const Area& area, const TopologyConfig& config,
                         std::uint64_t seed) {
  if (!area.valid()) throw ConfigError("topology area must have positive extent");

  rng::CounterRng bs_rng(seed, rng::Stream::kTopologyBs);
  rng::CounterRng mh_rng(seed, rng::Stream::kTopologyMh);

  std::vector<Point> bs_points;
  std::vector<Point> mh_points;
  if (config.use_intensity) {
    bs_points = sample_hppp(config.bs_intensity_per_km2, area, bs_rng);
    mh_points = sample_hppp(config.mh_intensity_per_km2, area, mh_rng);
  } else {
    if (config.bs_count < 0 || config.mh_count < 0) {
      throw ConfigError("topology counts must be >= 0");
    }
    bs_points = sample_hppp_fixed_count(static_cast<std::size_t>(config.bs_count),
                                        area, bs_rng);
    mh_points = sample_hppp_fixed_count(static_cast<std::size_t>(config.mh_count),
                                        area, mh_rng);
  }

  std::vector<BaseStation> bs;
  bs.reserve(bs_points.size());
  for (std::size_t i = 0; i < bs_points.size(); ++i) {
    bs.push_back(BaseStation{static_cast<std::int32_t>(i), bs_points[i],
                             config.bs_capacity_bps});
  }
  std::vector<MecHost> mh;
  mh.reserve(mh_points.size());
  for (std::size_t i = 0; i < mh_points.size(); ++i) {
    mh.push_back(MecHost{static_cast<std::int32_t>(i), mh_points[i],
                         config.mh_capacity_bps});
  }
  return from_entities(area, std::move(bs), std::move(mh));
}

Topology Topology::from_entities(const Area& area, std::vector<BaseStation> bs,
                                 std::vector<MecHost> mh) {
  if (bs.empty()) throw ConfigError("topology needs at least one base station");
  if (mh.empty()) throw ConfigError("topology needs at least one MEC host");

  Topology topo;
  topo.area_ = area;
  topo.base_stations_ = std::move(bs);
  topo.mec_hosts_ = std::move(mh);
  topo.finalize_indices();
  return topo;
}

void Topology::finalize_indices() {
  std::vector<Point> bs_points(base_stations_.size());
  for (std::size_t i = 0; i < base_stations_.size(); ++i) {
    if (base_stations_[i].id != static_cast<std::int32_t>(i)) {
      throw ConfigError("base station ids must be consecutive from 0");
    }
    if (!area_.contains(base_stations_[i].position)) {
      throw ConfigError("base station " + std::to_string(i) + " lies outside the area");
    }
    if (base_stations_[i].capacity_bps <= 0.0) {
      throw ConfigError("base station capacity must be > 0");
    }
    bs_points[i] = base_stations_[i].position;
  }
  std::vector<Point> mh_points(mec_hosts_.size());
  for (std::size_t i = 0; i < mec_hosts_.size(); ++i) {
    if (mec_hosts_[i].id != static_cast<std::int32_t>(i)) {
      throw ConfigError("MEC host ids must be consecutive from 0");
    }
    if (!area_.contains(mec_hosts_[i].position)) {
      throw ConfigError("MEC host " + std::to_string(i) + " lies outside the area");
    }
    if (mec_hosts_[i].capacity_bps <= 0.0) {
      throw ConfigError("MEC host capacity must be > 0");
    }
    mh_points[i] = mec_hosts_[i].position;
  }

  bs_index_.build(area_, cell_hint_for(bs_points.size(), area_), bs_points);
  mh_index_.build(area_, cell_hint_for(mh_points.size(), area_), mh_points);

  ideal_mh_.resize(base_stations_.size());
  for (std::size_t i = 0; i < base_stations_.size(); ++i) {
    ideal_mh_[i] = mh_index_.nearest(base_stations_[i].position);
  }
}

void Topology::save_csv(const std::string& bs_path, const std::string& mh_path) const {
  {
    CsvWriter w(bs_path);
    w.write_raw("id,x,y,capacity_bps\n");
    for (const auto& b : base_stations_) {
      auto& line = w.line();
      append_number(line, static_cast<std::int64_t>(b.id));
      line.push_back(',');
      append_number(line, b.position.x);
      line.push_back(',');
      append_number(line, b.position.y);
      line.push_back(',');
      append_number(line, b.capacity_bps);
      w.end_line();
    }
    w.close();
  }
  {
    CsvWriter w(mh_path);
    w.write_raw("id,x,y,capacity_bps\n");
    for (const auto& m : mec_hosts_) {
      auto& line = w.line();
      append_number(line, static_cast<std::int64_t>(m.id));
      line.push_back(',');
      append_number(line, m.position.x);
      line.push_back(',');
      append_number(line, m.position.y);
      line.push_back(',');
      append_number(line, m.capacity_bps);
      w.end_line();
    }
    w.close();
  }
}

namespace {

template <typename Entity>
std::vector<Entity> load_entities(const std::string& path) {
  CsvReader reader(path);
  std::string_view line;
  if (!reader.next_line(line) || line != "id,x,y,capacity_bps") {
    throw IoError("'" + path + "': expected header 'id,x,y,capacity_bps'");
  }
  std::vector<Entity> out;
  std::vector<std::string_view> fields;
  while (reader.next_line(line)) {
    if (line.empty()) continue;
    split_fields(line, fields);
    if (fields.size() != 4) {
      throw IoError("'" + path + "' line " + std::to_string(reader.line_number()) +
                    ": expected 4 fields");
    }
    Entity e;
    e.id = static_cast<std::int32_t>(parse_int(fields[0], "id"));
    e.position.x = parse_double(fields[1], "x");
    e.position.y = parse_double(fields[2], "y");
    e.capacity_bps = parse_double(fields[3], "capacity_bps");
    out.push_back(e);
  }
  return out;
}

}  // namespace

Topology Topology::load_csv(const Area& area, const std::string& bs_path,
                            const std::string& mh_path) {
  return from_entities(area, load_entities<BaseStation>(bs_path),
                       load_entities<MecHost>(mh_path));
}

}  // namespace edgesim
