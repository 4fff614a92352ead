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

#include "edgesim/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "edgesim/csv.hpp"
#include "edgesim/errors.hpp"
#include "edgesim/metrics.hpp"
#include "edgesim/mobility.hpp"
#include "edgesim/offload.hpp"
#include "edgesim/population.hpp"
#include "edgesim/privacy.hpp"
#include "edgesim/topology.hpp"

namespace edgesim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
}

/// Refuses to clobber prior outputs: a stale partial set silently mixed with
/// fresh files would defeat the pairing checks downstream.
void refuse_existing(const std::string& out_dir, const std::vector<std::string>& names,
                     bool overwrite) {
  if (overwrite) return;
  std::vector<std::string> present;
  for (const auto& name : names) {
    if (fs::exists(join_path(out_dir, name))) present.push_back(name);
  }
  if (present.empty()) return;
  std::sort(present.begin(), present.end());
  std::string msg = "output files already exist in '" + out_dir + "':";
  for (const auto& name : present) msg += " '" + name + "'";
  msg += "; pass --overwrite to replace them";
  throw ConfigError(msg);
}

/// Records a stage's produced files and closes with manifest_<stage>.json.
class ManifestBuilder {
 public:
  ManifestBuilder(std::string command, const SimConfig& config)
      : command_(std::move(command)), config_(&config),
        start_(std::chrono::steady_clock::now()) {}

  void add_artifact(const std::string& name) { artifacts_.push_back(name); }

  void set_warning(const std::string& key, std::uint64_t value) { warnings_[key] = value; }
  void set_total(const std::string& key, const json& value) { totals_[key] = value; }

  std::string write(const std::string& out_dir) {
    const auto elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start_).count();
    std::sort(artifacts_.begin(), artifacts_.end());
    artifacts_.erase(std::unique(artifacts_.begin(), artifacts_.end()), artifacts_.end());

    json doc;
    doc["command"] = command_;
    doc["tool_version"] = kToolVersion;
    doc["config_hash"] = config_->config_hash_hex();
    json seeds = json::array();
    for (const auto s : config_->seeds) seeds.push_back(s);
    doc["seeds"] = seeds;
    json eps = json::array();
    for (const double e : config_->epsilons) eps.push_back(epsilon_label(e));
    doc["epsilons"] = eps;
    doc["artifacts"] = artifacts_;
    doc["warnings"] = warnings_;
    if (!totals_.empty()) doc["totals"] = totals_;
    doc["wall_clock_s"] = elapsed;

    const std::string name = "manifest_" + command_ + ".json";
    std::ofstream out(join_path(out_dir, name), std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + join_path(out_dir, name) + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("error writing '" + join_path(out_dir, name) + "'");
    return name;
  }

 private:
  std::string command_;
  const SimConfig* config_;
  std::vector<std::string> artifacts_;
  json warnings_ = json::object();
  json totals_ = json::object();
  std::chrono::steady_clock::time_point start_;
};

void log_ingest_warnings(const IngestStats& stats, std::ostream& log) {
  if (stats.clipped_positions > 0) {
    log << "warning: " << stats.clipped_positions
        << " trace position(s) outside the area were clipped to its boundary\n";
  }
  if (stats.speed_cap_violations > 0) {
    log << "warning: " << stats.speed_cap_violations
        << " trace step(s) exceed the configured speed caps\n";
  }
}

/// Builds (or reuses) the topology files for `seed`; returns the file pair.
/// Freshly written names are appended to `written`.
std::pair<std::string, std::string> ensure_topology_files(
    const SimConfig& config, const std::string& out_dir, std::uint64_t seed,
    std::vector<std::string>* written, std::ostream& log) {
  const std::string bs_name = bs_csv_name(config, seed);
  const std::string mh_name = mh_csv_name(config, seed);
  const std::string bs_path = join_path(out_dir, bs_name);
  const std::string mh_path = join_path(out_dir, mh_name);
  if (!fs::exists(bs_path) || !fs::exists(mh_path)) {
    const std::uint64_t topo_seed =
        config.topology_resample_per_seed ? seed : config.topology_seed;
    const Topology topo = Topology::build(config.area, config.topology, topo_seed);
    topo.save_csv(bs_path, mh_path);
    if (written) {
      written->push_back(bs_name);
      written->push_back(mh_name);
    }
    log << "generate: " << topo.base_stations().size() << " base stations / "
        << topo.mec_hosts().size() << " hosts -> " << bs_name << ", " << mh_name << '\n';
  }
  return {bs_path, mh_path};
}

/// Builds (or reuses) the per-seed trace file; returns its full path.
std::string ensure_trace_file(const SimConfig& config, const std::string& out_dir,
                              std::uint64_t seed, std::vector<std::string>* written,
                              IngestStats* stats, std::ostream& log) {
  const std::string name = trace_csv_name(config, seed);
  const std::string path = join_path(out_dir, name);
  if (fs::exists(path)) return path;

  MobilityTrace trace = [&] {
    if (config.mobility_source == "synthetic") {
      return generate_synthetic(config.population, config.mobility, config.area,
                                config.duration_s, config.resolution_s, seed);
    }
    if (config.mobility_source == "csv") {
      return ingest_positions_csv(config.mobility_trace_path, config.population,
                                  config.mobility, config.area, config.duration_s,
                                  config.resolution_s, stats);
    }
    return ingest_fcd_xml(config.mobility_trace_path, config.population, config.mobility,
                          config.fcd_prefixes, config.area, config.duration_s,
                          config.resolution_s, stats);
  }();
  trace.save_csv(path);
  if (written) written->push_back(name);
  log << "generate: trace for seed " << seed << ": " << trace.users() << " users x "
      << trace.steps() << " steps -> " << name << '\n';
  return path;
}

/// Names every trace file the configuration implies. External sources share
/// one canonical trace; synthetic mobility is resampled per seed.
std::vector<std::string> trace_names(const SimConfig& config) {
  std::vector<std::string> names;
  if (config.mobility_source == "synthetic") {
    names.reserve(config.seeds.size());
    for (const auto seed : config.seeds) names.push_back(trace_csv_name(config, seed));
  } else {
    names.push_back(trace_csv_name(config, config.seeds.front()));
  }
  return names;
}

std::vector<std::string> topology_names(const SimConfig& config) {
  std::vector<std::string> names;
  if (config.topology_resample_per_seed) {
    for (const auto seed : config.seeds) {
      names.push_back(bs_csv_name(config, seed));
      names.push_back(mh_csv_name(config, seed));
    }
  } else {
    names.push_back(bs_csv_name(config, 0));
    names.push_back(mh_csv_name(config, 0));
  }
  return names;
}

EngineConfig engine_config(const SimConfig& config) {
  EngineConfig ecfg;
  ecfg.area = config.area;
  ecfg.radio = config.radio;
  ecfg.latency = config.latency;
  ecfg.apps = config.apps;
  ecfg.mechanism = config.mechanism;
  ecfg.disk_radius_factor = config.uniform_disk_radius_factor;
  ecfg.pf_iterate_after_denial = config.pf_iterate_after_denial;
  return ecfg;
}

struct SeedRunResult {
  std::vector<RunCounters> counters;
  IngestStats trace_stats;
};

}  // namespace

std::string bs_csv_name(const SimConfig& config, std::uint64_t seed) {
  if (!config.topology_resample_per_seed) return "bs.csv";
  std::string name = "bs_seed";
  append_number(name, static_cast<std::int64_t>(seed));
  name += ".csv";
  return name;
}

std::string mh_csv_name(const SimConfig& config, std::uint64_t seed) {
  if (!config.topology_resample_per_seed) return "mh.csv";
  std::string name = "mh_seed";
  append_number(name, static_cast<std::int64_t>(seed));
  name += ".csv";
  return name;
}

std::string trace_csv_name(const SimConfig& config, std::uint64_t seed) {
  if (config.mobility_source != "synthetic") return "trace.csv";
  std::string name = "trace_seed";
  append_number(name, static_cast<std::int64_t>(seed));
  name += ".csv";
  return name;
}

std::string outcomes_csv_name(std::uint64_t seed, double epsilon) {
  std::string name = "outcomes_seed";
  append_number(name, static_cast<std::int64_t>(seed));
  name += "_eps";
  name += epsilon_label(epsilon);
  name += ".csv";
  return name;
}

void cmd_generate(const SimConfig& config, const std::string& out_dir, bool overwrite,
                  std::ostream& log) {
  config.validate();
  ensure_out_dir(out_dir);

  std::vector<std::string> targets = topology_names(config);
  const std::vector<std::string> traces = trace_names(config);
  targets.insert(targets.end(), traces.begin(), traces.end());
  refuse_existing(out_dir, targets, overwrite);
  if (overwrite) {
    for (const auto& name : targets) fs::remove(join_path(out_dir, name));
  }

  ManifestBuilder manifest("generate", config);
  std::vector<std::string> written;
  IngestStats stats;
  if (config.topology_resample_per_seed) {
    for (const auto seed : config.seeds) {
      ensure_topology_files(config, out_dir, seed, &written, log);
    }
  } else {
    ensure_topology_files(config, out_dir, config.seeds.front(), &written, log);
  }
  if (config.mobility_source == "synthetic") {
    for (const auto seed : config.seeds) {
      ensure_trace_file(config, out_dir, seed, &written, &stats, log);
    }
  } else {
    ensure_trace_file(config, out_dir, config.seeds.front(), &written, &stats, log);
  }

  log_ingest_warnings(stats, log);
  for (const auto& name : written) manifest.add_artifact(name);
  manifest.set_warning("clipped_positions", stats.clipped_positions);
  manifest.set_warning("speed_cap_violations", stats.speed_cap_violations);
  const std::string manifest_name = manifest.write(out_dir);
  log << "generate: wrote " << written.size() << " file(s) + " << manifest_name << '\n';
}

void cmd_run(const SimConfig& config, const std::string& out_dir, bool overwrite,
             std::ostream& log) {
  config.validate();
  ensure_out_dir(out_dir);

  std::vector<std::string> outcome_names;
  outcome_names.reserve(config.seeds.size() * config.epsilons.size());
  for (const auto seed : config.seeds) {
    for (const double eps : config.epsilons) {
      outcome_names.push_back(outcomes_csv_name(seed, eps));
    }
  }
  refuse_existing(out_dir, outcome_names, overwrite);

  ManifestBuilder manifest("run", config);

  // Inputs from the generate stage are reused when present and produced on
  // demand otherwise, so `run` works standalone on a fresh directory.
  std::vector<std::string> written_inputs;
  IngestStats ingest_stats;
  std::vector<std::string> trace_paths(config.seeds.size());
  std::vector<std::pair<std::string, std::string>> topo_paths(config.seeds.size());
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    topo_paths[i] = ensure_topology_files(config, out_dir, config.seeds[i],
                                          &written_inputs, log);
    trace_paths[i] = ensure_trace_file(config, out_dir, config.seeds[i], &written_inputs,
                                       &ingest_stats, log);
  }

  std::unique_ptr<Topology> shared_topology;
  if (!config.topology_resample_per_seed) {
    shared_topology = std::make_unique<Topology>(
        Topology::load_csv(config.area, topo_paths[0].first, topo_paths[0].second));
  }

  const EngineConfig ecfg = engine_config(config);
  std::vector<SeedRunResult> results(config.seeds.size());
  std::vector<std::exception_ptr> errors(config.seeds.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  const auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= config.seeds.size()) return;
      const std::uint64_t seed = config.seeds[idx];
      try {
        std::unique_ptr<Topology> local;
        if (config.topology_resample_per_seed) {
          local = std::make_unique<Topology>(Topology::load_csv(
              config.area, topo_paths[idx].first, topo_paths[idx].second));
        }
        const Topology& topo = local ? *local : *shared_topology;

        MobilityTrace trace = ingest_positions_csv(
            trace_paths[idx], config.population, config.mobility, config.area,
            config.duration_s, config.resolution_s, &results[idx].trace_stats);
        std::vector<UserAgent> users = make_population(config.population);
        assign_applications(users, config.mix, seed);

        std::vector<std::unique_ptr<CsvOutcomeSink>> sinks;
        std::vector<OutcomeSink*> sink_ptrs;
        sinks.reserve(config.epsilons.size());
        for (const double eps : config.epsilons) {
          sinks.push_back(std::make_unique<CsvOutcomeSink>(
              join_path(out_dir, outcomes_csv_name(seed, eps)), seed, eps));
          sink_ptrs.push_back(sinks.back().get());
        }
        run_seed(topo, trace, users, ecfg, seed, config.epsilons, sink_ptrs,
                 &results[idx].counters);
      } catch (...) {
        errors[idx] = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::size_t n_threads = config.threads > 0
                              ? static_cast<std::size_t>(config.threads)
                              : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, config.seeds.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  std::uint64_t clipped_reports = 0;
  std::uint64_t capacity_denials = 0;
  std::uint64_t trace_clipped = ingest_stats.clipped_positions;
  std::uint64_t speed_violations = ingest_stats.speed_cap_violations;
  json accepted_totals = json::object();
  std::uint64_t rows_per_level = 0;
  for (std::size_t li = 0; li < config.epsilons.size(); ++li) {
    std::uint64_t accepted = 0;
    for (const auto& result : results) {
      const RunCounters& c = result.counters[li];
      accepted += c.accepted;
      clipped_reports += c.clipped_reports;
      capacity_denials += c.capacity_denials;
      if (li == 0) rows_per_level += c.outcomes;
    }
    accepted_totals[epsilon_label(config.epsilons[li])] = accepted;
  }
  for (const auto& result : results) {
    trace_clipped += result.trace_stats.clipped_positions;
    speed_violations += result.trace_stats.speed_cap_violations;
  }

  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    log << "run: seed " << config.seeds[i] << ": " << results[i].counters[0].outcomes
        << " requests per privacy level\n";
  }
  if (trace_clipped > 0) {
    log << "warning: " << trace_clipped << " trace position(s) clipped to the area\n";
  }
  if (speed_violations > 0) {
    log << "warning: " << speed_violations << " trace step(s) exceed the speed caps\n";
  }
  if (clipped_reports > 0) {
    log << "warning: " << clipped_reports
        << " obfuscated report(s) fell outside the area and were clipped\n";
  }
  if (capacity_denials > 0) {
    log << "note: " << capacity_denials << " request(s) denied on host capacity\n";
  }

  for (const auto& name : written_inputs) manifest.add_artifact(name);
  for (const auto& name : outcome_names) manifest.add_artifact(name);
  manifest.set_warning("trace_clipped_positions", trace_clipped);
  manifest.set_warning("speed_cap_violations", speed_violations);
  manifest.set_warning("clipped_reports", clipped_reports);
  manifest.set_warning("capacity_denials", capacity_denials);
  manifest.set_total("requests_per_level", rows_per_level);
  manifest.set_total("accepted", accepted_totals);
  const std::string manifest_name = manifest.write(out_dir);
  log << "run: wrote " << outcome_names.size() << " outcome file(s) + " << manifest_name
      << '\n';
}

void cmd_report(const SimConfig& config, const std::string& out_dir, bool overwrite,
                std::ostream& log) {
  config.validate();
  ensure_out_dir(out_dir);

  // Every (seed, epsilon) stream must be present before any file is read:
  // a partial grid would bias the paired statistics.
  std::vector<std::string> missing;
  for (const auto seed : config.seeds) {
    for (const double eps : config.epsilons) {
      const std::string name = outcomes_csv_name(seed, eps);
      if (!fs::exists(join_path(out_dir, name))) {
        std::string entry = "(seed=";
        append_number(entry, static_cast<std::int64_t>(seed));
        entry += ", epsilon=" + epsilon_label(eps) + ")";
        missing.push_back(entry);
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "incomplete outcome grid in '" + out_dir + "'; missing:";
    for (const auto& entry : missing) msg += " " + entry;
    throw PairingError(msg);
  }

  const std::vector<std::string> outputs = {
      MetricsAccumulator::kTable3Csv, MetricsAccumulator::kFig5Csv,
      MetricsAccumulator::kFig6Csv,   MetricsAccumulator::kFig7Csv,
      MetricsAccumulator::kFig8Csv,   MetricsAccumulator::kReportJson};
  refuse_existing(out_dir, outputs, overwrite);

  ManifestBuilder manifest("report", config);
  MetricsAccumulator acc(config.epsilons);
  for (const auto seed : config.seeds) {
    std::vector<std::string> paths;
    paths.reserve(config.epsilons.size());
    for (const double eps : config.epsilons) {
      paths.push_back(join_path(out_dir, outcomes_csv_name(seed, eps)));
    }
    acc.consume_seed(seed, paths);
  }
  acc.write_outputs(out_dir);

  for (const auto& name : outputs) manifest.add_artifact(name);
  const std::string manifest_name = manifest.write(out_dir);
  log << "report: " << config.seeds.size() << " seed(s) x " << config.epsilons.size()
      << " privacy level(s) -> " << outputs.size() << " file(s) + " << manifest_name << '\n';
}

void cmd_all(const SimConfig& config, const std::string& out_dir, bool overwrite,
             std::ostream& log) {
  cmd_generate(config, out_dir, overwrite, log);
  cmd_run(config, out_dir, overwrite, log);
  cmd_report(config, out_dir, overwrite, log);
}

}  // namespace edgesim
