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

#ifndef EDGESIM_METRICS_HPP_
#define EDGESIM_METRICS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgesim/csv.hpp"
#include "edgesim/population.hpp"

namespace edgesim {

struct OutcomeRow {
  std::int64_t seed = 0;
  double epsilon = 0.0;
  std::int64_t t = 0;
  std::int32_t user_id = 0;
  MobilityType mobility = MobilityType::kPedestrian;
  ApplicationType app = ApplicationType::kVideo;
  std::int32_t true_bs = -1;
  std::int32_t presumed_bs = -1;
  std::int32_t selected_mh = -1;
  std::int32_t ideal_mh = -1;
  bool accepted = false;
  bool reason_latency = false;
  bool reason_throughput = false;
  bool reason_capacity = false;
  double achieved_latency_ms = 0.0;
  double ideal_latency_ms = 0.0;
  double allocated_mbps = 0.0;
};

// Streams one outcome CSV; rows come back in file order.
class OutcomeReader {
 public:
  explicit OutcomeReader(const std::string& path);
  bool next(OutcomeRow& row);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  CsvReader reader_;
  std::vector<std::string_view> fields_;
};

// Student-t two-sided 95% interval over per-seed values.
struct CiValue {
  double mean = 0.0;
  double half_width = 0.0;
  std::size_t n = 0;
  bool has_ci = false;  // requires n >= 2
};
CiValue t_confidence_interval(const std::vector<double>& values);

// Per-seed raw counts; fractions and intervals are derived at finalization.
struct LevelTally {
  std::uint64_t requests = 0;
  std::uint64_t accepted = 0;
  // Denials projected onto the latency/throughput bits; denials carrying
  // neither bit are capacity-only. The four buckets partition all denials.
  std::uint64_t latency_only = 0;
  std::uint64_t throughput_only = 0;
  std::uint64_t both_lat_thr = 0;
  std::uint64_t capacity_only = 0;
  // Index 0..2 = mobility types, 3 = all.
  std::array<std::uint64_t, 4> total_by_mob{};
  std::array<std::uint64_t, 4> non_ideal_by_mob{};
  std::array<double, 4> latency_pct_sum_by_mob{};
  std::array<std::uint64_t, 4> latency_nonideal_valid_by_mob{};
  std::array<std::uint64_t, 4> latency_valid_all_by_mob{};
  std::array<std::uint64_t, 4> zero_ideal_excluded_by_mob{};
  std::array<std::uint64_t, 3> total_by_app{};
  std::array<std::uint64_t, 3> accepted_by_app{};
};

struct SeedTally {
  std::uint64_t seed = 0;
  std::uint64_t requests_per_level = 0;
  std::uint64_t always_offloaded = 0;
  std::uint64_t privacy_dependent = 0;
  std::uint64_t never_offloaded = 0;
  std::vector<LevelTally> levels;
  // fig8 cells: accepted at epsilon=inf yet denied at every other level.
  std::array<std::array<std::uint64_t, 3>, 3> impact_hits{};   // [mobility][app]
  std::array<std::array<std::uint64_t, 3>, 3> impact_totals{};
};

// Consumes paired per-epsilon outcome streams seed by seed, in lockstep;
// any divergence in (t, user) sequencing or in paired fields is an error.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(std::vector<double> epsilons);

  void consume_seed(std::uint64_t expected_seed,
                    const std::vector<std::string>& outcome_paths);

  const std::vector<double>& epsilons() const { return epsilons_; }
  const std::vector<SeedTally>& tallies() const { return tallies_; }
  std::optional<std::size_t> inf_level() const;

  nlohmann::json report_json() const;
  void write_outputs(const std::string& out_dir) const;

  static constexpr const char* kTable3Csv = "table3.csv";
  static constexpr const char* kFig5Csv = "fig5.csv";
  static constexpr const char* kFig6Csv = "fig6.csv";
  static constexpr const char* kFig7Csv = "fig7.csv";
  static constexpr const char* kFig8Csv = "fig8.csv";
  static constexpr const char* kReportJson = "report.json";

 private:
  std::vector<double> epsilons_;
  std::vector<SeedTally> tallies_;
};

}  // namespace edgesim

#endif  // EDGESIM_METRICS_HPP_
