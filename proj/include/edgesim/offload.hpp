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

#ifndef EDGESIM_OFFLOAD_HPP_
#define EDGESIM_OFFLOAD_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "edgesim/csv.hpp"
#include "edgesim/geometry.hpp"
#include "edgesim/link_model.hpp"
#include "edgesim/mobility.hpp"
#include "edgesim/population.hpp"
#include "edgesim/privacy.hpp"
#include "edgesim/topology.hpp"

namespace edgesim {

// Denial reason bits. A request is accepted iff no bit is set.
inline constexpr std::uint8_t kReasonLatency = 1;     // BS->MH latency above bound
inline constexpr std::uint8_t kReasonThroughput = 2;  // PF allocation below demand
inline constexpr std::uint8_t kReasonCapacity = 4;    // MH residual exhausted

struct RequestOutcome {
  std::int32_t user_id = -1;
  std::int64_t timestep = -1;
  std::int32_t true_bs = -1;
  std::int32_t presumed_bs = -1;
  std::int32_t selected_mh = -1;
  std::int32_t ideal_mh = -1;
  std::uint8_t reasons = 0;
  double achieved_latency_ms = 0.0;
  double ideal_latency_ms = 0.0;
  double allocated_bps = 0.0;

  bool accepted() const { return reasons == 0; }
};

// Fills reasons/allocated_bps from the three admission conditions; on
// acceptance the selected MH's residual is debited. Reads
// outcome.achieved_latency_ms; all conditions evaluated, no short-circuit.
void evaluate_admission(RequestOutcome& outcome, const AppParams& app,
                        double pf_allocation_bps, double& mh_residual_bps);

// Largest-remainder apportionment of n users into the three applications.
struct AppCounts {
  std::int32_t video = 0;
  std::int32_t ar = 0;
  std::int32_t vr = 0;
};
AppCounts apportion_applications(const AppMix& mix, std::int32_t n);

// Assigns applications per mobility type with exact apportioned counts,
// shuffled deterministically from the seed. Identical for every privacy
// level of the same seed by construction (the draw ignores epsilon).
void assign_applications(std::vector<UserAgent>& users, const AppMixTable& mixes,
                         std::uint64_t seed);

// Receives outcomes of one (seed, epsilon) stream in (timestep, user) order.
class OutcomeSink {
 public:
  virtual ~OutcomeSink() = default;
  virtual void on_outcome(const UserAgent& user, const RequestOutcome& outcome) = 0;
  virtual void finish() {}
};

// Streams outcomes to the canonical CSV layout.
class CsvOutcomeSink : public OutcomeSink {
 public:
  CsvOutcomeSink(const std::string& path, std::uint64_t seed, double epsilon);
  void on_outcome(const UserAgent& user, const RequestOutcome& outcome) override;
  void finish() override;

  static const char* header();

 private:
  CsvWriter writer_;
  std::string seed_prefix_;  // "<seed>,<epsilon>," reused on every row
};

// Counts rows and acceptances; used by tests and the acceptance suite.
class CountingSink : public OutcomeSink {
 public:
  void on_outcome(const UserAgent&, const RequestOutcome& outcome) override {
    ++rows;
    if (outcome.accepted()) ++accepted;
  }
  std::uint64_t rows = 0;
  std::uint64_t accepted = 0;
};

struct EngineConfig {
  Area area;
  RadioParams radio;
  LatencyParams latency;
  AppCatalog apps;
  MechanismKind mechanism = MechanismKind::kPlanarLaplace;
  double disk_radius_factor = 3.0;
  bool pf_iterate_after_denial = false;
};

struct RunCounters {
  std::uint64_t outcomes = 0;
  std::uint64_t accepted = 0;
  std::uint64_t clipped_reports = 0;
  std::uint64_t capacity_denials = 0;
};

// Executes one seed across all privacy levels in a single pass over the
// trace. Per-timestep state that does not depend on epsilon (association,
// achievable rates, the proportional-fair pool) is computed once and shared,
// which both enforces the pairing guarantees and avoids redundant work.
// sinks[i] receives the stream for epsilons[i]; counters (optional) must
// have the same length as epsilons.
void run_seed(const Topology& topology, const MobilityTrace& trace,
              const std::vector<UserAgent>& users, const EngineConfig& config,
              std::uint64_t seed, const std::vector<double>& epsilons,
              const std::vector<OutcomeSink*>& sinks,
              std::vector<RunCounters>* counters = nullptr);

}  // namespace edgesim

#endif  // EDGESIM_OFFLOAD_HPP_
