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

#include "edgesim/offload.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "edgesim/errors.hpp"

namespace edgesim {

void evaluate_admission(RequestOutcome& outcome, const AppParams& app,
                        double pf_allocation_bps, double& mh_residual_bps) {
  std::uint8_t reasons = 0;
  if (outcome.achieved_latency_ms > app.latency_ms) reasons |= kReasonLatency;
  if (pf_allocation_bps < app.throughput_bps) reasons |= kReasonThroughput;
  if (mh_residual_bps < app.throughput_bps) reasons |= kReasonCapacity;
  outcome.reasons = reasons;
  outcome.allocated_bps = pf_allocation_bps;
  if (reasons == 0) mh_residual_bps -= app.throughput_bps;
}

AppCounts apportion_applications(const AppMix& mix, std::int32_t n) {
  if (n < 0) throw ConfigError("population counts must be >= 0");
  const double shares[3] = {mix.video_pct, mix.ar_pct, mix.vr_pct};
  std::int32_t counts[3];
  double remainder[3];
  std::int32_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    if (shares[k] < 0.0) throw ConfigError("application mix percentages must be >= 0");
    const double exact = static_cast<double>(n) * shares[k] / 100.0;
    counts[k] = static_cast<std::int32_t>(std::floor(exact));
    remainder[k] = exact - std::floor(exact);
    assigned += counts[k];
  }
  std::int32_t left = n - assigned;
  if (left < 0 || left > 3) {
    throw ConfigError("application mix must sum to 100 percent");
  }
  int order[3] = {0, 1, 2};
  std::sort(order, order + 3, [&](int a, int b) {
    return remainder[a] != remainder[b] ? remainder[a] > remainder[b] : a < b;
  });
  for (int k = 0; k < 3 && left > 0; ++k) {
    ++counts[order[k]];
    --left;
  }
  if (left != 0) throw ConfigError("application mix must sum to 100 percent");
  return AppCounts{counts[0], counts[1], counts[2]};
}

void assign_applications(std::vector<UserAgent>& users, const AppMixTable& mixes,
                         std::uint64_t seed) {
  for (int type = 0; type < 3; ++type) {
    const MobilityType mt = static_cast<MobilityType>(type);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < users.size(); ++i) {
      if (users[i].mobility == mt) members.push_back(i);
    }
    const AppCounts counts =
        apportion_applications(mixes.of(mt), static_cast<std::int32_t>(members.size()));
    std::vector<ApplicationType> labels;
    labels.reserve(members.size());
    labels.insert(labels.end(), static_cast<std::size_t>(counts.video),
                  ApplicationType::kVideo);
    labels.insert(labels.end(), static_cast<std::size_t>(counts.ar),
                  ApplicationType::kAr);
    labels.insert(labels.end(), static_cast<std::size_t>(counts.vr),
                  ApplicationType::kVr);
    rng::CounterRng rng(seed, rng::Stream::kAppAssign,
                        static_cast<std::uint64_t>(type));
    rng.shuffle(labels);
    for (std::size_t j = 0; j < members.size(); ++j) {
      users[members[j]].application = labels[j];
    }
  }
}

const char* CsvOutcomeSink::header() {
  return "seed,epsilon,t,user_id,mobility,app,true_bs,presumed_bs,selected_mh,"
         "ideal_mh,accepted,reason_latency,reason_throughput,reason_capacity,"
         "achieved_latency_ms,ideal_latency_ms,allocated_mbps\n";
}

CsvOutcomeSink::CsvOutcomeSink(const std::string& path, std::uint64_t seed,
                               double epsilon)
    : writer_(path) {
  writer_.write_raw(header());
  append_number(seed_prefix_, static_cast<std::int64_t>(seed));
  seed_prefix_.push_back(',');
  seed_prefix_ += epsilon_label(epsilon);
  seed_prefix_.push_back(',');
}

void CsvOutcomeSink::on_outcome(const UserAgent& user, const RequestOutcome& o) {
  std::string& line = writer_.line();
  line += seed_prefix_;
  append_number(line, o.timestep);
  line.push_back(',');
  append_number(line, static_cast<std::int64_t>(o.user_id));
  line.push_back(',');
  line += to_string(user.mobility);
  line.push_back(',');
  line += to_string(user.application);
  line.push_back(',');
  append_number(line, static_cast<std::int64_t>(o.true_bs));
  line.push_back(',');
  append_number(line, static_cast<std::int64_t>(o.presumed_bs));
  line.push_back(',');
  append_number(line, static_cast<std::int64_t>(o.selected_mh));
  line.push_back(',');
  append_number(line, static_cast<std::int64_t>(o.ideal_mh));
  line.push_back(',');
  line.push_back(o.accepted() ? '1' : '0');
  line.push_back(',');
  line.push_back((o.reasons & kReasonLatency) ? '1' : '0');
  line.push_back(',');
  line.push_back((o.reasons & kReasonThroughput) ? '1' : '0');
  line.push_back(',');
  line.push_back((o.reasons & kReasonCapacity) ? '1' : '0');
  line.push_back(',');
  append_number(line, o.achieved_latency_ms);
  line.push_back(',');
  append_number(line, o.ideal_latency_ms);
  line.push_back(',');
  append_number(line, o.allocated_bps / 1e6);
  writer_.end_line();
}

void CsvOutcomeSink::finish() { writer_.close(); }

void run_seed(const Topology& topology, const MobilityTrace& trace,
              const std::vector<UserAgent>& users, const EngineConfig& config,
              std::uint64_t seed, const std::vector<double>& epsilons,
              const std::vector<OutcomeSink*>& sinks,
              std::vector<RunCounters>* counters) {
  config.radio.validate();
  config.latency.validate();
  if (sinks.size() != epsilons.size()) {
    throw ConfigError("run_seed needs exactly one sink per privacy level");
  }
  if (trace.users() != users.size()) {
    throw PairingError("trace covers " + std::to_string(trace.users()) +
                       " users but the population has " + std::to_string(users.size()));
  }
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (users[u].id != static_cast<std::int32_t>(u)) {
      throw ConfigError("users must be ordered by contiguous id");
    }
  }
  if (counters) counters->assign(epsilons.size(), RunCounters{});
  if (epsilons.empty()) return;

  const std::size_t n_users = users.size();
  const std::size_t n_steps = trace.steps();
  const std::size_t n_bs = topology.base_stations().size();
  const std::size_t n_mh = topology.mec_hosts().size();
  const std::size_t n_levels = epsilons.size();

  std::vector<LocationObfuscator> mechanisms;
  mechanisms.reserve(n_levels);
  for (const double eps : epsilons) {
    mechanisms.emplace_back(config.mechanism, eps, config.disk_radius_factor);
  }

  // Per-user application constants.
  std::vector<double> demand(n_users), bound_ms(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    const AppParams& app = config.apps.of(users[u].application);
    demand[u] = app.throughput_bps;
    bound_ms[u] = app.latency_ms;
  }

  // The ideal MH and its latency are fixed per BS.
  std::vector<std::int32_t> bs_ideal(n_bs);
  std::vector<double> bs_ideal_lat(n_bs);
  for (std::size_t b = 0; b < n_bs; ++b) {
    const std::int32_t id = static_cast<std::int32_t>(b);
    bs_ideal[b] = topology.ideal_mh(id);
    bs_ideal_lat[b] =
        bs_mh_latency_ms(topology.bs_mh_distance(id, bs_ideal[b]), config.latency);
  }

  std::vector<std::int32_t> true_bs(n_users);
  std::vector<double> cap(n_users), alloc0(n_users), alloc_used(n_users);
  std::vector<std::int32_t> group_count(n_bs), group_cursor(n_bs);
  std::vector<std::int32_t> group_offset(n_bs + 1);
  std::vector<std::size_t> group_users(n_users);
  std::vector<double> residual(n_mh);
  std::vector<std::int32_t> presumed(n_users), selected(n_users);
  std::vector<double> achieved(n_users);
  std::vector<std::size_t> pool;
  pool.reserve(n_users);
  PfScratch pf;

  for (std::size_t t = 0; t < n_steps; ++t) {
    // Association, achievable rate, and the PF pool depend only on true
    // positions and are shared by every privacy level.
    for (std::size_t u = 0; u < n_users; ++u) {
      const Point p = trace.at(u, t);
      const std::int32_t b = topology.nearest_bs(p);
      true_bs[u] = b;
      cap[u] = ue_bs_capacity_bps(distance(p, topology.bs_position(b)), config.radio);
    }
    std::fill(group_count.begin(), group_count.end(), 0);
    for (std::size_t u = 0; u < n_users; ++u) {
      ++group_count[static_cast<std::size_t>(true_bs[u])];
    }
    group_offset[0] = 0;
    for (std::size_t b = 0; b < n_bs; ++b) {
      group_offset[b + 1] = group_offset[b] + group_count[b];
      group_cursor[b] = group_offset[b];
    }
    for (std::size_t u = 0; u < n_users; ++u) {
      group_users[static_cast<std::size_t>(
          group_cursor[static_cast<std::size_t>(true_bs[u])]++)] = u;
    }
    for (std::size_t b = 0; b < n_bs; ++b) {
      if (group_count[b] == 0) continue;
      pf.allocate(group_users, static_cast<std::size_t>(group_offset[b]),
                  static_cast<std::size_t>(group_count[b]), demand, cap,
                  topology.base_stations()[b].capacity_bps, alloc0);
    }

    for (std::size_t l = 0; l < n_levels; ++l) {
      OutcomeSink& sink = *sinks[l];
      const LocationObfuscator& mech = mechanisms[l];
      const std::uint64_t eps_bits = std::bit_cast<std::uint64_t>(epsilons[l]);
      RunCounters* rc = counters ? &(*counters)[l] : nullptr;
      for (std::size_t m = 0; m < n_mh; ++m) {
        residual[m] = topology.mec_hosts()[m].capacity_bps;
      }

      for (std::size_t u = 0; u < n_users; ++u) {
        std::int32_t pb;
        if (mech.is_identity()) {
          // Reported position equals the true one bit for bit, so the
          // nearest-BS query resolves identically; skip the redundant draw.
          pb = true_bs[u];
        } else {
          rng::CounterRng r(seed, rng::Stream::kObfuscation, eps_bits,
                            static_cast<std::uint64_t>(u),
                            static_cast<std::uint64_t>(t));
          const Point reported = mech.obfuscate_clipped(
              trace.at(u, t), config.area, r, rc ? &rc->clipped_reports : nullptr);
          pb = topology.nearest_bs(reported);
        }
        presumed[u] = pb;
        const std::int32_t sm = bs_ideal[static_cast<std::size_t>(pb)];
        selected[u] = sm;
        achieved[u] =
            bs_mh_latency_ms(topology.bs_mh_distance(true_bs[u], sm), config.latency);
      }

      const double* alloc = alloc0.data();
      if (config.pf_iterate_after_denial) {
        // Users that already fail their latency bound leave the contention
        // pool; the remaining demands are re-allocated. Denied users keep
        // the full-pool allocation for the record.
        alloc_used = alloc0;
        for (std::size_t b = 0; b < n_bs; ++b) {
          if (group_count[b] == 0) continue;
          pool.clear();
          bool removed_any = false;
          for (std::int32_t k = group_offset[b]; k < group_offset[b + 1]; ++k) {
            const std::size_t u = group_users[static_cast<std::size_t>(k)];
            if (achieved[u] <= bound_ms[u]) {
              pool.push_back(u);
            } else {
              removed_any = true;
            }
          }
          if (removed_any && !pool.empty()) {
            pf.allocate(pool, 0, pool.size(), demand, cap,
                        topology.base_stations()[b].capacity_bps, alloc_used);
          }
        }
        alloc = alloc_used.data();
      }

      for (std::size_t u = 0; u < n_users; ++u) {
        RequestOutcome o;
        o.user_id = users[u].id;
        o.timestep = static_cast<std::int64_t>(t);
        o.true_bs = true_bs[u];
        o.presumed_bs = presumed[u];
        o.selected_mh = selected[u];
        o.ideal_mh = bs_ideal[static_cast<std::size_t>(true_bs[u])];
        o.achieved_latency_ms = achieved[u];
        o.ideal_latency_ms = bs_ideal_lat[static_cast<std::size_t>(true_bs[u])];
        const AppParams app{demand[u], bound_ms[u]};
        evaluate_admission(o, app, alloc[u],
                           residual[static_cast<std::size_t>(selected[u])]);
        if (rc) {
          ++rc->outcomes;
          if (o.accepted()) ++rc->accepted;
          if (o.reasons & kReasonCapacity) ++rc->capacity_denials;
        }
        sink.on_outcome(users[u], o);
      }
    }
  }
  for (OutcomeSink* sink : sinks) sink->finish();
}

}  // namespace edgesim
