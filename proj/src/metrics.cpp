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

#include "edgesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "edgesim/errors.hpp"
#include "edgesim/offload.hpp"
#include "edgesim/privacy.hpp"

namespace edgesim {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

MobilityType mobility_from_field(std::string_view s, const std::string& path,
                                 std::size_t line) {
  if (s == "car") return MobilityType::kCarPassenger;
  if (s == "bus") return MobilityType::kBusPassenger;
  if (s == "pedestrian") return MobilityType::kPedestrian;
  throw IoError("'" + path + "' line " + std::to_string(line) +
                ": unknown mobility '" + std::string(s) + "'");
}

ApplicationType app_from_field(std::string_view s, const std::string& path,
                               std::size_t line) {
  if (s == "video") return ApplicationType::kVideo;
  if (s == "ar") return ApplicationType::kAr;
  if (s == "vr") return ApplicationType::kVr;
  throw IoError("'" + path + "' line " + std::to_string(line) +
                ": unknown application '" + std::string(s) + "'");
}

bool flag_from_field(std::string_view s, const std::string& path, std::size_t line) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw IoError("'" + path + "' line " + std::to_string(line) +
                ": flag fields must be 0 or 1, got '" + std::string(s) + "'");
}

std::string expected_header() {
  std::string h = CsvOutcomeSink::header();
  if (!h.empty() && h.back() == '\n') h.pop_back();
  return h;
}

}  // namespace

OutcomeReader::OutcomeReader(const std::string& path)
    : path_(path), reader_(path) {
  std::string_view line;
  if (!reader_.next_line(line) || line != expected_header()) {
    throw IoError("'" + path + "': missing or unexpected outcome CSV header");
  }
}

bool OutcomeReader::next(OutcomeRow& row) {
  std::string_view line;
  while (reader_.next_line(line)) {
    if (line.empty()) continue;
    split_fields(line, fields_);
    if (fields_.size() != 17) {
      throw IoError("'" + path_ + "' line " + std::to_string(reader_.line_number()) +
                    ": expected 17 fields, got " + std::to_string(fields_.size()));
    }
    const std::size_t ln = reader_.line_number();
    row.seed = parse_int(fields_[0], "seed");
    row.epsilon = parse_epsilon(std::string(fields_[1]));
    row.t = parse_int(fields_[2], "t");
    row.user_id = static_cast<std::int32_t>(parse_int(fields_[3], "user_id"));
    row.mobility = mobility_from_field(fields_[4], path_, ln);
    row.app = app_from_field(fields_[5], path_, ln);
    row.true_bs = static_cast<std::int32_t>(parse_int(fields_[6], "true_bs"));
    row.presumed_bs = static_cast<std::int32_t>(parse_int(fields_[7], "presumed_bs"));
    row.selected_mh = static_cast<std::int32_t>(parse_int(fields_[8], "selected_mh"));
    row.ideal_mh = static_cast<std::int32_t>(parse_int(fields_[9], "ideal_mh"));
    row.accepted = flag_from_field(fields_[10], path_, ln);
    row.reason_latency = flag_from_field(fields_[11], path_, ln);
    row.reason_throughput = flag_from_field(fields_[12], path_, ln);
    row.reason_capacity = flag_from_field(fields_[13], path_, ln);
    row.achieved_latency_ms = parse_double(fields_[14], "achieved_latency_ms");
    row.ideal_latency_ms = parse_double(fields_[15], "ideal_latency_ms");
    row.allocated_mbps = parse_double(fields_[16], "allocated_mbps");
    return true;
  }
  return false;
}

CiValue t_confidence_interval(const std::vector<double>& values) {
  CiValue out;
  out.n = values.size();
  if (out.n == 0) {
    out.mean = kNan;
    return out;
  }
  double sum = 0.0;
  for (const double v : values) sum += v;
  out.mean = sum / static_cast<double>(out.n);
  if (out.n < 2) return out;
  double ss = 0.0;
  for (const double v : values) {
    const double d = v - out.mean;
    ss += d * d;
  }
  const double stddev = std::sqrt(ss / static_cast<double>(out.n - 1));
  const boost::math::students_t dist(static_cast<double>(out.n - 1));
  const double tq = boost::math::quantile(dist, 0.975);
  out.half_width = tq * stddev / std::sqrt(static_cast<double>(out.n));
  out.has_ci = true;
  return out;
}

MetricsAccumulator::MetricsAccumulator(std::vector<double> epsilons)
    : epsilons_(std::move(epsilons)) {
  if (epsilons_.empty()) throw ConfigError("metrics need at least one privacy level");
  for (const double e : epsilons_) {
    if (std::isnan(e) || e <= 0.0) {
      throw ConfigError("privacy levels must be positive or infinite");
    }
  }
}

std::optional<std::size_t> MetricsAccumulator::inf_level() const {
  for (std::size_t l = 0; l < epsilons_.size(); ++l) {
    if (std::isinf(epsilons_[l])) return l;
  }
  return std::nullopt;
}

void MetricsAccumulator::consume_seed(std::uint64_t expected_seed,
                                      const std::vector<std::string>& outcome_paths) {
  const std::size_t n_levels = epsilons_.size();
  if (outcome_paths.size() != n_levels) {
    throw PairingError("seed " + std::to_string(expected_seed) + " supplies " +
                       std::to_string(outcome_paths.size()) + " outcome files for " +
                       std::to_string(n_levels) + " privacy levels");
  }
  std::vector<OutcomeReader> readers;
  readers.reserve(n_levels);
  for (const std::string& p : outcome_paths) readers.emplace_back(p);

  SeedTally tally;
  tally.seed = expected_seed;
  tally.levels.resize(n_levels);
  const std::optional<std::size_t> inf_idx = inf_level();
  const bool impact_defined = inf_idx.has_value() && n_levels >= 2;

  std::vector<OutcomeRow> rows(n_levels);
  while (true) {
    const bool more = readers[0].next(rows[0]);
    for (std::size_t l = 1; l < n_levels; ++l) {
      if (readers[l].next(rows[l]) != more) {
        throw PairingError("'" + readers[l].path() + "' and '" + readers[0].path() +
                           "' have different row counts for seed " +
                           std::to_string(expected_seed));
      }
    }
    if (!more) break;

    for (std::size_t l = 0; l < n_levels; ++l) {
      const OutcomeRow& r = rows[l];
      if (r.seed != static_cast<std::int64_t>(expected_seed)) {
        throw PairingError("'" + readers[l].path() + "': row carries seed " +
                           std::to_string(r.seed) + ", expected " +
                           std::to_string(expected_seed));
      }
      if (!(r.epsilon == epsilons_[l] ||
            (std::isinf(r.epsilon) && std::isinf(epsilons_[l])))) {
        throw PairingError("'" + readers[l].path() + "': row carries epsilon " +
                           epsilon_label(r.epsilon) + ", expected " +
                           epsilon_label(epsilons_[l]));
      }
      if (l > 0) {
        const OutcomeRow& a = rows[0];
        if (r.t != a.t || r.user_id != a.user_id) {
          throw PairingError("pairing gap for seed " + std::to_string(expected_seed) +
                             ": '" + readers[l].path() + "' is at (t=" +
                             std::to_string(r.t) + ", user=" + std::to_string(r.user_id) +
                             ") while '" + readers[0].path() + "' is at (t=" +
                             std::to_string(a.t) + ", user=" + std::to_string(a.user_id) + ")");
        }
        if (r.true_bs != a.true_bs || r.mobility != a.mobility || r.app != a.app ||
            r.ideal_mh != a.ideal_mh) {
          throw PairingError("paired fields diverge at (t=" + std::to_string(r.t) +
                             ", user=" + std::to_string(r.user_id) + ") between '" +
                             readers[0].path() + "' and '" + readers[l].path() + "'");
        }
      }
    }

    ++tally.requests_per_level;
    const std::size_t mob = static_cast<std::size_t>(rows[0].mobility);
    const std::size_t app = static_cast<std::size_t>(rows[0].app);

    bool all_accepted = true;
    bool none_accepted = true;
    for (std::size_t l = 0; l < n_levels; ++l) {
      const OutcomeRow& r = rows[l];
      LevelTally& lt = tally.levels[l];
      ++lt.requests;
      ++lt.total_by_mob[mob];
      ++lt.total_by_mob[3];
      ++lt.total_by_app[app];
      if (r.accepted) {
        ++lt.accepted;
        ++lt.accepted_by_app[app];
        all_accepted = all_accepted && true;
        none_accepted = false;
      } else {
        all_accepted = false;
        if (r.reason_latency && r.reason_throughput) {
          ++lt.both_lat_thr;
        } else if (r.reason_latency) {
          ++lt.latency_only;
        } else if (r.reason_throughput) {
          ++lt.throughput_only;
        } else {
          ++lt.capacity_only;
        }
      }
      const bool non_ideal = r.selected_mh != r.ideal_mh;
      if (non_ideal) {
        ++lt.non_ideal_by_mob[mob];
        ++lt.non_ideal_by_mob[3];
      }
      if (r.ideal_latency_ms > 0.0) {
        ++lt.latency_valid_all_by_mob[mob];
        ++lt.latency_valid_all_by_mob[3];
        if (non_ideal) {
          const double pct = 100.0 *
              (r.achieved_latency_ms - r.ideal_latency_ms) / r.ideal_latency_ms;
          lt.latency_pct_sum_by_mob[mob] += pct;
          lt.latency_pct_sum_by_mob[3] += pct;
          ++lt.latency_nonideal_valid_by_mob[mob];
          ++lt.latency_nonideal_valid_by_mob[3];
        }
      } else if (non_ideal) {
        ++lt.zero_ideal_excluded_by_mob[mob];
        ++lt.zero_ideal_excluded_by_mob[3];
      }
    }

    if (all_accepted) {
      ++tally.always_offloaded;
    } else if (none_accepted) {
      ++tally.never_offloaded;
    } else {
      ++tally.privacy_dependent;
    }

    ++tally.impact_totals[mob][app];
    if (impact_defined) {
      bool hit = rows[*inf_idx].accepted;
      for (std::size_t l = 0; l < n_levels && hit; ++l) {
        if (l == *inf_idx) continue;
        if (rows[l].accepted) hit = false;
      }
      if (hit) ++tally.impact_hits[mob][app];
    }
  }

  tallies_.push_back(std::move(tally));
}

namespace {

// Collects one per-seed value per tally when the denominator is positive.
std::vector<double> per_seed(const std::vector<SeedTally>& tallies,
                             const std::function<bool(const SeedTally&, double&)>& get) {
  std::vector<double> values;
  values.reserve(tallies.size());
  for (const SeedTally& t : tallies) {
    double v = 0.0;
    if (get(t, v)) values.push_back(v);
  }
  return values;
}

double pct(std::uint64_t num, std::uint64_t den) {
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json ci_json(const CiValue& ci) {
  nlohmann::json j;
  j["mean"] = ci.n == 0 ? nlohmann::json() : nlohmann::json(ci.mean);
  j["ci95"] = ci.has_ci ? nlohmann::json(ci.half_width) : nlohmann::json();
  j["n_seeds"] = ci.n;
  return j;
}

void append_ci_fields(std::string& line, const CiValue& ci) {
  append_number(line, ci.n == 0 ? kNan : ci.mean);
  line.push_back(',');
  append_number(line, ci.has_ci ? ci.half_width : kNan);
  line.push_back(',');
  append_number(line, static_cast<std::int64_t>(ci.n));
}

constexpr std::string_view kMobLabels[4] = {"car", "bus", "pedestrian", "all"};
constexpr std::string_view kAppLabels[3] = {"video", "ar", "vr"};

}  // namespace

nlohmann::json MetricsAccumulator::report_json() const {
  nlohmann::json j;
  const std::size_t n_levels = epsilons_.size();

  nlohmann::json eps = nlohmann::json::array();
  for (const double e : epsilons_) eps.push_back(epsilon_label(e));
  j["epsilons"] = eps;
  j["n_seeds"] = tallies_.size();
  nlohmann::json seeds = nlohmann::json::array();
  nlohmann::json reqs = nlohmann::json::array();
  for (const SeedTally& t : tallies_) {
    seeds.push_back(t.seed);
    reqs.push_back(t.requests_per_level);
  }
  j["seeds"] = seeds;
  j["requests_per_level_by_seed"] = reqs;

  // Classification (Always / PrivacyDependent / Never), percent of requests.
  {
    nlohmann::json c;
    const auto frac = [&](std::uint64_t SeedTally::*member) {
      return per_seed(tallies_, [member](const SeedTally& t, double& v) {
        if (t.requests_per_level == 0) return false;
        v = pct(t.*member, t.requests_per_level);
        return true;
      });
    };
    c["always_offloaded"] = ci_json(t_confidence_interval(frac(&SeedTally::always_offloaded)));
    c["privacy_dependent"] = ci_json(t_confidence_interval(frac(&SeedTally::privacy_dependent)));
    c["never_offloaded"] = ci_json(t_confidence_interval(frac(&SeedTally::never_offloaded)));
    j["classification"] = c;
  }

  // Denial reason breakdown per level.
  {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t l = 0; l < n_levels; ++l) {
      nlohmann::json d;
      d["epsilon"] = epsilon_label(epsilons_[l]);
      const auto main_frac = [&](std::uint64_t LevelTally::*member) {
        return per_seed(tallies_, [member, l](const SeedTally& t, double& v) {
          const LevelTally& lt = t.levels[l];
          const std::uint64_t denom = lt.latency_only + lt.throughput_only + lt.both_lat_thr;
          if (denom == 0) return false;
          v = pct(lt.*member, denom);
          return true;
        });
      };
      d["latency_only"] = ci_json(t_confidence_interval(main_frac(&LevelTally::latency_only)));
      d["throughput_only"] = ci_json(t_confidence_interval(main_frac(&LevelTally::throughput_only)));
      d["both"] = ci_json(t_confidence_interval(main_frac(&LevelTally::both_lat_thr)));
      d["capacity_only"] = ci_json(t_confidence_interval(
          per_seed(tallies_, [l](const SeedTally& t, double& v) {
            const LevelTally& lt = t.levels[l];
            const std::uint64_t denied = lt.requests - lt.accepted;
            if (denied == 0) return false;
            v = pct(lt.capacity_only, denied);
            return true;
          })));
      d["denied_pct_of_requests"] = ci_json(t_confidence_interval(
          per_seed(tallies_, [l](const SeedTally& t, double& v) {
            const LevelTally& lt = t.levels[l];
            if (lt.requests == 0) return false;
            v = pct(lt.requests - lt.accepted, lt.requests);
            return true;
          })));
      arr.push_back(d);
    }
    j["denials"] = arr;
  }

  // Non-ideal MH selection per (level, mobility).
  {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t l = 0; l < n_levels; ++l) {
      for (std::size_t m = 0; m < 4; ++m) {
        nlohmann::json d;
        d["epsilon"] = epsilon_label(epsilons_[l]);
        d["mobility"] = kMobLabels[m];
        d["pct"] = ci_json(t_confidence_interval(
            per_seed(tallies_, [l, m](const SeedTally& t, double& v) {
              const LevelTally& lt = t.levels[l];
              if (lt.total_by_mob[m] == 0) return false;
              v = pct(lt.non_ideal_by_mob[m], lt.total_by_mob[m]);
              return true;
            })));
        arr.push_back(d);
      }
    }
    j["non_ideal_selection"] = arr;
  }

  // Latency increase per (level, mobility), both denominators.
  {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t l = 0; l < n_levels; ++l) {
      for (std::size_t m = 0; m < 4; ++m) {
        nlohmann::json d;
        d["epsilon"] = epsilon_label(epsilons_[l]);
        d["mobility"] = kMobLabels[m];
        d["pct_over_non_ideal"] = ci_json(t_confidence_interval(
            per_seed(tallies_, [l, m](const SeedTally& t, double& v) {
              const LevelTally& lt = t.levels[l];
              if (lt.latency_nonideal_valid_by_mob[m] == 0) return false;
              v = lt.latency_pct_sum_by_mob[m] /
                  static_cast<double>(lt.latency_nonideal_valid_by_mob[m]);
              return true;
            })));
        d["pct_over_all"] = ci_json(t_confidence_interval(
            per_seed(tallies_, [l, m](const SeedTally& t, double& v) {
              const LevelTally& lt = t.levels[l];
              if (lt.latency_valid_all_by_mob[m] == 0) return false;
              v = lt.latency_pct_sum_by_mob[m] /
                  static_cast<double>(lt.latency_valid_all_by_mob[m]);
              return true;
            })));
        std::uint64_t excluded = 0;
        for (const SeedTally& t : tallies_) {
          excluded += t.levels[l].zero_ideal_excluded_by_mob[m];
        }
        d["excluded_zero_ideal"] = excluded;
        arr.push_back(d);
      }
    }
    j["latency_increase"] = arr;
  }

  // Privacy impact per (mobility, app): accepted at inf, denied elsewhere.
  {
    if (inf_level().has_value() && n_levels >= 2) {
      nlohmann::json arr = nlohmann::json::array();
      for (std::size_t m = 0; m < 3; ++m) {
        for (std::size_t a = 0; a < 3; ++a) {
          nlohmann::json d;
          d["mobility"] = kMobLabels[m];
          d["app"] = kAppLabels[a];
          d["pct"] = ci_json(t_confidence_interval(
              per_seed(tallies_, [m, a](const SeedTally& t, double& v) {
                if (t.impact_totals[m][a] == 0) return false;
                v = pct(t.impact_hits[m][a], t.impact_totals[m][a]);
                return true;
              })));
          arr.push_back(d);
        }
      }
      j["privacy_impact"] = arr;
    } else {
      j["privacy_impact"] = nullptr;
    }
  }

  // Acceptance rates, overall and per application.
  {
    nlohmann::json overall = nlohmann::json::array();
    nlohmann::json by_app = nlohmann::json::array();
    for (std::size_t l = 0; l < n_levels; ++l) {
      nlohmann::json d;
      d["epsilon"] = epsilon_label(epsilons_[l]);
      d["pct"] = ci_json(t_confidence_interval(
          per_seed(tallies_, [l](const SeedTally& t, double& v) {
            const LevelTally& lt = t.levels[l];
            if (lt.requests == 0) return false;
            v = pct(lt.accepted, lt.requests);
            return true;
          })));
      overall.push_back(d);
      for (std::size_t a = 0; a < 3; ++a) {
        nlohmann::json e;
        e["epsilon"] = epsilon_label(epsilons_[l]);
        e["app"] = kAppLabels[a];
        e["pct"] = ci_json(t_confidence_interval(
            per_seed(tallies_, [l, a](const SeedTally& t, double& v) {
              const LevelTally& lt = t.levels[l];
              if (lt.total_by_app[a] == 0) return false;
              v = pct(lt.accepted_by_app[a], lt.total_by_app[a]);
              return true;
            })));
        by_app.push_back(e);
      }
    }
    nlohmann::json acc;
    acc["overall"] = overall;
    acc["by_app"] = by_app;
    j["acceptance"] = acc;
  }

  return j;
}

void MetricsAccumulator::write_outputs(const std::string& out_dir) const {
  const nlohmann::json j = report_json();
  const auto ci_from_json = [](const nlohmann::json& c) {
    CiValue ci;
    ci.n = c.at("n_seeds").get<std::size_t>();
    ci.mean = c.at("mean").is_null() ? kNan : c.at("mean").get<double>();
    ci.has_ci = !c.at("ci95").is_null();
    ci.half_width = ci.has_ci ? c.at("ci95").get<double>() : kNan;
    return ci;
  };

  {
    CsvWriter w(out_dir + "/" + kTable3Csv);
    w.write_raw("class,mean_pct,ci95_pct,n_seeds\n");
    for (const char* cls : {"always_offloaded", "privacy_dependent", "never_offloaded"}) {
      std::string& line = w.line();
      line += cls;
      line.push_back(',');
      append_ci_fields(line, ci_from_json(j.at("classification").at(cls)));
      w.end_line();
    }
    w.close();
  }

  {
    CsvWriter w(out_dir + "/" + kFig5Csv);
    w.write_raw("epsilon,category,mean_pct,ci95_pct,n_seeds\n");
    for (const auto& d : j.at("denials")) {
      for (const char* cat : {"latency_only", "throughput_only", "both", "capacity_only"}) {
        std::string& line = w.line();
        line += d.at("epsilon").get<std::string>();
        line.push_back(',');
        line += cat;
        line.push_back(',');
        append_ci_fields(line, ci_from_json(d.at(cat)));
        w.end_line();
      }
    }
    w.close();
  }

  {
    CsvWriter w(out_dir + "/" + kFig6Csv);
    w.write_raw("epsilon,mobility,mean_pct,ci95_pct,n_seeds\n");
    for (const auto& d : j.at("non_ideal_selection")) {
      std::string& line = w.line();
      line += d.at("epsilon").get<std::string>();
      line.push_back(',');
      line += d.at("mobility").get<std::string>();
      line.push_back(',');
      append_ci_fields(line, ci_from_json(d.at("pct")));
      w.end_line();
    }
    w.close();
  }

  {
    CsvWriter w(out_dir + "/" + kFig7Csv);
    w.write_raw(
        "epsilon,mobility,mean_pct_nonideal,ci95_nonideal,n_seeds_nonideal,"
        "mean_pct_all,ci95_all,n_seeds_all,excluded_zero_ideal\n");
    for (const auto& d : j.at("latency_increase")) {
      std::string& line = w.line();
      line += d.at("epsilon").get<std::string>();
      line.push_back(',');
      line += d.at("mobility").get<std::string>();
      line.push_back(',');
      append_ci_fields(line, ci_from_json(d.at("pct_over_non_ideal")));
      line.push_back(',');
      append_ci_fields(line, ci_from_json(d.at("pct_over_all")));
      line.push_back(',');
      append_number(line, static_cast<std::int64_t>(d.at("excluded_zero_ideal").get<std::uint64_t>()));
      w.end_line();
    }
    w.close();
  }

  {
    CsvWriter w(out_dir + "/" + kFig8Csv);
    w.write_raw("mobility,app,mean_pct,ci95_pct,n_seeds\n");
    if (!j.at("privacy_impact").is_null()) {
      for (const auto& d : j.at("privacy_impact")) {
        std::string& line = w.line();
        line += d.at("mobility").get<std::string>();
        line.push_back(',');
        line += d.at("app").get<std::string>();
        line.push_back(',');
        append_ci_fields(line, ci_from_json(d.at("pct")));
        w.end_line();
      }
    }
    w.close();
  }

  {
    CsvWriter w(out_dir + "/" + kReportJson);
    w.write_raw(j.dump(2));
    w.write_raw("\n");
    w.close();
  }
}

}  // namespace edgesim
