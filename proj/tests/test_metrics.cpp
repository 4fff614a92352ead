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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "edgesim/errors.hpp"
#include "edgesim/metrics.hpp"
#include "edgesim/offload.hpp"
#include "edgesim/privacy.hpp"

using namespace edgesim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string outcome_csv(const std::vector<std::string>& rows) {
  std::string text = CsvOutcomeSink::header();
  for (const std::string& r : rows) {
    text += r;
    text += '\n';
  }
  return text;
}

// Four requests observed at two privacy levels. user 0 is accepted at both
// levels, user 1 only without privacy, users 2 and 3 at neither. user 1 is
// the only non-ideal selection and carries a 25% latency increase.
std::vector<std::string> fixture_rows_inf(const std::string& seed) {
  return {
      seed + ",inf,0,0,car,video,0,0,5,5,1,0,0,0,2.5,2.5,70",
      seed + ",inf,0,1,bus,ar,1,1,1,1,1,0,0,0,2,2,100",
      seed + ",inf,0,2,pedestrian,video,2,2,2,2,0,1,0,0,12,12,70",
      seed + ",inf,0,3,car,vr,0,0,5,5,0,0,0,1,2.5,2.5,50",
  };
}

std::vector<std::string> fixture_rows_e01(const std::string& seed) {
  return {
      seed + ",0.1,0,0,car,video,0,0,5,5,1,0,0,0,2.5,2.5,70",
      seed + ",0.1,0,1,bus,ar,1,3,2,1,0,0,1,0,2.5,2,60",
      seed + ",0.1,0,2,pedestrian,video,2,2,2,2,0,1,1,0,12,12,30",
      seed + ",0.1,0,3,car,vr,0,0,5,5,0,0,0,1,2.5,2.5,50",
  };
}

// Writes the two per-level files for one seed and returns their paths.
std::vector<std::string> write_fixture_seed(const std::string& tag, const std::string& seed) {
  const std::string p_inf = temp_path("edgesim_metrics_" + tag + "_inf.csv");
  const std::string p_e01 = temp_path("edgesim_metrics_" + tag + "_e01.csv");
  write_file(p_inf, outcome_csv(fixture_rows_inf(seed)));
  write_file(p_e01, outcome_csv(fixture_rows_e01(seed)));
  return {p_inf, p_e01};
}

void check_ci(const nlohmann::json& c, double mean, std::size_t n) {
  REQUIRE(c.at("n_seeds").get<std::size_t>() == n);
  if (n == 0) {
    CHECK(c.at("mean").is_null());
  } else {
    CHECK(c.at("mean").get<double>() == doctest::Approx(mean).epsilon(1e-12));
  }
  if (n < 2) CHECK(c.at("ci95").is_null());
}

}  // namespace

TEST_CASE("t interval matches hand-computed Student-t values") {
  SUBCASE("three spread values") {
    const CiValue ci = t_confidence_interval({1.0, 2.0, 3.0});
    CHECK(ci.n == 3);
    CHECK(ci.has_ci);
    CHECK(ci.mean == doctest::Approx(2.0).epsilon(1e-15));
    // sample stddev 1; for df 2 the quantile has the closed form
    // 0.95 * sqrt(2 / (1 - 0.95^2)) = 4.30265272974946385...
    CHECK(ci.half_width == doctest::Approx(4.3026527297494639 / std::sqrt(3.0)).epsilon(1e-12));
  }
  SUBCASE("two values give s/sqrt(n) exactly 5") {
    const CiValue ci = t_confidence_interval({0.0, 10.0});
    CHECK(ci.mean == doctest::Approx(5.0));
    // t(0.975, df 1) = 12.706204736174698, times 5
    CHECK(ci.half_width == doctest::Approx(63.53102368087349).epsilon(1e-12));
  }
  SUBCASE("identical values collapse the interval") {
    const CiValue ci = t_confidence_interval({5.0, 5.0, 5.0});
    CHECK(ci.mean == 5.0);
    CHECK(ci.half_width == 0.0);
    CHECK(ci.has_ci);
  }
  SUBCASE("one value has no interval") {
    const CiValue ci = t_confidence_interval({7.25});
    CHECK(ci.n == 1);
    CHECK(ci.mean == 7.25);
    CHECK_FALSE(ci.has_ci);
  }
  SUBCASE("no values has no mean") {
    const CiValue ci = t_confidence_interval({});
    CHECK(ci.n == 0);
    CHECK(std::isnan(ci.mean));
    CHECK_FALSE(ci.has_ci);
  }
}

TEST_CASE("outcome reader round-trips rows written by the sink") {
  const std::string path = temp_path("edgesim_metrics_roundtrip.csv");
  {
    CsvOutcomeSink sink(path, 9, 0.1);
    UserAgent u{4, MobilityType::kBusPassenger, ApplicationType::kAr, 0.1, -1};
    RequestOutcome o;
    o.user_id = 4;
    o.timestep = 17;
    o.true_bs = 3;
    o.presumed_bs = 8;
    o.selected_mh = 2;
    o.ideal_mh = 1;
    o.reasons = kReasonLatency | kReasonCapacity;
    o.achieved_latency_ms = 10.125;
    o.ideal_latency_ms = 2.0625;
    o.allocated_bps = 12.5e6;
    sink.on_outcome(u, o);
    sink.finish();
  }
  OutcomeReader reader(path);
  OutcomeRow row;
  REQUIRE(reader.next(row));
  CHECK(row.seed == 9);
  CHECK(row.epsilon == 0.1);
  CHECK(row.t == 17);
  CHECK(row.user_id == 4);
  CHECK(row.mobility == MobilityType::kBusPassenger);
  CHECK(row.app == ApplicationType::kAr);
  CHECK(row.true_bs == 3);
  CHECK(row.presumed_bs == 8);
  CHECK(row.selected_mh == 2);
  CHECK(row.ideal_mh == 1);
  CHECK_FALSE(row.accepted);
  CHECK(row.reason_latency);
  CHECK_FALSE(row.reason_throughput);
  CHECK(row.reason_capacity);
  CHECK(row.achieved_latency_ms == 10.125);
  CHECK(row.ideal_latency_ms == 2.0625);
  CHECK(row.allocated_mbps == 12.5);
  CHECK_FALSE(reader.next(row));
  std::remove(path.c_str());
}

TEST_CASE("outcome reader rejects malformed files") {
  const std::string path = temp_path("edgesim_metrics_bad.csv");

  SUBCASE("wrong header") {
    write_file(path, "seed,epsilon\n1,inf\n");
    CHECK_THROWS_AS(OutcomeReader reader(path), IoError);
  }
  SUBCASE("wrong field count") {
    write_file(path, outcome_csv({"1,inf,0,0,car,video,0,0,5,5,1,0,0,0,2.5,2.5"}));
    OutcomeReader reader(path);
    OutcomeRow row;
    try {
      reader.next(row);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      const std::string what = e.what();
      CHECK(what.find("expected 17 fields, got 16") != std::string::npos);
    }
  }
  SUBCASE("unknown mobility label") {
    write_file(path, outcome_csv({"1,inf,0,0,boat,video,0,0,5,5,1,0,0,0,2.5,2.5,70"}));
    OutcomeReader reader(path);
    OutcomeRow row;
    try {
      reader.next(row);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      const std::string what = e.what();
      CHECK(what.find("unknown mobility 'boat'") != std::string::npos);
      CHECK(what.find("line 2") != std::string::npos);
    }
  }
  SUBCASE("flag field outside 0/1") {
    write_file(path, outcome_csv({"1,inf,0,0,car,video,0,0,5,5,2,0,0,0,2.5,2.5,70"}));
    OutcomeReader reader(path);
    OutcomeRow row;
    CHECK_THROWS_AS(reader.next(row), IoError);
  }
  std::remove(path.c_str());
}

TEST_CASE("accumulator rejects invalid privacy level sets") {
  CHECK_THROWS_AS(MetricsAccumulator(std::vector<double>{}), ConfigError);
  CHECK_THROWS_AS(MetricsAccumulator({kInf, 0.0}), ConfigError);
  CHECK_THROWS_AS(MetricsAccumulator({-0.1}), ConfigError);
  CHECK_THROWS_AS(MetricsAccumulator({std::numeric_limits<double>::quiet_NaN()}), ConfigError);
  const MetricsAccumulator acc({kInf, 0.1, 0.01});
  REQUIRE(acc.inf_level().has_value());
  CHECK(*acc.inf_level() == 0);
  CHECK_FALSE(MetricsAccumulator({0.1}).inf_level().has_value());
}

TEST_CASE("single-seed fixture produces the hand-computed report") {
  const std::vector<std::string> paths = write_fixture_seed("single", "1");
  MetricsAccumulator acc({kInf, 0.1});
  acc.consume_seed(1, paths);
  const nlohmann::json j = acc.report_json();

  CHECK(j.at("epsilons") == nlohmann::json::array({"inf", "0.1"}));
  CHECK(j.at("n_seeds").get<std::size_t>() == 1);
  CHECK(j.at("seeds") == nlohmann::json::array({1}));
  CHECK(j.at("requests_per_level_by_seed") == nlohmann::json::array({4}));

  // Classification partitions the four requests: 1 always, 1 dependent, 2 never.
  check_ci(j.at("classification").at("always_offloaded"), 25.0, 1);
  check_ci(j.at("classification").at("privacy_dependent"), 25.0, 1);
  check_ci(j.at("classification").at("never_offloaded"), 50.0, 1);

  // Without privacy: denials are 1 latency-only, 1 capacity-only.
  const nlohmann::json& d_inf = j.at("denials").at(0);
  REQUIRE(d_inf.at("epsilon") == "inf");
  check_ci(d_inf.at("latency_only"), 100.0, 1);
  check_ci(d_inf.at("throughput_only"), 0.0, 1);
  check_ci(d_inf.at("both"), 0.0, 1);
  check_ci(d_inf.at("capacity_only"), 50.0, 1);
  check_ci(d_inf.at("denied_pct_of_requests"), 50.0, 1);

  // At 0.1: throughput-only and both split the reasoned denials evenly.
  const nlohmann::json& d_01 = j.at("denials").at(1);
  REQUIRE(d_01.at("epsilon") == "0.1");
  check_ci(d_01.at("latency_only"), 0.0, 1);
  check_ci(d_01.at("throughput_only"), 50.0, 1);
  check_ci(d_01.at("both"), 50.0, 1);
  check_ci(d_01.at("capacity_only"), 100.0 / 3.0, 1);
  check_ci(d_01.at("denied_pct_of_requests"), 75.0, 1);

  // Non-ideal selection appears only at 0.1 and only for the bus user.
  const nlohmann::json& ni = j.at("non_ideal_selection");
  REQUIRE(ni.size() == 8);
  for (std::size_t m = 0; m < 4; ++m) check_ci(ni.at(m).at("pct"), 0.0, 1);
  CHECK(ni.at(5).at("mobility") == "bus");
  check_ci(ni.at(4).at("pct"), 0.0, 1);    // car
  check_ci(ni.at(5).at("pct"), 100.0, 1);  // bus
  check_ci(ni.at(6).at("pct"), 0.0, 1);    // pedestrian
  check_ci(ni.at(7).at("pct"), 25.0, 1);   // all

  // Latency increase: 25% for the one non-ideal row, diluted to 6.25% over all.
  const nlohmann::json& li = j.at("latency_increase");
  REQUIRE(li.size() == 8);
  check_ci(li.at(0).at("pct_over_non_ideal"), 0.0, 0);  // no non-ideal rows at inf
  check_ci(li.at(0).at("pct_over_all"), 0.0, 1);
  check_ci(li.at(5).at("pct_over_non_ideal"), 25.0, 1);
  check_ci(li.at(5).at("pct_over_all"), 25.0, 1);
  check_ci(li.at(7).at("pct_over_non_ideal"), 25.0, 1);
  check_ci(li.at(7).at("pct_over_all"), 6.25, 1);
  for (const auto& entry : li) CHECK(entry.at("excluded_zero_ideal").get<std::uint64_t>() == 0);

  // Impact: only the bus/ar request is accepted at inf yet denied at 0.1.
  const nlohmann::json& pi = j.at("privacy_impact");
  REQUIRE(pi.size() == 9);
  check_ci(pi.at(0).at("pct"), 0.0, 1);    // car/video
  check_ci(pi.at(1).at("pct"), 0.0, 0);    // car/ar unobserved
  check_ci(pi.at(2).at("pct"), 0.0, 1);    // car/vr
  check_ci(pi.at(4).at("pct"), 100.0, 1);  // bus/ar
  check_ci(pi.at(6).at("pct"), 0.0, 1);    // pedestrian/video

  const nlohmann::json& acc_overall = j.at("acceptance").at("overall");
  check_ci(acc_overall.at(0).at("pct"), 50.0, 1);
  check_ci(acc_overall.at(1).at("pct"), 25.0, 1);
  const nlohmann::json& by_app = j.at("acceptance").at("by_app");
  REQUIRE(by_app.size() == 6);
  check_ci(by_app.at(0).at("pct"), 50.0, 1);   // inf video
  check_ci(by_app.at(1).at("pct"), 100.0, 1);  // inf ar
  check_ci(by_app.at(2).at("pct"), 0.0, 1);    // inf vr
  check_ci(by_app.at(3).at("pct"), 50.0, 1);   // 0.1 video
  check_ci(by_app.at(4).at("pct"), 0.0, 1);    // 0.1 ar
  check_ci(by_app.at(5).at("pct"), 0.0, 1);    // 0.1 vr

  for (const std::string& p : paths) std::remove(p.c_str());
}

TEST_CASE("two identical seeds yield zero-width intervals") {
  const std::vector<std::string> p1 = write_fixture_seed("s1", "1");
  const std::vector<std::string> p2 = write_fixture_seed("s2", "2");
  MetricsAccumulator acc({kInf, 0.1});
  acc.consume_seed(1, p1);
  acc.consume_seed(2, p2);
  REQUIRE(acc.tallies().size() == 2);

  const nlohmann::json j = acc.report_json();
  CHECK(j.at("seeds") == nlohmann::json::array({1, 2}));
  const nlohmann::json& cls = j.at("classification").at("never_offloaded");
  CHECK(cls.at("n_seeds").get<std::size_t>() == 2);
  CHECK(cls.at("mean").get<double>() == doctest::Approx(50.0));
  CHECK(cls.at("ci95").get<double>() == 0.0);

  // Per-seed tallies carry raw counts, not percentages.
  const SeedTally& t = acc.tallies().at(0);
  CHECK(t.requests_per_level == 4);
  CHECK(t.always_offloaded == 1);
  CHECK(t.privacy_dependent == 1);
  CHECK(t.never_offloaded == 2);
  CHECK(t.always_offloaded + t.privacy_dependent + t.never_offloaded == t.requests_per_level);
  CHECK(t.levels.at(0).accepted == 2);
  CHECK(t.levels.at(1).accepted == 1);
  CHECK(t.levels.at(1).latency_only + t.levels.at(1).throughput_only +
            t.levels.at(1).both_lat_thr + t.levels.at(1).capacity_only ==
        t.levels.at(1).requests - t.levels.at(1).accepted);

  for (const std::string& p : p1) std::remove(p.c_str());
  for (const std::string& p : p2) std::remove(p.c_str());
}

TEST_CASE("impact table needs a no-privacy level plus at least one other") {
  SUBCASE("no infinite level") {
    const std::string path = temp_path("edgesim_metrics_noinf.csv");
    write_file(path, outcome_csv(fixture_rows_e01("1")));
    MetricsAccumulator acc({0.1});
    acc.consume_seed(1, {path});
    CHECK(acc.report_json().at("privacy_impact").is_null());
    std::remove(path.c_str());
  }
  SUBCASE("infinite level alone") {
    const std::string path = temp_path("edgesim_metrics_onlyinf.csv");
    write_file(path, outcome_csv(fixture_rows_inf("1")));
    MetricsAccumulator acc({kInf});
    acc.consume_seed(1, {path});
    CHECK(acc.report_json().at("privacy_impact").is_null());
    std::remove(path.c_str());
  }
}

TEST_CASE("lockstep consumption rejects mismatched inputs") {
  const std::vector<std::string> good = write_fixture_seed("err", "1");
  MetricsAccumulator acc({kInf, 0.1});

  SUBCASE("path count differs from level count") {
    try {
      acc.consume_seed(1, {good[0]});
      FAIL("expected PairingError");
    } catch (const PairingError& e) {
      const std::string what = e.what();
      CHECK(what.find("1 outcome files for 2 privacy levels") != std::string::npos);
    }
  }
  SUBCASE("row counts differ") {
    const std::string shorter = temp_path("edgesim_metrics_short.csv");
    std::vector<std::string> rows = fixture_rows_e01("1");
    rows.pop_back();
    write_file(shorter, outcome_csv(rows));
    try {
      acc.consume_seed(1, {good[0], shorter});
      FAIL("expected PairingError");
    } catch (const PairingError& e) {
      const std::string what = e.what();
      CHECK(what.find("different row counts") != std::string::npos);
      CHECK(what.find(shorter) != std::string::npos);
      CHECK(what.find(good[0]) != std::string::npos);
    }
    std::remove(shorter.c_str());
  }
  SUBCASE("row carries the wrong seed") {
    try {
      acc.consume_seed(2, good);
      FAIL("expected PairingError");
    } catch (const PairingError& e) {
      const std::string what = e.what();
      CHECK(what.find("row carries seed 1, expected 2") != std::string::npos);
    }
  }
  SUBCASE("row carries the wrong privacy level") {
    try {
      acc.consume_seed(1, {good[1], good[0]});  // files swapped
      FAIL("expected PairingError");
    } catch (const PairingError& e) {
      const std::string what = e.what();
      CHECK(what.find("row carries epsilon") != std::string::npos);
    }
  }
  SUBCASE("request sequences diverge") {
    const std::string reordered = temp_path("edgesim_metrics_reorder.csv");
    std::vector<std::string> rows = fixture_rows_e01("1");
    std::swap(rows[1], rows[2]);
    write_file(reordered, outcome_csv(rows));
    try {
      acc.consume_seed(1, {good[0], reordered});
      FAIL("expected PairingError");
    } catch (const PairingError& e) {
      const std::string what = e.what();
      CHECK(what.find("pairing gap for seed 1") != std::string::npos);
      CHECK(what.find("user=2") != std::string::npos);
      CHECK(what.find("user=1") != std::string::npos);
    }
    std::remove(reordered.c_str());
  }
  SUBCASE("paired fields diverge") {
    const std::string twisted = temp_path("edgesim_metrics_twisted.csv");
    std::vector<std::string> rows = fixture_rows_e01("1");
    rows[1] = "1,0.1,0,1,bus,ar,2,3,2,1,0,0,1,0,2.5,2,60";  // true_bs 1 -> 2
    write_file(twisted, outcome_csv(rows));
    try {
      acc.consume_seed(1, {good[0], twisted});
      FAIL("expected PairingError");
    } catch (const PairingError& e) {
      const std::string what = e.what();
      CHECK(what.find("paired fields diverge at (t=0, user=1)") != std::string::npos);
    }
    std::remove(twisted.c_str());
  }

  for (const std::string& p : good) std::remove(p.c_str());
}

TEST_CASE("output files carry the documented headers and exact values") {
  const std::vector<std::string> paths = write_fixture_seed("out", "1");
  MetricsAccumulator acc({kInf, 0.1});
  acc.consume_seed(1, paths);

  const std::string dir = temp_path("edgesim_metrics_outdir");
  std::filesystem::create_directories(dir);
  acc.write_outputs(dir);

  CHECK(slurp(dir + "/table3.csv") ==
        "class,mean_pct,ci95_pct,n_seeds\n"
        "always_offloaded,25,nan,1\n"
        "privacy_dependent,25,nan,1\n"
        "never_offloaded,50,nan,1\n");

  const std::string fig5 = slurp(dir + "/fig5.csv");
  CHECK(fig5.rfind("epsilon,category,mean_pct,ci95_pct,n_seeds\n", 0) == 0);
  CHECK(fig5.find("inf,latency_only,100,nan,1\n") != std::string::npos);
  CHECK(fig5.find("0.1,throughput_only,50,nan,1\n") != std::string::npos);
  CHECK(std::count(fig5.begin(), fig5.end(), '\n') == 9);  // header + 2 levels x 4

  const std::string fig6 = slurp(dir + "/fig6.csv");
  CHECK(fig6.rfind("epsilon,mobility,mean_pct,ci95_pct,n_seeds\n", 0) == 0);
  CHECK(fig6.find("0.1,bus,100,nan,1\n") != std::string::npos);
  CHECK(fig6.find("0.1,all,25,nan,1\n") != std::string::npos);
  CHECK(std::count(fig6.begin(), fig6.end(), '\n') == 9);

  const std::string fig7 = slurp(dir + "/fig7.csv");
  CHECK(fig7.rfind("epsilon,mobility,mean_pct_nonideal,ci95_nonideal,n_seeds_nonideal,"
                   "mean_pct_all,ci95_all,n_seeds_all,excluded_zero_ideal\n", 0) == 0);
  CHECK(fig7.find("inf,car,nan,nan,0,0,nan,1,0\n") != std::string::npos);
  CHECK(fig7.find("0.1,all,25,nan,1,6.25,nan,1,0\n") != std::string::npos);
  CHECK(std::count(fig7.begin(), fig7.end(), '\n') == 9);

  CHECK(slurp(dir + "/fig8.csv") ==
        "mobility,app,mean_pct,ci95_pct,n_seeds\n"
        "car,video,0,nan,1\n"
        "car,ar,nan,nan,0\n"
        "car,vr,0,nan,1\n"
        "bus,video,nan,nan,0\n"
        "bus,ar,100,nan,1\n"
        "bus,vr,nan,nan,0\n"
        "pedestrian,video,0,nan,1\n"
        "pedestrian,ar,nan,nan,0\n"
        "pedestrian,vr,nan,nan,0\n");

  const std::string report = slurp(dir + "/report.json");
  REQUIRE_FALSE(report.empty());
  CHECK(report.back() == '\n');
  const nlohmann::json parsed = nlohmann::json::parse(report);
  CHECK(parsed.at("n_seeds").get<std::size_t>() == 1);

  // A second pass over the same tallies writes byte-identical files.
  const std::string dir2 = temp_path("edgesim_metrics_outdir2");
  std::filesystem::create_directories(dir2);
  acc.write_outputs(dir2);
  for (const char* name : {"table3.csv", "fig5.csv", "fig6.csv", "fig7.csv",
                           "fig8.csv", "report.json"}) {
    CHECK(slurp(dir + "/" + std::string(name)) == slurp(dir2 + "/" + std::string(name)));
  }

  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
  for (const std::string& p : paths) std::remove(p.c_str());
}

TEST_CASE("impact table is header-only when undefined") {
  const std::string path = temp_path("edgesim_metrics_noimpact.csv");
  write_file(path, outcome_csv(fixture_rows_e01("1")));
  MetricsAccumulator acc({0.1});
  acc.consume_seed(1, {path});

  const std::string dir = temp_path("edgesim_metrics_noimpact_dir");
  std::filesystem::create_directories(dir);
  acc.write_outputs(dir);
  CHECK(slurp(dir + "/fig8.csv") == "mobility,app,mean_pct,ci95_pct,n_seeds\n");

  std::filesystem::remove_all(dir);
  std::remove(path.c_str());
}
