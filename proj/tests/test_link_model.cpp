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

#include <cmath>
#include <cstdint>
#include <vector>

#include "edgesim/errors.hpp"
#include "edgesim/link_model.hpp"
#include "edgesim/rng.hpp"

using namespace edgesim;
using rng::CounterRng;
using rng::Stream;

namespace {

// Independent reference for the water-filling optimum: bisect the common
// level L with x_i = min(effective_i, L) until the sum meets capacity.
std::vector<double> bisection_reference(const std::vector<double>& demands,
                                        const std::vector<double>& caps,
                                        double capacity) {
  const std::size_t n = demands.size();
  std::vector<double> eff(n);
  double total = 0.0;
  double max_eff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    eff[i] = std::min(demands[i], caps[i]);
    total += eff[i];
    max_eff = std::max(max_eff, eff[i]);
  }
  std::vector<double> x(n);
  if (total <= capacity) {
    for (std::size_t i = 0; i < n; ++i) x[i] = eff[i];
    return x;
  }
  double lo = 0.0, hi = max_eff;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::min(eff[i], mid);
    (s > capacity ? hi : lo) = mid;
  }
  const double level = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::min(eff[i], level);
  return x;
}

double log_objective(const std::vector<double>& x) {
  double obj = 0.0;
  for (const double v : x) {
    if (v > 0.0) obj += std::log(v);
  }
  return obj;
}

}  // namespace

TEST_CASE("snr at the calibration distance") {
  RadioParams params;
  // 30 - (38 + 35 log10(50)) + 96
  CHECK(snr_db(50.0, params) == doctest::Approx(28.536049848239346).epsilon(1e-12));
  CHECK(path_loss_db(50.0, params) ==
        doctest::Approx(38.0 + 35.0 * std::log10(50.0)).epsilon(1e-12));
  // below the clamp distance the loss freezes
  CHECK(snr_db(0.2, params) == snr_db(1.0, params));
  CHECK(snr_linear(50.0, params) ==
        doctest::Approx(std::pow(10.0, 28.536049848239346 / 10.0)).epsilon(1e-9));
}

TEST_CASE("shannon capacity in closed form") {
  CHECK(shannon_capacity_bps(20e6, 3.0) == doctest::Approx(40e6).epsilon(1e-12));
  CHECK(shannon_capacity_bps(20e6, 1023.0) == doctest::Approx(200e6).epsilon(1e-12));
  CHECK(shannon_capacity_bps(20e6, 0.0) == 0.0);
  CHECK(shannon_capacity_bps(20e6, -0.5) == 0.0);
}

TEST_CASE("ue-bs capacity falls with distance") {
  RadioParams params;
  double prev = 1e18;
  for (double d = 5.0; d < 1500.0; d *= 1.7) {
    const double c = ue_bs_capacity_bps(d, params);
    CHECK(c > 0.0);
    CHECK(c < prev);
    prev = c;
  }
}

TEST_CASE("latency model is affine in distance") {
  LatencyParams lat;
  lat.base_ms = 2.0;
  lat.ms_per_km = 8.0;
  CHECK(bs_mh_latency_ms(1000.0, lat) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(bs_mh_latency_ms(0.0, lat) == 2.0);
  LatencyParams defaults;
  CHECK(bs_mh_latency_ms(1000.0, defaults) ==
        doctest::Approx(defaults.base_ms + defaults.ms_per_km).epsilon(1e-12));
}

TEST_CASE("proportional fairness textbook instances") {
  SUBCASE("uncontended demands pass through untouched") {
    const auto x = proportional_fair_allocate({2.0, 3.0}, 10.0);
    CHECK(x == std::vector<double>{2.0, 3.0});
  }
  SUBCASE("symmetric contention splits evenly") {
    const auto x = proportional_fair_allocate({8.0, 8.0}, 10.0);
    CHECK(x[0] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(x[0] + x[1] == 10.0);
  }
  SUBCASE("small demand is served in full, the rest takes the remainder") {
    const auto x = proportional_fair_allocate({8.0, 4.0}, 10.0);
    CHECK(x[0] == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(x[1] == 4.0);
  }
  SUBCASE("link caps bind before demands") {
    const auto x = proportional_fair_allocate({10.0, 10.0}, {3.0, 100.0}, 12.0);
    CHECK(x[0] == 3.0);
    CHECK(x[1] == doctest::Approx(9.0).epsilon(1e-12));
  }
  SUBCASE("zero demand receives zero") {
    const auto x = proportional_fair_allocate({0.0, 8.0, 8.0}, 10.0);
    CHECK(x[0] == 0.0);
    CHECK(x[1] == doctest::Approx(5.0).epsilon(1e-12));
  }
  SUBCASE("empty instance") {
    CHECK(proportional_fair_allocate({}, 10.0).empty());
  }
}

TEST_CASE("contended allocations sum to capacity exactly") {
  CounterRng rng(41, Stream::kGeneric);
  for (int inst = 0; inst < 500; ++inst) {
    const std::size_t n = 2 + rng.uniform_int(15);
    std::vector<double> demands(n), caps(n);
    for (std::size_t i = 0; i < n; ++i) {
      demands[i] = rng.uniform(1.0, 100.0);
      caps[i] = rng.uniform(1.0, 120.0);
    }
    double total_eff = 0.0;
    for (std::size_t i = 0; i < n; ++i) total_eff += std::min(demands[i], caps[i]);
    const double capacity = rng.uniform(0.2, 0.9) * total_eff;  // always contended
    const auto x = proportional_fair_allocate(demands, caps, capacity);
    double sum = 0.0;
    for (const double v : x) sum += v;
    CHECK(sum == capacity);  // exact, not approximate
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(x[i] >= 0.0);
      CHECK(x[i] <= std::min(demands[i], caps[i]) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("never allocates above capacity even when uncontended") {
  CounterRng rng(43, Stream::kGeneric);
  for (int inst = 0; inst < 500; ++inst) {
    const std::size_t n = 1 + rng.uniform_int(20);
    std::vector<double> demands(n), caps(n);
    for (std::size_t i = 0; i < n; ++i) {
      demands[i] = rng.uniform(0.0, 50.0);
      caps[i] = rng.uniform(0.0, 60.0);
    }
    const double capacity = rng.uniform(0.0, 400.0);
    const auto x = proportional_fair_allocate(demands, caps, capacity);
    double sum = 0.0;
    for (const double v : x) sum += v;
    CHECK(sum <= capacity);
  }
}

TEST_CASE("1000 random instances match the bisection reference objective") {
  CounterRng rng(47, Stream::kGeneric);
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t n = 1 + rng.uniform_int(20);
    std::vector<double> demands(n), caps(n);
    for (std::size_t i = 0; i < n; ++i) {
      demands[i] = rng.uniform(0.5, 100.0);
      caps[i] = rng.uniform(0.5, 100.0);
    }
    const double capacity = rng.uniform(5.0, 300.0);
    const auto got = proportional_fair_allocate(demands, caps, capacity);
    const auto ref = bisection_reference(demands, caps, capacity);
    const double obj_got = log_objective(got);
    const double obj_ref = log_objective(ref);
    CHECK(std::abs(obj_got - obj_ref) <=
          1e-9 * std::max(1.0, std::abs(obj_ref)));
  }
}

TEST_CASE("scratch form matches the vector form over grouped users") {
  CounterRng rng(53, Stream::kGeneric);
  const std::size_t n_all = 30;
  std::vector<double> demands(n_all), caps(n_all), alloc(n_all, -1.0);
  for (std::size_t i = 0; i < n_all; ++i) {
    demands[i] = rng.uniform(1.0, 90.0);
    caps[i] = rng.uniform(1.0, 90.0);
  }
  // group = users 7..18 in a shared order buffer
  std::vector<std::size_t> order(n_all);
  for (std::size_t i = 0; i < n_all; ++i) order[i] = i;
  PfScratch scratch;
  const double capacity = 150.0;
  scratch.allocate(order, 7, 12, demands, caps, capacity, alloc);

  std::vector<double> sub_d(demands.begin() + 7, demands.begin() + 19);
  std::vector<double> sub_c(caps.begin() + 7, caps.begin() + 19);
  const auto expect = proportional_fair_allocate(sub_d, sub_c, capacity);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(alloc[7 + i] == expect[i]);
  }
  CHECK(alloc[0] == -1.0);  // untouched outside the group
  CHECK(alloc[19] == -1.0);
}

TEST_CASE("invalid link and latency parameters are rejected") {
  RadioParams bad;
  bad.bandwidth_per_ue_hz = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RadioParams{};
  bad.pathloss_exponent = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RadioParams{};
  bad.min_distance_m = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  LatencyParams lat;
  lat.base_ms = -1.0;
  CHECK_THROWS_AS(lat.validate(), ConfigError);
  lat = LatencyParams{};
  lat.ms_per_km = -0.5;
  CHECK_THROWS_AS(lat.validate(), ConfigError);
}

TEST_CASE("proportional fairness rejects malformed inputs") {
  CHECK_THROWS_AS(proportional_fair_allocate({1.0}, {1.0, 2.0}, 5.0), ConfigError);
  CHECK_THROWS_AS(proportional_fair_allocate({-1.0}, 5.0), ConfigError);
  CHECK_THROWS_AS(proportional_fair_allocate({1.0}, -5.0), ConfigError);
  CHECK_THROWS_AS(proportional_fair_allocate({std::nan("")}, 5.0), ConfigError);
}
