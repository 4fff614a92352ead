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

#include "edgesim/link_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "edgesim/errors.hpp"

namespace edgesim {

void RadioParams::validate() const {
  if (!(bandwidth_per_ue_hz > 0.0)) throw ConfigError("radio.bandwidth_per_ue_hz must be > 0");
  if (!(pathloss_exponent >= 2.0)) throw ConfigError("radio.pathloss_exponent must be >= 2");
  if (!(ref_distance_m > 0.0)) throw ConfigError("radio.ref_distance_m must be > 0");
  if (!(min_distance_m > 0.0)) throw ConfigError("radio.min_distance_m must be > 0");
}

void LatencyParams::validate() const {
  if (!(base_ms >= 0.0)) throw ConfigError("latency.base_ms must be >= 0");
  if (!(ms_per_km >= 0.0)) throw ConfigError("latency.ms_per_km must be >= 0");
}

double path_loss_db(double distance_m, const RadioParams& params) {
  const double d = std::max(distance_m, params.min_distance_m);
  return params.pathloss_ref_db +
         10.0 * params.pathloss_exponent * std::log10(d / params.ref_distance_m);
}

double snr_db(double distance_m, const RadioParams& params) {
  return params.tx_power_dbm - path_loss_db(distance_m, params) - params.noise_power_dbm;
}

double snr_linear(double distance_m, const RadioParams& params) {
  return std::pow(10.0, snr_db(distance_m, params) / 10.0);
}

double shannon_capacity_bps(double bandwidth_hz, double snr) {
  if (snr <= 0.0) return 0.0;
  return bandwidth_hz * std::log2(1.0 + snr);
}

double ue_bs_capacity_bps(double distance_m, const RadioParams& params) {
  return shannon_capacity_bps(params.bandwidth_per_ue_hz, snr_linear(distance_m, params));
}

double bs_mh_latency_ms(double distance_m, const LatencyParams& params) {
  return params.base_ms + params.ms_per_km * (distance_m / 1000.0);
}

void PfScratch::allocate(const std::vector<std::size_t>& users, std::size_t begin,
                         std::size_t count, const std::vector<double>& demands_bps,
                         const std::vector<double>& caps_bps, double capacity_bps,
                         std::vector<double>& alloc_bps) {
  if (std::isnan(capacity_bps) || capacity_bps < 0.0) {
    throw ConfigError("capacity must be >= 0");
  }
  const auto effective = [&](std::size_t u) {
    return std::min(demands_bps[u], caps_bps[u]);
  };

  order_.clear();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t u = users[begin + i];
    const double d = demands_bps[u];
    const double c = caps_bps[u];
    if (std::isnan(d) || d < 0.0) throw ConfigError("demands must be finite and >= 0");
    if (std::isnan(c) || c < 0.0) throw ConfigError("caps must be >= 0");
    alloc_bps[u] = 0.0;
    if (effective(u) > 0.0) order_.push_back(u);
  }
  if (order_.empty()) return;

  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    const double ea = effective(a), eb = effective(b);
    return ea != eb ? ea < eb : a < b;
  });

  double total_effective = 0.0;
  for (const std::size_t u : order_) total_effective += effective(u);

  const bool contended = total_effective > capacity_bps;
  if (!contended) {
    for (const std::size_t u : order_) alloc_bps[u] = effective(u);
  } else {
    // Water-fill: grant small demands in full while the equal share covers
    // them; everyone past the break-point sits at the common level.
    double remaining = capacity_bps;
    const std::size_t n = order_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double share = remaining / static_cast<double>(n - i);
      const double e = effective(order_[i]);
      if (e <= share) {
        alloc_bps[order_[i]] = e;
        remaining -= e;
      } else {
        for (std::size_t j = i; j < n; ++j) alloc_bps[order_[j]] = share;
        break;
      }
    }
  }

  // In real arithmetic the waterfill conserves capacity exactly under
  // contention and never exceeds it otherwise; the caller-order sum can
  // still land a few ulps off either way. That sum is monotone in each
  // allocation, so a bracketed bisection over one user's double grid
  // reaches the target exactly whenever the grid attains it.
  const auto resum = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += alloc_bps[users[begin + i]];
    return s;
  };
  const auto to_bits = [](double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof b);
    return b;
  };
  const auto from_bits = [](std::uint64_t b) {
    double v;
    std::memcpy(&v, &b, sizeof b);
    return v;
  };

  double sum = resum();
  const auto balanced = [&] {
    return contended ? sum == capacity_bps : sum <= capacity_bps;
  };

  // Bisect user u's grid toward an exact landing. Leaves the allocation at
  // the best not-above state when the grid skips the capacity value.
  const auto try_land = [&](std::size_t u) {
    const double eff = effective(u);

    // Grow a probe away from the current value until the sums straddle the
    // capacity (the gap is a handful of ulps, so this converges
    // immediately) or the feasible range saturates.
    double low = alloc_bps[u];
    double high = low;
    bool bracketed = false;
    for (int guard = 0; guard < 64 && !bracketed; ++guard) {
      const double gap = capacity_bps - sum;
      double probe = alloc_bps[u] + gap;
      if (probe == alloc_bps[u]) {
        probe = std::nextafter(alloc_bps[u],
                               gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      }
      probe = std::clamp(probe, 0.0, eff);
      if (probe == alloc_bps[u]) break;
      const bool was_low = sum < capacity_bps;
      alloc_bps[u] = probe;
      sum = resum();
      if (balanced()) return true;
      if ((sum < capacity_bps) == was_low) {
        low = probe;  // same side; keep pushing from here
        if (probe == 0.0 || probe == eff) break;
      } else {
        high = probe;
        bracketed = true;
      }
    }
    if (!bracketed) return balanced();

    if (low > high) std::swap(low, high);
    std::uint64_t lo_b = to_bits(low);
    std::uint64_t hi_b = to_bits(high);
    while (hi_b - lo_b > 1) {
      alloc_bps[u] = from_bits(lo_b + (hi_b - lo_b) / 2);
      sum = resum();
      if (balanced()) return true;
      (sum < capacity_bps ? lo_b : hi_b) = to_bits(alloc_bps[u]);
    }
    // Adjacent grid points without equality; keep the side not above.
    alloc_bps[u] = from_bits(lo_b);
    sum = resum();
    return balanced();
  };

  // Common-level users first: correcting a fully granted one trades a ulp
  // of its demand satisfaction, so they are the fallback.
  for (const bool prefer_partial : {true, false}) {
    for (std::size_t i = count; i-- > 0;) {
      if (balanced()) return;
      const std::size_t u = users[begin + i];
      if (!(alloc_bps[u] > 0.0)) continue;
      if (prefer_partial != (alloc_bps[u] < effective(u))) continue;
      if (try_land(u)) return;
    }
  }
  if (balanced()) return;

  // A single user's grid can skip the capacity outright: with intermediate
  // rounding the sum moves up to two of its ulps per step of the term, and
  // round-to-even ties then push both neighbours away from the target. A
  // few-ulp shift of a second user changes the tie parity, after which the
  // bisection lands. Search such pairs; they are rare, so cost is no
  // concern here.
  for (std::size_t ai = 0; ai < count; ++ai) {
    const std::size_t a = users[begin + ai];
    const double eff_a = effective(a);
    const double saved_a = alloc_bps[a];
    if (!(saved_a > 0.0)) continue;
    for (const int steps : {1, -1, 2, -2, 3, -3}) {
      double v = saved_a;
      for (int k = 0; k < (steps > 0 ? steps : -steps); ++k) {
        v = std::nextafter(v, steps > 0 ? std::numeric_limits<double>::infinity() : 0.0);
      }
      if (!(v >= 0.0) || v > eff_a || v == saved_a) continue;
      alloc_bps[a] = v;
      sum = resum();
      if (balanced()) return;
      for (std::size_t bi = count; bi-- > 0;) {
        const std::size_t b = users[begin + bi];
        if (b == a || !(alloc_bps[b] > 0.0)) continue;
        const double saved_b = alloc_bps[b];
        if (try_land(b)) return;
        alloc_bps[b] = saved_b;
        sum = resum();
      }
      alloc_bps[a] = saved_a;
      sum = resum();
    }
  }

  // No exact landing exists in reach; never hand out more than the capacity.
  for (std::size_t i = count; i-- > 0 && sum > capacity_bps;) {
    const std::size_t u = users[begin + i];
    while (alloc_bps[u] > 0.0 && sum > capacity_bps) {
      const double cut = std::max(0.0, alloc_bps[u] - (sum - capacity_bps));
      alloc_bps[u] = cut < alloc_bps[u] ? cut : std::nextafter(alloc_bps[u], 0.0);
      sum = resum();
    }
  }
}

std::vector<double> proportional_fair_allocate(const std::vector<double>& demands_bps,
                                               const std::vector<double>& caps_bps,
                                               double capacity_bps) {
  if (demands_bps.size() != caps_bps.size()) {
    throw ConfigError("demands and caps must have equal length");
  }
  std::vector<std::size_t> ids(demands_bps.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::vector<double> alloc(demands_bps.size(), 0.0);
  PfScratch scratch;
  scratch.allocate(ids, 0, ids.size(), demands_bps, caps_bps, capacity_bps, alloc);
  return alloc;
}

std::vector<double> proportional_fair_allocate(const std::vector<double>& demands_bps,
                                               double capacity_bps) {
  const std::vector<double> caps(demands_bps.size(),
                                 std::numeric_limits<double>::infinity());
  return proportional_fair_allocate(demands_bps, caps, capacity_bps);
}

}  // namespace edgesim
