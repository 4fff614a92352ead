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

#ifndef EDGESIM_LINK_MODEL_HPP_
#define EDGESIM_LINK_MODEL_HPP_

#include <cstddef>
#include <vector>

namespace edgesim {

// Log-distance path loss; urban-microcell-style defaults, all configurable.
struct RadioParams {
  double bandwidth_per_ue_hz = 20e6;
  double tx_power_dbm = 30.0;
  double noise_power_dbm = -96.0;
  double pathloss_exponent = 3.5;
  double pathloss_ref_db = 38.0;
  double ref_distance_m = 1.0;
  double min_distance_m = 1.0;

  void validate() const;
};

// Affine distance-to-latency map for the BS<->MH backhaul.
struct LatencyParams {
  double base_ms = 2.0;
  double ms_per_km = 50.0;

  void validate() const;
};

double path_loss_db(double distance_m, const RadioParams& params);
double snr_db(double distance_m, const RadioParams& params);
double snr_linear(double distance_m, const RadioParams& params);

// C = bandwidth * log2(1 + snr).
double shannon_capacity_bps(double bandwidth_hz, double snr);

// Achievable UE<->BS rate at the given distance.
double ue_bs_capacity_bps(double distance_m, const RadioParams& params);

double bs_mh_latency_ms(double distance_m, const LatencyParams& params);

// Water-filling solution of max sum log(x_i) s.t. sum x_i <= capacity,
// 0 <= x_i <= min(demand_i, cap_i). Zero-demand users receive 0. The
// returned allocations never sum above capacity, including in floating
// point, and users whose effective demand fits are granted it exactly.
std::vector<double> proportional_fair_allocate(const std::vector<double>& demands_bps,
                                               const std::vector<double>& caps_bps,
                                               double capacity_bps);

// Uncapped variant: caps treated as unbounded.
std::vector<double> proportional_fair_allocate(const std::vector<double>& demands_bps,
                                               double capacity_bps);

// Scratch-buffer form used by the per-timestep engine loop: allocates for
// users[0..count) reading demand/cap arrays indexed by user id, writing
// alloc[user]. Avoids per-call vector churn.
class PfScratch {
 public:
  void allocate(const std::vector<std::size_t>& users, std::size_t begin,
                std::size_t count, const std::vector<double>& demands_bps,
                const std::vector<double>& caps_bps, double capacity_bps,
                std::vector<double>& alloc_bps);

 private:
  std::vector<std::size_t> order_;
  std::vector<double> effective_;
};

}  // namespace edgesim

#endif  // EDGESIM_LINK_MODEL_HPP_
