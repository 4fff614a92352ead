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

#ifndef EDGESIM_RNG_HPP
#define EDGESIM_RNG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace edgesim::rng {

// Counter-based generator: every substream is keyed by (master seed, stream
// tag, entity ids...) and draws are pure functions of (key, counter). Paired
// runs can therefore share mobility/application streams across privacy levels
// while obfuscation draws stay independent, and no draw depends on execution
// order. All arithmetic is unsigned 64-bit, identical on every platform.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

/// Substream tags. Values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
  kTopologyBs = 0x01,
  kTopologyMh = 0x02,
  kMobilityCar = 0x03,
  kMobilityBus = 0x04,
  kMobilityPed = 0x05,
  kTrafficLight = 0x06,
  kAppAssign = 0x07,
  kObfuscation = 0x08,
  kGeneric = 0x09,
};

inline constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + kGolden + (h << 6) + (h >> 2)));
}

/// Derives a substream key from the master seed, a stream tag and up to
/// three entity identifiers (user, timestep, ...).
inline constexpr std::uint64_t derive_key(std::uint64_t seed, Stream stream,
                                          std::uint64_t a = 0, std::uint64_t b = 0,
                                          std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed + kGolden);
  h = combine(h, static_cast<std::uint64_t>(stream));
  h = combine(h, a);
  h = combine(h, b);
  h = combine(h, c);
  return h;
}

/// Keyed counter RNG (the splitmix64 sequence starting at the key).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : state_(key) {}

  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t a = 0,
             std::uint64_t b = 0, std::uint64_t c = 0)
      : state_(derive_key(seed, stream, a, b, c)) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Poisson draw with the exact distribution. Means above 400 are split into
  /// independent chunks (Poisson is additive) so exp() never underflows.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 0.0) {
      const double chunk = std::min(mean, 400.0);
      mean -= chunk;
      const double limit = std::exp(-chunk);
      double prod = 1.0;
      std::uint64_t k = 0;
      do {
        ++k;
        prod *= next_double();
      } while (prod > limit);
      total += k - 1;
    }
    return total;
  }

  template <typename T>
  void shuffle(T& seq) {
    for (std::size_t i = seq.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(seq[i - 1], seq[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace edgesim::rng

#endif  // EDGESIM_RNG_HPP
