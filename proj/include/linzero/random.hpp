// Copyright 2026 The LinZero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Portable random streams.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not (libstdc++ and libc++ disagree),
// so the transforms to uniform and normal variates are done here:
//   uniform01  = (x >> 11) * 2^-53
//   normal     = Box-Muller on two uniform01 draws, no caching of the pair
// Stream seeds are derived with splitmix64(seed ^ splitmix64(stream_id)), so
// every (experiment seed, stream id) pair gets an independent engine.

#ifndef LINZERO_RANDOM_HPP
#define LINZERO_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

namespace linzero {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Named streams split off one experiment seed.
enum class Stream : std::uint64_t {
  kEnvironment = 1,  // reward noise of the real environment (shared by all selectors)
  kOracle = 2,       // noise of the regret reference action
  kSelector = 3,     // selector-internal randomness (expansion sampling, random policy)
  kModel = 4,        // noise of the planning model queried inside the tree
  kInstance = 5,     // synthetic problem generation in tests/acceptance
};

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id) noexcept {
  return splitmix64(seed ^ splitmix64(stream_id));
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream stream) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(stream));
}

class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream) : engine_(derive_seed(seed, stream)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double normal(double mean = 0.0, double sd = 1.0) {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Index drawn from unnormalised non-negative weights.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (r < weights[i]) return i;
      r -= weights[i];
    }
    // Rounding can leave r marginally above the last bucket.
    for (std::size_t i = weights.size(); i-- > 0;) {
      if (weights[i] > 0.0) return i;
    }
    return 0;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace linzero

#endif  // LINZERO_RANDOM_HPP
