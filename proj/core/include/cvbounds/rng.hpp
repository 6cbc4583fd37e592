// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#pragma once

#include <cstdint>
#include <limits>

namespace cvb {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Seed of trial `trial_id` under `master_seed`:
///   mix64(master_seed + (trial_id + 1) * kGoldenGamma)   (mod 2^64)
/// Any implementation using the same CounterRng reproduces the same streams.
constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_id) noexcept {
  return mix64(master_seed + (trial_id + 1U) * kGoldenGamma);
}

/// Counter-based 64-bit generator: the i-th output (i = 1, 2, ...) is
/// mix64(seed + i * kGoldenGamma). Satisfies UniformRandomBitGenerator.
///
/// Derived draws are specified here rather than delegated to <random>
/// distributions, whose algorithms differ between standard libraries:
///   uniform01()       = (next() >> 11) * 2^-53, in [0, 1)
///   uniform_index(b)  = rejection sampling on next() % b
///   normal01()        = sqrt(-2 ln(1 - u1)) cos(2 pi u2), two uniform01 draws
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return next(); }

  constexpr result_type next() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  double uniform01() noexcept;

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;

  /// Standard normal by Box-Muller (cosine branch only, no cached pair).
  double normal01() noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace cvb
