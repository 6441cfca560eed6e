// Copyright 2026 The banzhaf-lw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BANZHAF_RNG_HPP
#define BANZHAF_RNG_HPP

#include <cstdint>
#include <limits>

namespace banzhaf {

/**
 * SplitMix64 (Steele, Lea and Flood). The whole state is one 64-bit word:
 *
 *     state  <- state + 0x9E3779B97F4A7C15            (mod 2^64)
 *     z      <- state
 *     z      <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9
 *     z      <- (z xor (z >> 27)) * 0x94D049BB133111EB
 *     output <- z xor (z >> 31)
 *
 * uniform() maps an output to (output >> 11) * 2^-53, a double in [0, 1).
 * Satisfies UniformRandomBitGenerator so it can feed <random> as well.
 */
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t operator()() {
    state_ += kGamma;
    return mix(state_);
  }

  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  constexpr std::uint64_t state() const { return state_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  std::uint64_t state_;
};

/// Seed of sub-stream `index`: the (index+1)-th output of SplitMix64 seeded with `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return SplitMix64::mix(master + (index + 1) * SplitMix64::kGamma);
}

inline SplitMix64 substream(std::uint64_t master, std::uint64_t index) {
  return SplitMix64(derive_seed(master, index));
}

}  // namespace banzhaf

#endif  // BANZHAF_RNG_HPP
