/*
 * Copyright 2026 The pbe Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Counter-based random streams.
//
// Every simulated group and every bootstrap resample owns an independent
// stream keyed by (seed, domain, index), so results do not depend on how work
// is split across threads. The distributions below are written out instead of
// using <random>'s, whose output is implementation-defined.

#ifndef PBE_RANDOM_H_
#define PBE_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace pbe {

inline uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream domains. Distinct values keep streams of different consumers apart
// even when they share a seed and an index.
enum class StreamDomain : uint64_t {
  kSimCandidate = 1,
  kSimFixedRank = 2,
  kSimScores = 3,
  kBootstrap = 4,
};

inline uint64_t DeriveStreamSeed(uint64_t seed, StreamDomain domain,
                                 uint64_t index, uint64_t sub_index = 0) {
  uint64_t h = Mix64(seed);
  h = Mix64(h ^ static_cast<uint64_t>(domain));
  h = Mix64(h ^ index);
  return Mix64(h ^ sub_index);
}

// SplitMix64. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = uint64_t;

  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

// Uniform on [0, 1) with 53 bits of resolution.
inline double Uniform01(SplitMix64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer on [lo, hi].
inline int64_t UniformInt(SplitMix64& rng, int64_t lo, int64_t hi) {
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  // Multiply-shift; bias is below 2^-64 * span.
  const unsigned __int128 product =
      static_cast<unsigned __int128>(rng()) * span;
  return lo + static_cast<int64_t>(product >> 64);
}

// Box-Muller; consumes exactly two draws.
inline double StandardNormal(SplitMix64& rng) {
  const double u1 = 1.0 - Uniform01(rng);  // (0, 1]
  const double u2 = Uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

inline bool Bernoulli(SplitMix64& rng, double p) { return Uniform01(rng) < p; }

}  // namespace pbe

#endif  // PBE_RANDOM_H_
