//
// Copyright 2026 The Zealous Authors
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
//

#ifndef ZEALOUS_RANDOM_HPP_
#define ZEALOUS_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <string_view>

namespace zealous {

// Stream domains keep the randomness of independent pipeline stages apart
// even when they are keyed by the same (seed, item) pair.
enum class StreamDomain : uint64_t {
  kSelection = 1,
  kNoise = 2,
  kClickNoise = 3,
  kAnonymizer = 4,
  kSynthetic = 5,
  kOracle = 6,
  kAHat = 7,
};

inline constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// 64-bit FNV-1a. Stable across platforms and standard library versions,
// unlike std::hash, so per-item streams reproduce everywhere.
inline constexpr uint64_t StableHash(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// A seedable, splittable generator. Every (seed, key, domain) triple names an
// independent stream, so results never depend on iteration order.
class RandomStream {
 public:
  RandomStream(uint64_t seed, uint64_t key,
               StreamDomain domain = StreamDomain::kNoise)
      : state_(SplitMix64(SplitMix64(seed) ^
                          SplitMix64(key + static_cast<uint64_t>(domain) *
                                               0x632be59bd9b4e019ULL))) {}

  uint64_t Next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double UniformOpen01() {
    return (static_cast<double>(Next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  uint64_t Bounded(uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = Next();
    } while (x >= limit);
    return x % n;
  }

 private:
  uint64_t state_;
};

// Inverse-CDF Laplace transform of u in (-1/2, 1/2).
inline double LaplaceFromUniform(double lambda, double u) {
  if (u == 0.0) return 0.0;
  const double sign = u > 0 ? 1.0 : -1.0;
  return -lambda * sign * std::log1p(-2.0 * std::fabs(u));
}

inline double SampleLaplace(double lambda, RandomStream& rng) {
  return LaplaceFromUniform(lambda, rng.UniformOpen01() - 0.5);
}

inline double LaplacePdf(double x, double lambda) {
  return std::exp(-std::fabs(x) / lambda) / (2.0 * lambda);
}

inline double LaplaceCdf(double x, double lambda) {
  if (x < 0) return 0.5 * std::exp(x / lambda);
  return 1.0 - 0.5 * std::exp(-x / lambda);
}

// P[eta > t] for eta ~ Lap(lambda).
inline double LaplaceSurvival(double t, double lambda) {
  return LaplaceCdf(-t, lambda);
}

}  // namespace zealous

#endif  // ZEALOUS_RANDOM_HPP_
