// Copyright 2026 The ldpcount Authors
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

#ifndef LDPCOUNT_RANDOM_H_
#define LDPCOUNT_RANDOM_H_

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace ldpcount {

// SplitMix64 finalizer. Used for seeding and for deriving independent
// streams from (seed, stream id) pairs.
constexpr uint64_t Mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Combines a parent seed with a stream identifier. Distinct ids under the
// same seed give statistically independent child seeds.
constexpr uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  return Mix64(Mix64(seed) ^ Mix64(stream ^ 0x5851f42d4c957f2dULL));
}

// Seeded xoshiro256** generator. Output is bit-exact across platforms and
// standard libraries, which is what makes experiment replay possible; the
// helpers below deliberately avoid <random> distributions for that reason.
//
// Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed) {
    uint64_t z = seed;
    for (uint64_t& word : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      word = Mix64(z);
    }
  }

  // Generator for stream `stream` under `seed`.
  static Rng ForStream(uint64_t seed, uint64_t stream) {
    return Rng(DeriveSeed(seed, stream));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const uint64_t result = Rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = Rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double UniformDouble() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1).
  double UniformOpen() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  // True with probability p. p <= 0 never fires, p >= 1 always fires.
  bool Bernoulli(double p) { return UniformDouble() < p; }

  // Uniform integer in [0, n). n must be positive. Lemire's method with
  // rejection, so the result is exactly uniform.
  uint64_t UniformInt(uint64_t n) {
    unsigned __int128 product =
        static_cast<unsigned __int128>((*this)()) * n;
    uint64_t low = static_cast<uint64_t>(product);
    if (low < n) {
      const uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        product = static_cast<unsigned __int128>((*this)()) * n;
        low = static_cast<uint64_t>(product);
      }
    }
    return static_cast<uint64_t>(product >> 64);
  }

  // Standard normal via the Box-Muller transform (one variate per call).
  double StandardNormal() {
    const double u1 = UniformOpen();
    const double u2 = UniformDouble();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Zero-mean Laplace with the given scale, by inverting the CDF.
  double Laplace(double scale) {
    const double u = UniformOpen() - 0.5;
    const double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
    return u < 0 ? -magnitude : magnitude;
  }

 private:
  static constexpr uint64_t Rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<uint64_t, 4> state_;
};

}  // namespace ldpcount

#endif  // LDPCOUNT_RANDOM_H_
