#pragma once

// Portable seeded randomness. Standard-library distributions are
// implementation-defined, so every draw here is spelled out bit for bit:
//
//   SplitMix64          state += 0x9E3779B97F4A7C15; output = mix64(state)
//   mix64(z)            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//                       z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//                       return z ^ (z >> 31)
//   Xoshiro256**        Blackman & Vigna, state filled by four SplitMix64
//                       outputs of the seed
//   uniform01           (next() >> 11) * 2^-53
//   uniform_index(b)    rejection: draw r until r >= (2^64 - b) mod b,
//                       return r mod b
//
// Per-trial streams: trial_seed(master, i) = mix64(master + (i + 1) *
// 0x9E3779B97F4A7C15), the (i+1)-th SplitMix64 output from master. A trial's
// draws depend only on (master, i), never on scheduling.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "minext/signal.hpp"

namespace minext {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master + (index + 1) * kGolden);
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  constexpr std::uint64_t operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

 private:
  std::uint64_t state_;
};

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm();
  }

  constexpr std::uint64_t operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t uniform_index(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      const std::uint64_t r = (*this)();
      if (r >= threshold) return r % bound;
    }
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  Complex unit_phase() noexcept {
    const double a = 2.0 * std::numbers::pi * uniform01();
    return {std::cos(a), std::sin(a)};
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4]{};
};

/// Uniform k-subset of {0..n-1} by partial Fisher-Yates.
inline SupportSet random_subset(std::size_t n, std::size_t k, Xoshiro256& rng) {
  if (k > n) throw std::invalid_argument("random_subset: k > n");
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return SupportSet(n, std::move(pool));
}

/// Each residue independently with probability tau.
inline SupportSet bernoulli_frequency_sample(double tau, std::size_t n, Xoshiro256& rng) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
  std::vector<std::size_t> m;
  for (std::size_t w = 0; w < n; ++w) {
    if (rng.bernoulli(tau)) m.push_back(w);
  }
  return SupportSet(n, std::move(m));
}

/// Random signal on the given support: unit-modulus phases times
/// magnitudes uniform in [lo, hi].
inline Signal planted_signal(const SupportSet& s, Xoshiro256& rng, double lo = 0.5, double hi = 1.0) {
  std::vector<Complex> v(s.n(), Complex{});
  for (std::size_t t : s) {
    const double mag = rng.uniform(lo, hi);
    v[t] = mag * rng.unit_phase();
  }
  return Signal(std::move(v));
}

}  // namespace minext
