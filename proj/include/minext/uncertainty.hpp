#pragma once

// Support-size localization on Z_N: ||x||_0 * ||xhat||_0 >= N, its
// arithmetic-mean form, the zero-run bound behind it, and exact tests for
// annihilating pairs (S, S').

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "minext/dense.hpp"
#include "minext/errors.hpp"
#include "minext/fourier.hpp"
#include "minext/random.hpp"
#include "minext/signal.hpp"

namespace minext {

struct SupportProduct {
  std::size_t time_support = 0;
  std::size_t frequency_support = 0;
  std::size_t product = 0;
  bool holds = false;  // product >= N
};

/// Both support sizes are measured on the unit-l2 rescaling of x.
inline SupportProduct verify_support_product(const Signal& x, ZeroTolerance tol = {}) {
  const Signal u = normalized(x);
  SupportProduct out;
  out.time_support = l0_norm(u, tol);
  if (out.time_support == 0) throw ZeroSignal("verify_support_product: x is zero at tolerance");
  out.frequency_support = l0_norm(dft(u), tol);
  out.product = out.time_support * out.frequency_support;
  out.holds = out.product >= x.n();
  return out;
}

struct SupportSum {
  std::size_t sum = 0;
  bool holds = false;  // sum >= 2 sqrt(N)
};

inline SupportSum sum_bound(const Signal& x, ZeroTolerance tol = {}) {
  const Signal u = normalized(x);
  const std::size_t a = l0_norm(u, tol);
  if (a == 0) throw ZeroSignal("sum_bound: x is zero at tolerance");
  SupportSum out;
  out.sum = a + l0_norm(dft(u), tol);
  // sum >= 2 sqrt(N)  <=>  sum^2 >= 4N, compared in integers.
  out.holds = out.sum * out.sum >= 4 * x.n();
  return out;
}

/// Longest cyclic run of consecutive entries with modulus <= eps_zero.
/// An all-zero sequence has run N.
template <class D>
std::size_t max_zero_run(const Sequence<D>& s, ZeroTolerance tol = {}) {
  const std::size_t n = s.n();
  std::size_t first_nonzero = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(s[i]) > tol.value()) {
      first_nonzero = i;
      break;
    }
  }
  if (first_nonzero == n) return n;
  // Walk one full turn starting at a nonzero entry so the wrap-around run
  // is counted in one piece.
  std::size_t best = 0, run = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t i = (first_nonzero + k) % n;
    if (std::abs(s[i]) <= tol.value()) {
      best = std::max(best, ++run);
    } else {
      run = 0;
    }
  }
  return best;
}

/// Indicator of the subgroup of order m in Z_{m^2}: the Dirac comb, which
/// attains ||x||_0 = ||xhat||_0 = m.
struct CombWitness {
  std::size_t n = 0;
  std::size_t order = 0;
  Signal signal;
};

inline CombWitness make_comb_witness(std::size_t m) {
  if (m == 0) throw std::invalid_argument("make_comb_witness: order must be positive");
  const std::size_t n = m * m;
  std::vector<Complex> v(n, Complex{});
  for (std::size_t k = 0; k < m; ++k) v[k * m] = 1.0;
  return {n, m, Signal(std::move(v))};
}

/// Indicator of a coset a + H with H the subgroup of the given order.
inline Signal coset_indicator(std::size_t n, std::size_t order, std::size_t shift) {
  if (order == 0 || n % order != 0) throw std::invalid_argument("order must divide N");
  std::vector<Complex> v(n, Complex{});
  const std::size_t step = n / order;
  for (std::size_t k = 0; k < order; ++k) v[(shift + k * step) % n] = 1.0;
  return Signal(std::move(v));
}

/// True iff some x != 0 has supp x in S and supp xhat in S'. Decided by the
/// rank of the Fourier block with rows outside S' and columns in S.
inline bool annihilating_pair_exists(const SupportSet& s, const SupportSet& sp) {
  if (s.n() != sp.n()) throw std::invalid_argument("annihilating_pair_exists: N mismatch");
  if (s.empty() || sp.empty()) throw std::invalid_argument("annihilating_pair_exists: empty set");
  const std::size_t n = s.n();
  const SupportSet rows = sp.complement();
  if (rows.size() < s.size()) return true;  // more unknowns than equations
  const TwiddleTable tw(n);
  dense::Matrix<Complex> block(static_cast<Eigen::Index>(rows.size()),
                               static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::conj(tw(rows.members()[i] * s.members()[j]));
    }
  }
  return dense::numerical_rank<Complex>(block, 1e-9) < s.size();
}

enum class PairSampling {
  uniform,    // independent uniform subsets of the given sizes
  intervals,  // independent random cyclic intervals
  comb_mixture,  // with probability 1/2 each set is a random coset of the
                 // subgroup of its size (when the size divides N), else uniform
};

struct AnnihilationEstimate {
  std::size_t hits = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
};

namespace detail {

inline SupportSet draw_pair_member(std::size_t n, std::size_t size, PairSampling mode,
                                   Xoshiro256& rng) {
  switch (mode) {
    case PairSampling::intervals:
      return SupportSet::interval(n, static_cast<std::size_t>(rng.uniform_index(n)), size);
    case PairSampling::comb_mixture:
      if (n % size == 0 && rng.bernoulli(0.5)) {
        const Signal c = coset_indicator(n, size, static_cast<std::size_t>(rng.uniform_index(n)));
        return support(c);
      }
      [[fallthrough]];
    case PairSampling::uniform:
    default:
      return random_subset(n, size, rng);
  }
}

}  // namespace detail

/// Empirical probability that a random (S, S') of the given sizes admits an
/// annihilating pair. Trial i draws from the stream trial_seed(seed, i).
inline AnnihilationEstimate mc_annihilating_probability(std::size_t n, std::size_t size_s,
                                                        std::size_t size_sp, std::size_t trials,
                                                        std::uint64_t seed,
                                                        PairSampling mode = PairSampling::uniform) {
  if (size_s < 1 || size_sp < 1 || size_s > n || size_sp > n) {
    throw std::invalid_argument("mc_annihilating_probability: sizes must lie in [1, N]");
  }
  if (trials == 0) throw std::invalid_argument("mc_annihilating_probability: trials >= 1");
  AnnihilationEstimate out;
  out.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    Xoshiro256 rng(trial_seed(seed, i));
    const SupportSet s = detail::draw_pair_member(n, size_s, mode, rng);
    const SupportSet sp = detail::draw_pair_member(n, size_sp, mode, rng);
    if (annihilating_pair_exists(s, sp)) ++out.hits;
  }
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(trials);
  return out;
}

}  // namespace minext
