#pragma once

// Exhaustive desk-scale oracles, independent of the splitting solver:
// basis pursuit by vertex enumeration, and the l0 mixed decomposition by
// support-pair enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "minext/dense.hpp"
#include "minext/errors.hpp"
#include "minext/fourier.hpp"
#include "minext/solver.hpp"

namespace minext {

struct BpOracleResult {
  double objective = 0.0;
  std::vector<Signal> minimizers;  // distinct optimal vertices
};

namespace detail {

// Calls f(members) for every k-subset of {0..n-1} in lexicographic order.
// f returns false to stop early.
template <class F>
bool for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return true;
  while (true) {
    if (!f(static_cast<const std::vector<std::size_t>&>(idx))) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

inline void push_unique(std::vector<Signal>& set, Signal candidate, double tol) {
  for (const Signal& s : set) {
    if (max_abs_diff(s, candidate) <= tol) return;
  }
  set.push_back(std::move(candidate));
}

}  // namespace detail

/// Minimal l1 value of a real signal matching the samples, by enumerating
/// every support of size <= |Omega| with linearly independent columns.
///
/// Real instances only: Omega must be closed under negation and the samples
/// conjugate-symmetric. Then the real feasible set has codimension |Omega|,
/// so every optimal vertex has at most |Omega| nonzeros, and the real
/// optimum equals the complex one (averaging y with its conjugate is
/// feasible and does not increase the l1 norm).
inline BpOracleResult exhaustive_bp_oracle(const Samples& samples, std::size_t max_n = 16) {
  const std::size_t n = samples.n();
  if (n > max_n) throw InstanceTooLarge("exhaustive_bp_oracle: N exceeds the enumeration limit");
  if (samples.omega.empty()) throw EmptyConstraint("exhaustive_bp_oracle: empty Omega");
  if (!samples.omega.symmetric()) {
    throw std::invalid_argument("exhaustive_bp_oracle: Omega must be closed under negation");
  }
  const auto& om = samples.omega.members();
  const std::size_t m = om.size();
  const double bscale = std::max(1.0, l2_norm(samples.values));
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t mirror = (n - om[k]) % n;
    const auto pos = std::lower_bound(om.begin(), om.end(), mirror) - om.begin();
    if (std::abs(samples.values[k] - std::conj(samples.values[static_cast<std::size_t>(pos)])) >
        1e-10 * bscale) {
      throw std::invalid_argument("exhaustive_bp_oracle: samples are not those of a real signal");
    }
  }

  // Real system: Re and Im rows of the partial Fourier map on real inputs.
  const TwiddleTable tw(n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  dense::Matrix<double> a(2 * m, n);
  dense::Vector<double> b(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t t = 0; t < n; ++t) {
      const Complex e = std::conj(tw(om[k] * t)) * inv_sqrt_n;
      a(static_cast<Eigen::Index>(2 * k), static_cast<Eigen::Index>(t)) = e.real();
      a(static_cast<Eigen::Index>(2 * k + 1), static_cast<Eigen::Index>(t)) = e.imag();
    }
    b(static_cast<Eigen::Index>(2 * k)) = samples.values[k].real();
    b(static_cast<Eigen::Index>(2 * k + 1)) = samples.values[k].imag();
  }

  const double feas_tol = 1e-9 * bscale;
  BpOracleResult out;
  out.objective = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Signal>> candidates;

  for (std::size_t k = 0; k <= std::min(m, n); ++k) {
    detail::for_each_subset(n, k, [&](const std::vector<std::size_t>& sup) {
      dense::Matrix<double> sub(a.rows(), static_cast<Eigen::Index>(k));
      for (std::size_t j = 0; j < k; ++j) sub.col(static_cast<Eigen::Index>(j)) = a.col(static_cast<Eigen::Index>(sup[j]));
      const auto ls = dense::least_squares<double>(sub, b);
      if (!ls.full_column_rank || ls.residual > feas_tol) return true;
      std::vector<Complex> y(n, Complex{});
      for (std::size_t j = 0; j < k; ++j) y[sup[j]] = ls.x(static_cast<Eigen::Index>(j));
      Signal cand(std::move(y));
      const double obj = l1_norm(cand);
      out.objective = std::min(out.objective, obj);
      candidates.emplace_back(obj, std::move(cand));
      return true;
    });
  }
  if (candidates.empty()) {
    throw Error("exhaustive_bp_oracle: no feasible vertex (inconsistent samples)");
  }
  for (auto& [obj, cand] : candidates) {
    if (obj <= out.objective + 1e-9) detail::push_unique(out.minimizers, std::move(cand), 1e-8);
  }
  return out;
}

struct L0Decomposition {
  Signal y;
  Signal z;
  SupportSet time_support;       // support of y
  SupportSet frequency_support;  // support of zhat
};

struct L0DecompositionResult {
  std::size_t best_total = 0;
  std::vector<L0Decomposition> decompositions;
};

/// min ||y||_0 + ||zhat||_0 subject to y + z = x, by exhaustive search over
/// pairs (time support of y, frequency support of zhat) in order of total
/// size. Feasibility on a candidate pair is decided by least squares.
inline L0DecompositionResult dh_decompose_l0(const Signal& x, ZeroTolerance tol = {},
                                             std::size_t max_n = 16,
                                             double max_candidates = 2e7) {
  const std::size_t n = x.n();
  if (n > max_n) throw InstanceTooLarge("dh_decompose_l0: N exceeds the enumeration limit");

  L0DecompositionResult out;
  if (l0_norm(x, tol) == 0) {
    out.best_total = 0;
    out.decompositions.push_back(
        {Signal::zeros(n), Signal::zeros(n), SupportSet::empty(n), SupportSet::empty(n)});
    return out;
  }
  // y = x or z = x are always feasible.
  const std::size_t upper = std::min(l0_norm(x, tol), l0_norm(dft(x), tol));
  double budget = 0.0;
  for (std::size_t k = 1; k < upper; ++k) budget += detail::binomial(2 * n, k);
  if (budget > max_candidates) {
    throw InstanceTooLarge("dh_decompose_l0: too many support pairs to enumerate");
  }

  // Dictionary: columns 0..n-1 are time deltas, n..2n-1 are the pure
  // exponentials idft(delta_w)(t) = e(wt/N)/sqrt(N).
  const TwiddleTable tw(n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  dense::Matrix<Complex> dict = dense::Matrix<Complex>::Zero(static_cast<Eigen::Index>(n),
                                                             static_cast<Eigen::Index>(2 * n));
  for (std::size_t t = 0; t < n; ++t) {
    dict(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(t)) = 1.0;
    for (std::size_t w = 0; w < n; ++w) {
      dict(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(n + w)) = tw(w * t) * inv_sqrt_n;
    }
  }
  dense::Vector<Complex> target(static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < n; ++t) target(static_cast<Eigen::Index>(t)) = x[t];
  const double feas_tol = 1e-9 * std::max(1.0, l2_norm(x));

  for (std::size_t k = 1; k <= upper; ++k) {
    detail::for_each_subset(2 * n, k, [&](const std::vector<std::size_t>& cols) {
      dense::Matrix<Complex> sub(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
      for (std::size_t j = 0; j < k; ++j) {
        sub.col(static_cast<Eigen::Index>(j)) = dict.col(static_cast<Eigen::Index>(cols[j]));
      }
      const auto ls = dense::least_squares<Complex>(sub, target);
      if (!ls.full_column_rank || ls.residual > feas_tol) return true;
      for (std::size_t j = 0; j < k; ++j) {
        if (std::abs(ls.x(static_cast<Eigen::Index>(j))) <= tol.value()) return true;
      }
      std::vector<Complex> y(n, Complex{}), w(n, Complex{});
      std::vector<std::size_t> ys, ws;
      for (std::size_t j = 0; j < k; ++j) {
        const Complex c = ls.x(static_cast<Eigen::Index>(j));
        if (cols[j] < n) {
          y[cols[j]] = c;
          ys.push_back(cols[j]);
        } else {
          w[cols[j] - n] = c;
          ws.push_back(cols[j] - n);
        }
      }
      out.decompositions.push_back({Signal(std::move(y)), idft(Spectrum(std::move(w))),
                                    SupportSet(n, std::move(ys)), SupportSet(n, std::move(ws))});
      return true;
    });
    if (!out.decompositions.empty()) {
      out.best_total = k;
      return out;
    }
  }
  // Unreachable in exact arithmetic: k = upper is always feasible.
  throw Error("dh_decompose_l0: no feasible decomposition found");
}

}  // namespace minext
