#pragma once

// Gaussian machinery for spectra with step >= d: the periodized Gaussian
// gamma_a^*, closed-form majorants of the interference sums A(s), B(n) and
// of the kernel tail, the sufficient conditions relating step d and band
// radius r, the Z_N band-recovery experiment, and a constructor of certified
// failure instances for l1 extension from a band.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "minext/errors.hpp"
#include "minext/fourier.hpp"
#include "minext/random.hpp"
#include "minext/signal.hpp"
#include "minext/solver.hpp"
#include "minext/trials.hpp"

namespace minext {

/// gamma(t) = exp(-pi t^2).
inline double gaussian(double t) { return std::exp(-std::numbers::pi * t * t); }

/// sum_m a gamma(a (t - m)), summed outward from the nearest integer.
inline double theta_spatial(double t, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("theta: a must be positive");
  const double t0 = t - std::round(t);  // in [-1/2, 1/2]
  double acc = a * gaussian(a * t0);
  for (long m = 1;; ++m) {
    const double md = static_cast<double>(m);
    const double term = a * (gaussian(a * (t0 - md)) + gaussian(a * (t0 + md)));
    acc += term;
    // Later terms shrink faster than geometrically once a(m - 1/2) > 1.
    if (term <= 1e-17 * acc && a * (md - 0.5) > 1.0) break;
    if (m > 100000) break;
  }
  return acc;
}

/// sum_n gamma(n / a) e(n t) = 1 + 2 sum_{n>=1} gamma(n / a) cos(2 pi n t).
inline double theta_fourier(double t, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("theta: a must be positive");
  double acc = 1.0;
  double scale = 1.0;  // running sum of term magnitudes
  for (long n = 1;; ++n) {
    const double nd = static_cast<double>(n);
    const double g = gaussian(nd / a);
    acc += 2.0 * g * std::cos(2.0 * std::numbers::pi * nd * t);
    scale += 2.0 * g;
    if (2.0 * g <= 1e-17 * scale && nd > a) break;
    if (n > 10000000) break;
  }
  return acc;
}

/// Periodized Gaussian gamma_a^* at t, by whichever series converges faster.
inline double theta_kernel(double t, double a) {
  return a >= 1.0 ? theta_spatial(t, a) : theta_fourier(t, a);
}

/// nu-dimensional version at a point of T^nu; the kernel is a product of
/// one-dimensional ones.
inline double theta_kernel(std::span<const double> point, double a) {
  double v = 1.0;
  for (double c : point) v *= theta_kernel(c, a);
  return v;
}

/// Point (t, 0, ..., 0) of T^nu.
inline double theta_kernel(double t, double a, int nu) {
  if (nu < 1) throw std::invalid_argument("theta: nu must be >= 1");
  return theta_kernel(t, a) * std::pow(theta_kernel(0.0, a), nu - 1);
}

struct LacunaryParams {
  int nu = 1;      // dimension
  double d = 0.0;  // spectral step
  double r = 0.0;  // band / ball radius, 0 < r < 1/2
  double a = 0.0;  // Gaussian scale

  void validate() const {
    if (nu < 1) throw std::invalid_argument("LacunaryParams: nu >= 1");
    if (!(d > 0.0)) throw std::invalid_argument("LacunaryParams: d > 0");
    if (!(r > 0.0 && r < 0.5)) throw std::invalid_argument("LacunaryParams: 0 < r < 1/2");
    if (!(a > 0.0)) throw std::invalid_argument("LacunaryParams: a > 0");
  }

  /// a = sqrt(d / r), which lies strictly between 1/r and d once d r > 1.
  static LacunaryParams with_default_scale(int nu, double d, double r) {
    return {nu, d, r, std::sqrt(d / r)};
  }
};

struct BoundReport {
  int nu = 1;
  double A_max = 0.0;       // majorant of |A(s)|
  double B_max = 0.0;       // majorant of |B(n)|, n outside S
  double tail = 0.0;        // majorant of the kernel's A-norm off the band
  double tail_constant = 0.0;  // 3 for nu = 1, nu! (>= C_nu) otherwise
  double A_series = 0.0;    // 2 sum_{j>=1} gamma(j d / a), nu = 1
  double tail_exact = 0.0;  // 2 gamma_a^*(r), nu = 1
  bool radius_admissible = false;  // r > (2/a) sqrt(log a)
  bool step_admissible = false;    // d > 2 a sqrt(log a)
  bool chain_holds = false;
};

/// sum_{j>=1} gamma(j d / a), stopped once a term drops below 1e-18.
inline double gaussian_lattice_tail(double d, double a) {
  double s = 0.0;
  for (long j = 1;; ++j) {
    const double term = gaussian(static_cast<double>(j) * d / a);
    s += term;
    if (term < 1e-18) break;
  }
  return s;
}

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// Closed-form majorants under 1/r < a < d, a >= 10.
inline BoundReport majorant_chain(const LacunaryParams& p) {
  p.validate();
  if (!(1.0 / p.r < p.a && p.a < p.d && p.a >= 10.0)) {
    throw InadmissibleScale("majorant_chain: needs 1/r < a < d and a >= 10");
  }
  constexpr double pi = std::numbers::pi;
  const double a2 = p.a * p.a;
  const double cross = std::exp(-pi * p.d * p.d / (4.0 * a2));
  const double lattice = p.nu == 1 ? 2.0 : std::pow(2.0, p.nu + 1);

  BoundReport rep;
  rep.nu = p.nu;
  rep.A_max = lattice * cross;
  rep.B_max = 1.0 - 3.0 * pi / (4.0 * a2) + lattice * cross;
  rep.tail_constant = p.nu == 1 ? 3.0 : factorial(p.nu);
  rep.tail = rep.tail_constant * std::pow(p.a, p.nu) * std::exp(-pi * a2 * p.r * p.r);
  if (p.nu == 1) {
    rep.A_series = 2.0 * gaussian_lattice_tail(p.d, p.a);
    rep.tail_exact = 2.0 * theta_kernel(p.r, p.a);
  }
  const double root_log_a = std::sqrt(std::log(p.a));
  rep.radius_admissible = p.r > (2.0 / p.a) * root_log_a;
  rep.step_admissible = p.d > 2.0 * p.a * root_log_a;
  rep.chain_holds = rep.radius_admissible && rep.step_admissible && rep.A_max <= pi / (4.0 * a2) &&
                    rep.B_max <= 1.0 - 2.0 * pi / (4.0 * a2) && rep.tail <= pi / (8.0 * a2);
  return rep;
}

using LatticePoint = std::vector<long long>;

inline double euclidean_distance(const LatticePoint& x, const LatticePoint& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = static_cast<double>(x[i] - y[i]);
    s += diff * diff;
  }
  return std::sqrt(s);
}

/// Minimal pairwise Euclidean distance; +inf for fewer than two points.
inline double euclidean_step(const std::vector<LatticePoint>& s) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) best = std::min(best, euclidean_distance(s[i], s[j]));
  }
  return best;
}

struct ExactAB {
  std::map<LatticePoint, Complex> A;  // s' in S
  std::map<LatticePoint, Complex> B;  // lattice points near S, outside S
  double max_A = 0.0;
  double max_B = 0.0;
};

/// A(s') = sum_{s != s'} eps_s gamma(|s' - s| / a) and
/// B(n)  = sum_s eps_s gamma(|n - s| / a), the latter over every lattice
/// point within `margin` (per coordinate) of the bounding box of S.
/// margin < 0 selects ceil(a).
inline ExactAB exact_AB(const std::vector<LatticePoint>& s, double a,
                        const std::vector<Complex>& signs, long long margin = -1) {
  if (s.empty()) throw std::invalid_argument("exact_AB: S is empty");
  if (signs.size() != s.size()) throw std::invalid_argument("exact_AB: one sign per point");
  const std::size_t nu = s.front().size();
  for (const auto& pt : s) {
    if (pt.size() != nu) throw std::invalid_argument("exact_AB: mixed dimensions");
  }
  if (margin < 0) margin = static_cast<long long>(std::ceil(a));

  ExactAB out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    Complex acc{};
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (j != i) acc += signs[j] * gaussian(euclidean_distance(s[i], s[j]) / a);
    }
    out.A[s[i]] = acc;
    out.max_A = std::max(out.max_A, std::abs(acc));
  }

  LatticePoint lo(nu), hi(nu);
  for (std::size_t c = 0; c < nu; ++c) {
    lo[c] = hi[c] = s.front()[c];
    for (const auto& pt : s) {
      lo[c] = std::min(lo[c], pt[c]);
      hi[c] = std::max(hi[c], pt[c]);
    }
    lo[c] -= margin;
    hi[c] += margin;
  }
  std::map<LatticePoint, bool> in_s;
  for (const auto& pt : s) in_s[pt] = true;

  LatticePoint cur = lo;
  while (true) {
    if (!in_s.count(cur)) {
      Complex acc{};
      for (std::size_t j = 0; j < s.size(); ++j) acc += signs[j] * gaussian(euclidean_distance(cur, s[j]) / a);
      out.B[cur] = acc;
      out.max_B = std::max(out.max_B, std::abs(acc));
    }
    std::size_t c = 0;
    while (c < nu && cur[c] == hi[c]) {
      cur[c] = lo[c];
      ++c;
    }
    if (c == nu) break;
    ++cur[c];
  }
  return out;
}

struct TheoremConditions {
  bool cond_44 = false;      // r > (5/d) sqrt(nu) log(nu d)
  bool cond_44_alt = false;  // r > (5/d) sqrt(nu log(nu d))
  bool cond_45 = false;      // d > (5/r) sqrt(log(1/r) + nu - 1)
  bool cond_37 = false;      // d > (5/r) log(1/r), needs r < 1/10
  bool cond_38 = false;      // r > (5/d) log d, needs d >= 10
};

/// Each flag is false outside its side condition (d >= 10 for the step
/// forms, r < 1/10 for the radius form).
inline TheoremConditions check_theorem_conditions(const LacunaryParams& p) {
  p.validate();
  const double nu = static_cast<double>(p.nu);
  const bool step_ok = p.d >= 10.0;
  TheoremConditions c;
  c.cond_44 = step_ok && p.r > (5.0 / p.d) * std::sqrt(nu) * std::log(nu * p.d);
  c.cond_44_alt = step_ok && p.r > (5.0 / p.d) * std::sqrt(nu * std::log(nu * p.d));
  c.cond_45 = step_ok && p.d > (5.0 / p.r) * std::sqrt(std::log(1.0 / p.r) + nu - 1.0);
  c.cond_37 = p.r < 0.1 && p.d > (5.0 / p.r) * std::log(1.0 / p.r);
  c.cond_38 = step_ok && p.r > (5.0 / p.d) * std::log(p.d);
  return c;
}

/// Smallest band size satisfying |K| >= 10 (N/d) sqrt(log d).
inline std::size_t sufficient_band_size(std::size_t n, double d) {
  return static_cast<std::size_t>(
      std::ceil(10.0 * static_cast<double>(n) / d * std::sqrt(std::log(d))));
}

/// Circle radius r transcribed to round(2 r N) consecutive frequencies.
inline std::size_t band_size_for_radius(std::size_t n, double r) {
  return static_cast<std::size_t>(std::llround(2.0 * r * static_cast<double>(n)));
}

/// Uniformly random support of `count` points with cyclic step >= d: the
/// N - count*d spare slots are split among the gaps by a uniform
/// composition, then the pattern is rotated.
inline SupportSet random_separated_support(std::size_t n, std::size_t d, std::size_t count,
                                           Xoshiro256& rng) {
  if (count == 0 || d == 0 || count * d > n) {
    throw std::invalid_argument("random_separated_support: need 1 <= count <= N/d");
  }
  const std::size_t spare = n - count * d;
  // Stars and bars: count-1 bars among spare + count - 1 slots.
  const SupportSet bars = random_subset(spare + count - 1, count - 1, rng);
  std::vector<std::size_t> extra(count, 0);
  std::size_t prev = 0, gap = 0;
  for (std::size_t b : bars) {
    extra[gap++] = b - prev;
    prev = b + 1;
  }
  extra[gap] = spare + count - 1 - prev;
  const std::size_t offset = static_cast<std::size_t>(rng.uniform_index(n));
  std::vector<std::size_t> pts;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < count; ++i) {
    pts.push_back((offset + pos) % n);
    pos += d + extra[i];
  }
  return SupportSet(n, std::move(pts));
}

struct BandRecoveryReport {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t band_size = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t nonconverged = 0;
  std::size_t sufficient_band = 0;  // ceil(10 (N/d) sqrt(log d))
  bool meets_sufficient_band = false;
  std::vector<TrialRecord> records;
};

/// Plants signals with cyclic step >= d and recovers them from a band of
/// consecutive frequencies at a random offset. `points` fixes |S|; 0 draws
/// it uniformly from 1..floor(N/d) each trial.
inline BandRecoveryReport band_recovery_experiment(std::size_t n, std::size_t d,
                                                   std::size_t band_size, std::size_t trials,
                                                   std::uint64_t seed, const SolverConfig& cfg = {},
                                                   std::size_t points = 0, unsigned threads = 0) {
  if (band_size < 1 || band_size > n) throw std::invalid_argument("band_size must lie in [1, N]");
  if (d < 1 || d > n) throw std::invalid_argument("d must lie in [1, N]");
  const std::size_t max_points = n / d;
  if (points > max_points) throw std::invalid_argument("more points than the step allows");

  BandRecoveryReport rep;
  rep.n = n;
  rep.d = d;
  rep.band_size = band_size;
  rep.trials = trials;
  rep.sufficient_band = d > 1 ? sufficient_band_size(n, static_cast<double>(d)) : n;
  rep.meets_sufficient_band = band_size >= rep.sufficient_band;
  rep.records = run_trials(
      trials,
      [&](std::size_t i) {
        TrialRecord rec;
        rec.index = i;
        rec.seed = trial_seed(seed, i);
        Xoshiro256 rng(rec.seed);
        const std::size_t count =
            points != 0 ? points : 1 + static_cast<std::size_t>(rng.uniform_index(max_points));
        const SupportSet s = random_separated_support(n, d, count, rng);
        const Signal x = planted_signal(s, rng);
        const SupportSet band =
            SupportSet::interval(n, static_cast<std::size_t>(rng.uniform_index(n)), band_size);
        const RecoveryReport r = solve_minimal_extension(restrict_spectrum(dft(x), band), cfg, &x);
        rec.omega_size = band_size;
        rec.success = r.converged && r.recovered.value_or(false);
        rec.objective = r.objective;
        rec.residual = r.feasibility_residual;
        rec.converged = r.converged;
        return rec;
      },
      threads);
  for (const auto& r : rep.records) {
    rep.successes += r.success ? 1 : 0;
    rep.nonconverged += r.converged ? 0 : 1;
  }
  return rep;
}

struct FailureExample {
  Signal x;           // partial sum of z, kept entries only
  Signal competitor;  // x - z: same spectrum as x on the band, smaller l1 norm
  Spectrum z_spectrum;
  std::size_t kept = 0;
};

/// Given zhat vanishing on the band, keeps the `keep` largest entries of z
/// (raising keep until ||z - x||_1 < ||x||_1) and returns x with the
/// competitor x - z, which l1 extension from the band must prefer.
inline FailureExample construct_failure_example(const SupportSet& band, const Spectrum& z_spectrum,
                                                std::size_t keep) {
  const std::size_t n = band.n();
  if (z_spectrum.n() != n) throw std::invalid_argument("construct_failure_example: N mismatch");
  if (band.size() >= n) throw std::invalid_argument("construct_failure_example: band must be proper");
  if (keep < 1 || keep >= n) throw std::invalid_argument("construct_failure_example: need 1 <= keep < N");
  const double zscale = linf_norm(z_spectrum.values());
  if (zscale == 0.0) throw std::invalid_argument("construct_failure_example: zhat is zero");
  for (std::size_t w : band) {
    if (std::abs(z_spectrum[w]) > 1e-12 * zscale) {
      throw std::invalid_argument("construct_failure_example: zhat must vanish on the band");
    }
  }
  const Signal z = idft(z_spectrum);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(z[i]) > std::abs(z[j]); });

  for (std::size_t k = keep; k < n; ++k) {
    std::vector<Complex> xv(n, Complex{});
    for (std::size_t j = 0; j < k; ++j) xv[order[j]] = z[order[j]];
    Signal x(std::move(xv));
    Signal competitor = x - z;
    const double lx = l1_norm(x);
    const double lc = l1_norm(competitor);
    if (lc < lx * (1.0 - 1e-12)) return {std::move(x), std::move(competitor), z_spectrum, k};
  }
  throw CannotSatisfyMassCondition("construct_failure_example: no keep < N gives ||z - x||_1 < ||x||_1");
}

/// Default zhat: the delta at the first frequency outside the band.
inline FailureExample construct_failure_example(const SupportSet& band, std::size_t keep) {
  const std::size_t n = band.n();
  const SupportSet off = band.complement();
  if (off.empty()) throw std::invalid_argument("construct_failure_example: band must be proper");
  return construct_failure_example(band, Spectrum::delta(n, off.members().front()), keep);
}

/// Random zhat supported on a uniform nonempty subset of the band's
/// complement, with unit phases and magnitudes in [1/2, 1].
inline Spectrum random_offband_spectrum(const SupportSet& band, Xoshiro256& rng) {
  const SupportSet off = band.complement();
  if (off.empty()) throw std::invalid_argument("random_offband_spectrum: band must be proper");
  const std::size_t count = 1 + static_cast<std::size_t>(rng.uniform_index(off.size()));
  const SupportSet pick = random_subset(off.size(), count, rng);
  std::vector<Complex> v(band.n(), Complex{});
  for (std::size_t k : pick) v[off.members()[k]] = rng.uniform(0.5, 1.0) * rng.unit_phase();
  return Spectrum(std::move(v));
}

}  // namespace minext
