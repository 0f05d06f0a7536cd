#pragma once

// l1-minimal extension from partial Fourier data, and the l1 form of the
// time/frequency mixed decomposition x = y + z.
//
// Both problems are  min ||v||_1  subject to  v in C  with C affine and an
// exact closed-form projector onto C, and both run through the same
// Douglas-Rachford iteration:
//
//   p     = P_C(z)
//   u     = soft(2p - z, gamma)
//   z    += relaxation * (u - p)
//
// The returned minimizer is u, the output of the l1 proximal step, which is
// exactly sparse; its constraint residual is reported separately.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "minext/dense.hpp"
#include "minext/errors.hpp"
#include "minext/fourier.hpp"
#include "minext/signal.hpp"

namespace minext {

struct SolverConfig {
  int max_iter = 50000;
  double eps_feasibility = 1e-9;
  double eps_step = 1e-10;
  double relaxation = 1.0;
  double recovery_rel_tol = 1e-6;
  /// Threshold gamma as a fraction of the largest entry of the starting
  /// point. Any positive value gives the same fixed points.
  double step_scale = 0.5;

  void validate() const {
    if (max_iter <= 0) throw std::invalid_argument("max_iter must be positive");
    if (!(eps_feasibility > 0.0)) throw std::invalid_argument("eps_feasibility must be positive");
    if (!(eps_step > 0.0)) throw std::invalid_argument("eps_step must be positive");
    if (!(relaxation > 0.0 && relaxation < 2.0)) {
      throw std::invalid_argument("relaxation must lie in (0, 2)");
    }
    if (!(recovery_rel_tol > 0.0)) throw std::invalid_argument("recovery_rel_tol must be positive");
    if (!(step_scale > 0.0)) throw std::invalid_argument("step_scale must be positive");
  }
};

struct RecoveryReport {
  Signal minimizer;
  double objective = 0.0;             // l1_norm(minimizer)
  double feasibility_residual = 0.0;  // ||minimizer^|_Omega - samples||_2
  int iterations = 0;
  bool converged = false;
  std::optional<bool> recovered;      // set when ground truth is supplied
};

/// Frequency samples: values[k] is the observed spectrum at omega.members()[k].
struct Samples {
  SupportSet omega;
  std::vector<Complex> values;

  Samples() = default;
  Samples(SupportSet o, std::vector<Complex> v) : omega(std::move(o)), values(std::move(v)) {
    if (omega.size() != values.size()) {
      throw std::invalid_argument("one sample value per sampled frequency");
    }
    for (const Complex& c : values) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw std::invalid_argument("sample values must be finite");
      }
    }
  }

  static Samples from_map(std::size_t n, const std::map<std::size_t, Complex>& m) {
    std::vector<std::size_t> idx;
    std::vector<Complex> vals;
    for (const auto& [w, v] : m) {
      idx.push_back(w);
      vals.push_back(v);
    }
    return Samples(SupportSet(n, std::move(idx)), std::move(vals));
  }

  std::size_t n() const noexcept { return omega.n(); }
};

/// Restriction of a spectrum to a frequency set.
inline Samples restrict_spectrum(const Spectrum& s, const SupportSet& omega) {
  std::vector<Complex> v;
  v.reserve(omega.size());
  for (std::size_t w : omega) v.push_back(s.at(w));
  return Samples(omega, std::move(v));
}

inline bool relative_l2_match(std::span<const Complex> got, std::span<const Complex> truth,
                              double rel_tol) {
  double err = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) err += std::norm(got[i] - truth[i]);
  const double ref = l2_norm(truth);
  return std::sqrt(err) <= rel_tol * (ref > 0.0 ? ref : 1.0);
}

/// True when y -> yhat|_Omega is injective on signals supported in S. When
/// it is not, a minimizer supported in S is never the unique one: adding a
/// small kernel element keeps feasibility and the sign pattern, and the
/// objective is linear along that segment.
inline bool injective_on_support(const SupportSet& omega, const SupportSet& s) {
  if (s.empty()) return true;
  if (omega.size() < s.size()) return false;
  const TwiddleTable tw(omega.n());
  dense::Matrix<Complex> block(static_cast<Eigen::Index>(omega.size()),
                               static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < omega.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::conj(tw(omega.members()[i] * s.members()[j]));
    }
  }
  return dense::numerical_rank<Complex>(block, 1e-9) == s.size();
}

namespace detail {

/// Complex soft threshold v -> v * max(0, 1 - gamma/|v|).
inline void soft_threshold(std::span<const Complex> in, double gamma, std::span<Complex> out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double m = std::abs(in[i]);
    out[i] = m > gamma ? in[i] * (1.0 - gamma / m) : Complex{};
  }
}

struct DrOutcome {
  std::vector<Complex> minimizer;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Projector concept:
//   void project(std::span<const Complex> in, std::span<Complex> out);
//   double residual(std::span<const Complex> v);   // l2 constraint residual
template <class Projector>
DrOutcome douglas_rachford_l1(Projector& proj, std::size_t dim, const SolverConfig& cfg) {
  std::vector<Complex> z(dim), p(dim), r(dim), u(dim);
  proj.project(z, p);  // least-norm feasible point
  z = p;
  const double gamma = cfg.step_scale * std::max(linf_norm(p), 1e-300);

  DrOutcome out;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    proj.project(z, p);
    for (std::size_t i = 0; i < dim; ++i) r[i] = 2.0 * p[i] - z[i];
    soft_threshold(r, gamma, u);
    double step2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const Complex d = cfg.relaxation * (u[i] - p[i]);
      z[i] += d;
      step2 += std::norm(d);
    }
    out.iterations = it;
    const double scale = std::max(1.0, l2_norm(p));
    if (std::sqrt(step2) <= cfg.eps_step * scale) {
      const double res = proj.residual(u);
      if (res <= cfg.eps_feasibility) {
        out.converged = true;
        out.residual = res;
        out.minimizer = std::move(u);
        return out;
      }
    }
  }
  out.residual = proj.residual(u);
  out.minimizer = std::move(u);
  return out;
}

class AffineFourierProjector {
 public:
  AffineFourierProjector(const Samples& s)
      : op_(s.n(), s.omega), b_(s.values), tmp_(s.values.size()), back_(s.n()) {}

  void project(std::span<const Complex> in, std::span<Complex> out) {
    op_.apply(in, tmp_);
    for (std::size_t k = 0; k < tmp_.size(); ++k) tmp_[k] = b_[k] - tmp_[k];
    op_.adjoint(tmp_, back_);
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] + back_[i];
  }

  double residual(std::span<const Complex> v) {
    op_.apply(v, tmp_);
    double s = 0.0;
    for (std::size_t k = 0; k < tmp_.size(); ++k) s += std::norm(tmp_[k] - b_[k]);
    return std::sqrt(s);
  }

 private:
  PartialFourier op_;
  std::vector<Complex> b_;
  std::vector<Complex> tmp_;
  std::vector<Complex> back_;
};

// Variable (y, w) with w the spectrum of z; constraint y + idft(w) = x.
// [I, F^*] has M M^* = 2I, so the projector moves by M^* r / 2.
class MixedDecompositionProjector {
 public:
  explicit MixedDecompositionProjector(const Signal& x)
      : n_(x.n()), x_(x.vector()), full_(n_, SupportSet::full(n_)), r_(n_), tmp_(n_) {}

  void project(std::span<const Complex> in, std::span<Complex> out) {
    constraint_gap(in);
    full_.apply(r_, tmp_);
    for (std::size_t i = 0; i < n_; ++i) {
      out[i] = in[i] + 0.5 * r_[i];
      out[n_ + i] = in[n_ + i] + 0.5 * tmp_[i];
    }
  }

  double residual(std::span<const Complex> v) {
    constraint_gap(v);
    return l2_norm(r_);
  }

 private:
  // r = x - y - idft(w)
  void constraint_gap(std::span<const Complex> v) {
    full_.adjoint(v.subspan(n_, n_), tmp_);
    for (std::size_t i = 0; i < n_; ++i) r_[i] = x_[i] - v[i] - tmp_[i];
  }

  std::size_t n_;
  std::vector<Complex> x_;
  PartialFourier full_;
  std::vector<Complex> r_;
  std::vector<Complex> tmp_;
};

}  // namespace detail

/// Runs the splitting scheme and returns the report whether or not it
/// converged. Monte Carlo loops use this form and count non-convergence.
inline RecoveryReport solve_minimal_extension(const Samples& samples, const SolverConfig& cfg = {},
                                              const Signal* truth = nullptr) {
  cfg.validate();
  if (samples.omega.empty()) throw EmptyConstraint("minimal extension needs a nonempty Omega");
  detail::AffineFourierProjector proj(samples);
  auto dr = detail::douglas_rachford_l1(proj, samples.n(), cfg);

  RecoveryReport rep;
  rep.minimizer = Signal(std::move(dr.minimizer));
  rep.objective = l1_norm(rep.minimizer);
  rep.feasibility_residual = dr.residual;
  rep.iterations = dr.iterations;
  rep.converged = dr.converged;
  if (truth != nullptr) {
    if (truth->n() != samples.n()) throw std::invalid_argument("ground truth on a different N");
    // Exact recovery means the truth is the unique minimal extension.
    rep.recovered = relative_l2_match(rep.minimizer.values(), truth->values(), cfg.recovery_rel_tol) &&
                    injective_on_support(samples.omega, support(*truth));
  }
  return rep;
}

/// l1-minimal extension of the samples: argmin ||y||_1 subject to
/// yhat(w) = samples(w) for w in Omega. Throws NonConvergence when max_iter
/// is exhausted.
inline RecoveryReport minimal_extension_recover(const Samples& samples, const SolverConfig& cfg = {},
                                                const std::optional<Signal>& truth = std::nullopt) {
  RecoveryReport rep = solve_minimal_extension(samples, cfg, truth ? &*truth : nullptr);
  if (!rep.converged) {
    throw NonConvergence("minimal extension: iteration budget exhausted", rep.iterations,
                         rep.feasibility_residual);
  }
  return rep;
}

struct MixedDecomposition {
  Signal y;  // time-sparse part
  Signal z;  // frequency-sparse part
  double objective = 0.0;  // ||y||_1 + ||zhat||_1
  double feasibility_residual = 0.0;
  int iterations = 0;
};

/// min ||y||_1 + ||zhat||_1 subject to y + z = x.
inline MixedDecomposition dh_decompose_l1(const Signal& x, const SolverConfig& cfg = {}) {
  cfg.validate();
  const std::size_t n = x.n();
  detail::MixedDecompositionProjector proj(x);
  auto dr = detail::douglas_rachford_l1(proj, 2 * n, cfg);
  if (!dr.converged) {
    throw NonConvergence("mixed decomposition: iteration budget exhausted", dr.iterations,
                         dr.residual);
  }
  std::vector<Complex> y(dr.minimizer.begin(), dr.minimizer.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<Complex> w(dr.minimizer.begin() + static_cast<std::ptrdiff_t>(n), dr.minimizer.end());
  MixedDecomposition out;
  out.objective = l1_norm(y) + l1_norm(w);
  out.y = Signal(std::move(y));
  out.z = idft(Spectrum(std::move(w)));
  out.feasibility_residual = dr.residual;
  out.iterations = dr.iterations;
  return out;
}

}  // namespace minext
