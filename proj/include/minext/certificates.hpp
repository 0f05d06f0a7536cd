#pragma once

// Idempotent kernels K(t) = sum_{w in Omega} e(wt/N), the kernel
// concentration test, dual certificates
//
//   P(t) = sum_{t' in S} lambda_{t'} K(t - t') / K(0)
//
// whose spectrum lives on Omega, and the sufficient condition on P that
// forces l1 recovery of every signal with sign pattern lambda on S.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "minext/fourier.hpp"
#include "minext/random.hpp"
#include "minext/signal.hpp"
#include "minext/solver.hpp"
#include "minext/trials.hpp"

namespace minext {

class IdempotentKernel {
 public:
  IdempotentKernel(std::size_t n, SupportSet omega, std::vector<Complex> values)
      : n_(n), omega_(std::move(omega)), values_(std::move(values)) {}

  std::size_t n() const noexcept { return n_; }
  const SupportSet& omega() const noexcept { return omega_; }
  const std::vector<Complex>& values() const noexcept { return values_; }
  Complex operator()(std::size_t t) const { return values_[t % n_]; }
  double peak() const noexcept { return values_[0].real(); }  // K(0) = |Omega|

 private:
  std::size_t n_;
  SupportSet omega_;
  std::vector<Complex> values_;
};

/// Kernel by direct summation over Omega.
inline IdempotentKernel make_kernel(const SupportSet& omega) {
  if (omega.empty()) throw std::invalid_argument("make_kernel: Omega is empty");
  const std::size_t n = omega.n();
  const TwiddleTable tw(n);
  std::vector<Complex> k(n, Complex{});
  for (std::size_t t = 0; t < n; ++t) {
    Complex acc{};
    for (std::size_t w : omega) acc += tw(w * t);
    k[t] = acc;
  }
  // K(0) is the integer |Omega|; pin it exactly.
  k[0] = Complex(static_cast<double>(omega.size()), 0.0);
  return IdempotentKernel(n, omega, std::move(k));
}

/// Same kernel through the fast transform: K = sqrt(N) * idft(1_Omega).
/// Used in Monte Carlo loops at large N.
inline IdempotentKernel make_kernel_fast(const SupportSet& omega) {
  if (omega.empty()) throw std::invalid_argument("make_kernel: Omega is empty");
  const std::size_t n = omega.n();
  std::vector<Complex> ind(n, Complex{});
  for (std::size_t w : omega) ind[w] = 1.0;
  Signal k = idft(Spectrum(std::move(ind)));
  const double root_n = std::sqrt(static_cast<double>(n));
  std::vector<Complex> v(n);
  for (std::size_t t = 0; t < n; ++t) v[t] = k[t] * root_n;
  v[0] = Complex(static_cast<double>(omega.size()), 0.0);
  return IdempotentKernel(n, omega, std::move(v));
}

/// Relative slack under which a strict inequality is treated as a tie.
inline constexpr double kTieTolerance = 1e-12;

struct ConditionCheck {
  bool holds = false;
  double margin = 0.0;  // K(0)/(2T) - max_{t != 0} |K(t)|
};

/// max_{t != 0} |K(t)| < K(0) / (2T), strictly.
inline ConditionCheck check_condition_iv(const IdempotentKernel& k, std::size_t sparsity) {
  if (sparsity < 1) throw std::invalid_argument("check_condition_iv: T must be >= 1");
  double off_peak = 0.0;
  for (std::size_t t = 1; t < k.n(); ++t) off_peak = std::max(off_peak, std::abs(k(t)));
  const double bound = k.peak() / (2.0 * static_cast<double>(sparsity));
  ConditionCheck out;
  out.margin = bound - off_peak;
  // Equality cases (common: |K(t)| is often an integer) must not pass on
  // rounding noise.
  if (std::abs(out.margin) <= kTieTolerance * std::max(1.0, k.peak())) out.margin = 0.0;
  out.holds = out.margin > 0.0;
  return out;
}

/// Sign pattern lambda_t, |lambda_t| = 1, on a time support S.
class SignPattern {
 public:
  SignPattern() = default;

  SignPattern(SupportSet support, std::vector<Complex> lambdas)
      : support_(std::move(support)), lambdas_(std::move(lambdas)) {
    if (lambdas_.size() != support_.size()) {
      throw std::invalid_argument("SignPattern: one phase per support point");
    }
    for (const Complex& l : lambdas_) {
      if (std::abs(std::abs(l) - 1.0) > 1e-12) {
        throw std::invalid_argument("SignPattern: phases must have unit modulus");
      }
    }
  }

  /// lambda_t = x_t / |x_t| on the support of x.
  static SignPattern of(const Signal& x, ZeroTolerance tol = {}) {
    SupportSet s = minext::support(x, tol);
    std::vector<Complex> l;
    for (std::size_t t : s) l.push_back(x[t] / std::abs(x[t]));
    return SignPattern(std::move(s), std::move(l));
  }

  const SupportSet& support() const noexcept { return support_; }
  const std::vector<Complex>& lambdas() const noexcept { return lambdas_; }
  std::size_t n() const noexcept { return support_.n(); }

 private:
  SupportSet support_;
  std::vector<Complex> lambdas_;
};

class DualCertificate {
 public:
  DualCertificate(std::vector<Complex> values, SignPattern sp, IdempotentKernel k)
      : values_(std::move(values)), pattern_(std::move(sp)), kernel_(std::move(k)) {}

  std::size_t n() const noexcept { return values_.size(); }
  const std::vector<Complex>& values() const noexcept { return values_; }
  Complex operator()(std::size_t t) const { return values_[t]; }
  const SignPattern& pattern() const noexcept { return pattern_; }
  const IdempotentKernel& kernel() const noexcept { return kernel_; }

  Signal as_signal() const { return Signal(values_); }

 private:
  std::vector<Complex> values_;
  SignPattern pattern_;
  IdempotentKernel kernel_;
};

inline DualCertificate build_certificate(const SignPattern& sp, const IdempotentKernel& k) {
  if (sp.n() != k.n()) throw std::invalid_argument("build_certificate: N mismatch");
  const std::size_t n = k.n();
  const double peak = k.peak();
  std::vector<Complex> p(n, Complex{});
  const auto& s = sp.support().members();
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Complex l = sp.lambdas()[j] / peak;
    for (std::size_t t = 0; t < n; ++t) p[t] += l * k((t + n - s[j]) % n);
  }
  return DualCertificate(std::move(p), sp, k);
}

/// Largest spectral magnitude of P off Omega (zero up to rounding).
inline double certificate_leakage(const DualCertificate& p) {
  const Spectrum ph = dft(p.as_signal());
  double m = 0.0;
  for (std::size_t w = 0; w < ph.n(); ++w) {
    if (!p.kernel().omega().contains(w)) m = std::max(m, std::abs(ph[w]));
  }
  return m;
}

struct CertificateCheck {
  bool holds = false;
  double worst_on_support = 0.0;   // max_{t in S} |P(t) - lambda_t|
  double worst_off_support = 0.0;  // max_{t not in S} |P(t)|
};

/// |P(t) - lambda_t| < 1/2 on S and |P(t)| < 1/2 off S, both strict.
inline CertificateCheck check_condition_2prime(const DualCertificate& p, const SignPattern& sp) {
  if (p.n() != sp.n()) throw std::invalid_argument("check_condition_2prime: N mismatch");
  CertificateCheck out;
  const auto& s = sp.support();
  for (std::size_t j = 0; j < s.size(); ++j) {
    const std::size_t t = s.members()[j];
    out.worst_on_support = std::max(out.worst_on_support, std::abs(p(t) - sp.lambdas()[j]));
  }
  for (std::size_t t = 0; t < p.n(); ++t) {
    if (!s.contains(t)) out.worst_off_support = std::max(out.worst_off_support, std::abs(p(t)));
  }
  constexpr double half = 0.5 - kTieTolerance;
  out.holds = out.worst_on_support < half && out.worst_off_support < half;
  return out;
}

/// |Omega| >= 4 T^2 N / (N + 4T^2 - 1) whenever the kernel test holds at T.
inline double omega_parseval_lower_bound(std::size_t sparsity, std::size_t n) {
  if (sparsity < 1 || n < 1) throw std::invalid_argument("omega_parseval_lower_bound: T, N >= 1");
  const double t2 = 4.0 * static_cast<double>(sparsity) * static_cast<double>(sparsity);
  const double nn = static_cast<double>(n);
  return t2 * nn / (nn + t2 - 1.0);
}

/// sum_t |K(t)|^2, equal to N |Omega|.
inline double kernel_energy(const IdempotentKernel& k) {
  double s = 0.0;
  for (const Complex& v : k.values()) s += std::norm(v);
  return s;
}

struct ImplicationReport {
  std::size_t trials = 0;
  std::size_t certificate_holds = 0;  // constructed P passes the certificate check
  std::size_t recoveries = 0;         // planted signal returned by l1 extension
  std::size_t counterexamples = 0;    // trials failing either check
  double max_leakage = 0.0;           // spectrum of P off Omega
};

/// Empirical form of "kernel test at T => every T-sparse signal is the
/// l1-minimal extension of its samples on Omega". Each trial plants a signal
/// on a uniform T-subset with random phases and magnitudes in [1/2, 1].
inline ImplicationReport verify_implication_iv_to_recovery(const IdempotentKernel& k,
                                                           std::size_t sparsity, std::size_t trials,
                                                           std::uint64_t seed,
                                                           const SolverConfig& cfg = {},
                                                           unsigned threads = 0) {
  if (!check_condition_iv(k, sparsity).holds) {
    throw std::invalid_argument("verify_implication_iv_to_recovery: kernel test fails at this T");
  }
  if (sparsity > k.n()) throw std::invalid_argument("verify_implication_iv_to_recovery: T > N");
  struct Outcome {
    bool certificate = false;
    bool recovered = false;
    double leakage = 0.0;
  };
  const auto outcomes = run_trials(
      trials,
      [&](std::size_t i) {
        Xoshiro256 rng(trial_seed(seed, i));
        const SupportSet s = random_subset(k.n(), sparsity, rng);
        const Signal x = planted_signal(s, rng);
        const SignPattern sp = SignPattern::of(x);
        const DualCertificate p = build_certificate(sp, k);
        Outcome o;
        o.certificate = check_condition_2prime(p, sp).holds;
        o.leakage = certificate_leakage(p);
        const RecoveryReport r = solve_minimal_extension(restrict_spectrum(dft(x), k.omega()), cfg, &x);
        o.recovered = r.converged && r.recovered.value_or(false);
        return o;
      },
      threads);
  ImplicationReport rep;
  rep.trials = trials;
  for (const Outcome& o : outcomes) {
    rep.certificate_holds += o.certificate ? 1 : 0;
    rep.recoveries += o.recovered ? 1 : 0;
    rep.counterexamples += (o.certificate && o.recovered) ? 0 : 1;
    rep.max_leakage = std::max(rep.max_leakage, o.leakage);
  }
  return rep;
}

}  // namespace minext
