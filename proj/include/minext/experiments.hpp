#pragma once

// Seeded Monte Carlo estimates for random frequency sets: concentration of
// |Omega| under Bernoulli selection, the probability that the kernel test
// fails, and the probability of exact l1 recovery, each set against the
// corresponding closed-form bound or sample-size threshold.
//
// All logarithms are natural.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minext/certificates.hpp"
#include "minext/random.hpp"
#include "minext/solver.hpp"
#include "minext/trials.hpp"

namespace minext {

/// Identifies the per-trial seed derivation in reports.
inline constexpr const char* kSeedRule = "splitmix64:seed_i=mix64(master+(i+1)*0x9E3779B97F4A7C15)";

struct ExperimentConfig {
  std::size_t n = 0;
  std::size_t t_sparsity = 1;
  std::optional<double> tau;               // Bernoulli selection parameter
  std::optional<std::size_t> omega_size;   // or a uniform subset of fixed size
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  double m_exponent = 1.0;  // M in P(recovery) >= 1 - c N^-M
  double delta = 0.1;       // slack in the |Omega| thresholds
  int n_phases = 8;         // sectors used to bound |K(t)| by Re K(t) e^{-i phi}
  SolverConfig solver;
  unsigned threads = 0;

  void validate() const {
    if (n < 1) throw std::invalid_argument("ExperimentConfig: n >= 1");
    if (t_sparsity < 1 || t_sparsity > n) throw std::invalid_argument("ExperimentConfig: 1 <= T <= N");
    if (tau.has_value() == omega_size.has_value()) {
      throw std::invalid_argument("ExperimentConfig: set exactly one of tau and omega_size");
    }
    if (tau && !(*tau >= 0.0 && *tau <= 1.0)) throw std::invalid_argument("ExperimentConfig: tau in [0, 1]");
    if (omega_size && *omega_size > n) throw std::invalid_argument("ExperimentConfig: omega_size <= N");
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials >= 1");
    if (n_phases < 3) throw std::invalid_argument("ExperimentConfig: n_phases >= 3");
    if (!(delta > 0.0)) throw std::invalid_argument("ExperimentConfig: delta > 0");
    solver.validate();
  }

  /// cos(pi / n_phases).
  double phase_cos() const { return std::cos(std::numbers::pi / n_phases); }

  /// tau, or |Omega|/N in fixed-size mode.
  double effective_tau() const {
    return tau ? *tau : static_cast<double>(*omega_size) / static_cast<double>(n);
  }

  SupportSet sample_omega(Xoshiro256& rng) const {
    return tau ? bernoulli_frequency_sample(*tau, n, rng) : random_subset(n, *omega_size, rng);
  }
};

/// Sample-size thresholds for |Omega| and whether they exceed N.
struct Thresholds {
  double kernel_test = 0.0;  // 4 (1 + delta) (T^2 + 1) log N
  double crt_22 = 0.0;       // 22 (1 + delta) T log N
  double crt_23 = 0.0;       // 23 (1 + delta) T log N
  double crt_c = 0.0;        // C T log N with C = 23 (M + 1)
  bool vacuous = false;      // kernel_test and crt_22 both exceed N
};

inline Thresholds omega_thresholds(std::size_t n, std::size_t t, double delta, double m_exponent) {
  const double logn = std::log(static_cast<double>(n));
  const double td = static_cast<double>(t);
  Thresholds th;
  th.kernel_test = 4.0 * (1.0 + delta) * (td * td + 1.0) * logn;
  th.crt_22 = 22.0 * (1.0 + delta) * td * logn;
  th.crt_23 = 23.0 * (1.0 + delta) * td * logn;
  th.crt_c = 23.0 * (m_exponent + 1.0) * td * logn;
  th.vacuous = th.kernel_test > static_cast<double>(n) && th.crt_22 > static_cast<double>(n);
  return th;
}

struct McReport {
  std::string event;  // what success_count counts
  std::size_t success_count = 0;
  std::size_t trials = 0;
  double empirical_p = 0.0;
  double standard_error = 0.0;  // sqrt(p (1 - p) / trials)
  std::optional<double> theoretical_bound;
  std::optional<bool> bound_satisfied;  // empirical_p <= bound + 3 SE
  std::string per_trial_seeds = kSeedRule;
  std::vector<TrialRecord> records;

  void finish() {
    empirical_p = static_cast<double>(success_count) / static_cast<double>(trials);
    standard_error = std::sqrt(empirical_p * (1.0 - empirical_p) / static_cast<double>(trials));
    if (theoretical_bound) bound_satisfied = empirical_p <= *theoretical_bound + 3.0 * standard_error;
  }
};

// ---------------------------------------------------------------------------
// Concentration of |Omega|

/// Scale of the deviation in the concentration event |(|Omega| - tau N)| > dev.
enum class DeviationScale {
  log_n,       // dev = lambda log N; the Chernoff optimum u = lambda log N / (2 N tau) bounds this event
  sqrt_log_n,  // dev = lambda sqrt(log N) with the same bound, as the statement is printed
  none,        // dev = lambda, bound 2 N^{-lambda^2 / (4 N tau)}: log N removed
};

inline const char* to_string(DeviationScale s) {
  switch (s) {
    case DeviationScale::log_n: return "log";
    case DeviationScale::sqrt_log_n: return "sqrt-log";
    case DeviationScale::none: return "none";
  }
  return "?";
}

struct ConcentrationReport {
  McReport mc;
  DeviationScale scale = DeviationScale::log_n;
  double deviation = 0.0;
  double chernoff_u = 0.0;         // the bound's derivation needs u < 1
  double exact_probability = 0.0;  // binomial tail, summed exactly
};

/// P(|Bin(N, tau) - tau N| > dev), summed from the binomial pmf in log space.
inline double binomial_two_sided_tail(std::size_t n, double tau, double dev) {
  if (tau <= 0.0 || tau >= 1.0) return 0.0;  // |Omega| is deterministic
  const double mean = tau * static_cast<double>(n);
  const double nd = static_cast<double>(n);
  double p = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    if (std::abs(kd - mean) <= dev) continue;
    const double logp = std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1) +
                        kd * std::log(tau) + (nd - kd) * std::log1p(-tau);
    p += std::exp(logp);
  }
  return std::min(p, 1.0);
}

/// Empirical frequency of ||Omega| - tau N| > dev against
/// 2 exp(-lambda^2 log^2 N / (4 N tau)), or 2 N^{-lambda^2/(4 N tau)} for
/// DeviationScale::none.
inline ConcentrationReport omega_concentration_check(double tau, std::size_t n, std::size_t trials,
                                                     double lambda, std::uint64_t seed,
                                                     DeviationScale scale = DeviationScale::log_n,
                                                     unsigned threads = 0) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("omega_concentration_check: tau in [0, 1]");
  if (n < 2) throw std::invalid_argument("omega_concentration_check: N >= 2");
  if (trials < 1) throw std::invalid_argument("omega_concentration_check: trials >= 1");
  if (!(lambda >= 0.0)) throw std::invalid_argument("omega_concentration_check: lambda >= 0");
  const double logn = std::log(static_cast<double>(n));
  const double mean = tau * static_cast<double>(n);
  const bool no_log = scale == DeviationScale::none;

  ConcentrationReport rep;
  rep.scale = scale;
  switch (scale) {
    case DeviationScale::log_n: rep.deviation = lambda * logn; break;
    case DeviationScale::sqrt_log_n: rep.deviation = lambda * std::sqrt(logn); break;
    case DeviationScale::none: rep.deviation = lambda; break;
  }
  rep.mc.event = "omega_size_deviation_exceeds";
  rep.mc.trials = trials;
  if (mean > 0.0) {
    rep.chernoff_u = no_log ? lambda / (2.0 * mean) : lambda * logn / (2.0 * mean);
    rep.mc.theoretical_bound =
        no_log ? 2.0 * std::pow(static_cast<double>(n), -lambda * lambda / (4.0 * mean))
               : 2.0 * std::exp(-lambda * lambda * logn * logn / (4.0 * mean));
  } else {
    rep.mc.theoretical_bound = 0.0;  // |Omega| = 0 = tau N surely
  }
  rep.exact_probability = binomial_two_sided_tail(n, tau, rep.deviation);

  rep.mc.records = run_trials(
      trials,
      [&](std::size_t i) {
        TrialRecord rec;
        rec.index = i;
        rec.seed = trial_seed(seed, i);
        Xoshiro256 rng(rec.seed);
        rec.omega_size = bernoulli_frequency_sample(tau, n, rng).size();
        rec.success = std::abs(static_cast<double>(rec.omega_size) - mean) > rep.deviation;
        return rec;
      },
      threads);
  for (const auto& r : rep.mc.records) rep.mc.success_count += r.success ? 1 : 0;
  rep.mc.finish();
  return rep;
}

// ---------------------------------------------------------------------------
// Kernel test failure probability

struct KernelTestBounds {
  double main = 0.0;      // N nu exp[-tau N (a^2/(4T^2+2) - 2/T^3)]
  double sharpened = 0.0; // N nu exp[-tau N a^2/(4T^2+2)], cubic term dropped
};

inline KernelTestBounds kernel_test_failure_bounds(std::size_t n, std::size_t t, double tau,
                                                   int n_phases) {
  const double a = std::cos(std::numbers::pi / n_phases);
  const double td = static_cast<double>(t);
  const double tau_n = tau * static_cast<double>(n);
  const double lead = static_cast<double>(n) * static_cast<double>(n_phases);
  const double quad = a * a / (4.0 * td * td + 2.0);
  KernelTestBounds b;
  b.main = lead * std::exp(-tau_n * (quad - 2.0 / (td * td * td)));
  b.sharpened = lead * std::exp(-tau_n * quad);
  return b;
}

struct KernelTestReport {
  McReport mc;  // counts trials where the kernel test fails
  KernelTestBounds bounds;
  Thresholds thresholds;
  std::size_t holding = 0;
  std::size_t parseval_violations = 0;  // holding Omega with |Omega| below the Parseval bound
  double parseval_bound = 0.0;
  std::optional<bool> sharpened_satisfied;
};

inline KernelTestReport mc_condition_iv_probability(const ExperimentConfig& cfg) {
  cfg.validate();
  KernelTestReport rep;
  rep.bounds = kernel_test_failure_bounds(cfg.n, cfg.t_sparsity, cfg.effective_tau(), cfg.n_phases);
  rep.thresholds = omega_thresholds(cfg.n, cfg.t_sparsity, cfg.delta, cfg.m_exponent);
  rep.parseval_bound = omega_parseval_lower_bound(cfg.t_sparsity, cfg.n);
  rep.mc.event = "condition_iv_fails";
  rep.mc.trials = cfg.trials;
  rep.mc.theoretical_bound = rep.bounds.main;

  rep.mc.records = run_trials(
      cfg.trials,
      [&](std::size_t i) {
        TrialRecord rec;
        rec.index = i;
        rec.seed = trial_seed(cfg.master_seed, i);
        Xoshiro256 rng(rec.seed);
        const SupportSet omega = cfg.sample_omega(rng);
        rec.omega_size = omega.size();
        if (omega.empty()) {
          rec.success = true;  // K == 0 cannot satisfy a strict test
          return rec;
        }
        const ConditionCheck c = check_condition_iv(make_kernel_fast(omega), cfg.t_sparsity);
        rec.success = !c.holds;
        rec.objective = c.margin;
        return rec;
      },
      cfg.threads);
  for (const auto& r : rep.mc.records) {
    rep.mc.success_count += r.success ? 1 : 0;
    if (!r.success) {
      ++rep.holding;
      if (static_cast<double>(r.omega_size) < rep.parseval_bound) ++rep.parseval_violations;
    }
  }
  rep.mc.finish();
  rep.sharpened_satisfied = rep.mc.empirical_p <= rep.bounds.sharpened + 3.0 * rep.mc.standard_error;
  return rep;
}

/// Exact P(kernel test holds at T) under Bernoulli(tau) selection, by
/// enumerating all 2^N frequency sets. N <= 20.
inline double exact_condition_iv_probability(std::size_t n, std::size_t t, double tau) {
  if (n > 20) throw InstanceTooLarge("exact_condition_iv_probability: N > 20");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau in [0, 1]");
  double p = 0.0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    std::vector<std::size_t> m;
    for (std::size_t w = 0; w < n; ++w) {
      if (mask >> w & 1U) m.push_back(w);
    }
    const SupportSet omega(n, std::move(m));
    if (!check_condition_iv(make_kernel(omega), t).holds) continue;
    const double k = static_cast<double>(omega.size());
    p += std::pow(tau, k) * std::pow(1.0 - tau, static_cast<double>(n) - k);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Recovery probability

struct RecoveryMcReport {
  McReport mc;  // counts exact recoveries
  Thresholds thresholds;
  std::size_t nonconverged = 0;
  double mean_omega_size = 0.0;
};

/// Per trial: draw Omega, plant a T-sparse signal on a uniform support with
/// unit phases and magnitudes in [1/2, 1], and test exact l1 recovery.
/// The success probability has no computable bound (its constant depends on
/// the signal), so theoretical_bound stays empty.
inline RecoveryMcReport mc_recovery_probability(const ExperimentConfig& cfg) {
  cfg.validate();
  RecoveryMcReport rep;
  rep.thresholds = omega_thresholds(cfg.n, cfg.t_sparsity, cfg.delta, cfg.m_exponent);
  rep.mc.event = "exact_recovery";
  rep.mc.trials = cfg.trials;
  rep.mc.records = run_trials(
      cfg.trials,
      [&](std::size_t i) {
        TrialRecord rec;
        rec.index = i;
        rec.seed = trial_seed(cfg.master_seed, i);
        Xoshiro256 rng(rec.seed);
        const SupportSet omega = cfg.sample_omega(rng);
        const SupportSet s = random_subset(cfg.n, cfg.t_sparsity, rng);
        const Signal x = planted_signal(s, rng);
        rec.omega_size = omega.size();
        if (omega.empty()) {
          rec.success = false;
          rec.objective = 0.0;
          rec.residual = 0.0;
          return rec;
        }
        const RecoveryReport r = solve_minimal_extension(restrict_spectrum(dft(x), omega), cfg.solver, &x);
        rec.success = r.converged && r.recovered.value_or(false);
        rec.objective = r.objective;
        rec.residual = r.feasibility_residual;
        rec.converged = r.converged;
        return rec;
      },
      cfg.threads);
  double omega_sum = 0.0;
  for (const auto& r : rep.mc.records) {
    rep.mc.success_count += r.success ? 1 : 0;
    rep.nonconverged += r.converged ? 0 : 1;
    omega_sum += static_cast<double>(r.omega_size);
  }
  rep.mean_omega_size = omega_sum / static_cast<double>(cfg.trials);
  rep.mc.finish();
  return rep;
}

}  // namespace minext
