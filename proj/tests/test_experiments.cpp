#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "minext/experiments.hpp"

using namespace minext;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.n = 64;
  c.t_sparsity = 2;
  c.tau = 0.5;
  c.trials = 50;
  c.master_seed = 9;
  c.threads = 2;
  return c;
}

}  // namespace

TEST(ExperimentConfig, Validation) {
  ExperimentConfig c = base_config();
  EXPECT_NO_THROW(c.validate());
  c.omega_size = 10;
  EXPECT_THROW(c.validate(), std::invalid_argument);  // both set
  c.tau.reset();
  EXPECT_NO_THROW(c.validate());
  c.omega_size.reset();
  EXPECT_THROW(c.validate(), std::invalid_argument);  // neither set
  c = base_config();
  c.n_phases = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = base_config();
  c.trials = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = base_config();
  c.tau = 1.2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_NEAR(base_config().phase_cos(), std::cos(std::numbers::pi / 8), 1e-15);
}

TEST(Thresholds, FormulasAndVacuity) {
  const Thresholds t = omega_thresholds(101, 3, 0.1, 1.0);
  const double l = std::log(101.0);
  EXPECT_NEAR(t.kernel_test, 4 * 1.1 * 10 * l, 1e-12);
  EXPECT_NEAR(t.crt_22, 22 * 1.1 * 3 * l, 1e-12);
  EXPECT_NEAR(t.crt_23, 23 * 1.1 * 3 * l, 1e-12);
  EXPECT_NEAR(t.crt_c, 23 * 2 * 3 * l, 1e-12);
  EXPECT_TRUE(t.vacuous);
  EXPECT_FALSE(omega_thresholds(1u << 20, 1, 0.1, 1.0).vacuous);
}

TEST(KernelTestBounds, ReferenceArithmetic) {
  // N = 101, T = 3, 8 sectors, tau N = 203.
  const KernelTestBounds b = kernel_test_failure_bounds(101, 3, 203.0 / 101.0, 8);
  EXPECT_NEAR(b.main / 28683340.312844686, 1.0, 1e-12);
  EXPECT_NEAR(b.sharpened / 8.455270698733631, 1.0, 1e-12);
}

TEST(McConditionIv, FullSamplingNeverFails) {
  ExperimentConfig c = base_config();
  c.tau = 1.0;
  const KernelTestReport r = mc_condition_iv_probability(c);
  EXPECT_EQ(r.mc.success_count, 0u);
  EXPECT_EQ(r.holding, c.trials);
  EXPECT_EQ(r.parseval_violations, 0u);
}

TEST(McConditionIv, RespectsBoundAndParseval) {
  for (double tau : {0.3, 0.6, 0.9}) {
    ExperimentConfig c = base_config();
    c.tau = tau;
    c.trials = 200;
    const KernelTestReport r = mc_condition_iv_probability(c);
    EXPECT_TRUE(r.mc.bound_satisfied.value());
    EXPECT_EQ(r.parseval_violations, 0u);
    EXPECT_DOUBLE_EQ(r.mc.empirical_p, static_cast<double>(r.mc.success_count) / 200.0);
  }
}

TEST(McConditionIv, DeterministicAcrossThreadCounts) {
  ExperimentConfig c = base_config();
  c.threads = 1;
  const KernelTestReport a = mc_condition_iv_probability(c);
  c.threads = 4;
  const KernelTestReport b = mc_condition_iv_probability(c);
  ASSERT_EQ(a.mc.records.size(), b.mc.records.size());
  for (std::size_t i = 0; i < a.mc.records.size(); ++i) {
    EXPECT_EQ(a.mc.records[i].seed, b.mc.records[i].seed);
    EXPECT_EQ(a.mc.records[i].omega_size, b.mc.records[i].omega_size);
    EXPECT_EQ(a.mc.records[i].success, b.mc.records[i].success);
  }
}

TEST(ExactConditionIv, EnumerationReference) {
  // Reference: independent enumeration of all frequency sets.
  EXPECT_NEAR(exact_condition_iv_probability(6, 2, 0.5), 0.109375, 1e-12);
  EXPECT_NEAR(exact_condition_iv_probability(6, 2, 0.8), 0.65536, 1e-12);
  EXPECT_NEAR(exact_condition_iv_probability(8, 2, 0.5), 0.03515625, 1e-12);
  EXPECT_NEAR(exact_condition_iv_probability(8, 2, 0.8), 0.50331648, 1e-12);
  EXPECT_NEAR(exact_condition_iv_probability(8, 2, 1.0), 1.0, 1e-12);
  EXPECT_THROW(exact_condition_iv_probability(21, 2, 0.5), InstanceTooLarge);
}

TEST(ExactConditionIv, AgreesWithMonteCarlo) {
  ExperimentConfig c;
  c.n = 8;
  c.t_sparsity = 2;
  c.tau = 0.8;
  c.trials = 4000;
  c.master_seed = 1;
  const KernelTestReport r = mc_condition_iv_probability(c);
  const double exact_fail = 1.0 - exact_condition_iv_probability(8, 2, 0.8);
  EXPECT_NEAR(r.mc.empirical_p, exact_fail, 4.0 * std::sqrt(exact_fail * (1 - exact_fail) / 4000));
}

TEST(Concentration, BinomialTailReference) {
  EXPECT_NEAR(binomial_two_sided_tail(100, 0.3, 10.0), 0.021385615482580982, 1e-12);
  EXPECT_EQ(binomial_two_sided_tail(100, 0.0, 1.0), 0.0);
}

TEST(Concentration, ZeroLambdaAndZeroTau) {
  const ConcentrationReport z = omega_concentration_check(0.3, 200, 500, 0.0, 1);
  EXPECT_GT(z.mc.empirical_p, 0.9);
  EXPECT_GE(z.mc.theoretical_bound.value(), 1.0);
  EXPECT_TRUE(z.mc.bound_satisfied.value());
  const ConcentrationReport e = omega_concentration_check(0.0, 200, 100, 1.0, 1);
  EXPECT_EQ(e.mc.success_count, 0u);
  EXPECT_TRUE(e.mc.bound_satisfied.value());
}

TEST(Concentration, LargeDeviationRespectsBound) {
  const double n = 1024.0;
  const double tau = 40.0 * std::log(n) / n;
  const ConcentrationReport r = omega_concentration_check(tau, 1024, 1000, 20.0, 5);
  EXPECT_LT(r.chernoff_u, 1.0);
  EXPECT_TRUE(r.mc.bound_satisfied.value());
  EXPECT_LE(r.exact_probability, r.mc.theoretical_bound.value());
}

TEST(Concentration, PrintedSquareRootScaleIsNotBoundedByTheFormula) {
  // With deviation lambda sqrt(log N) the exact binomial tail exceeds
  // 2 exp(-lambda^2 log^2 N / (4 N tau)) by orders of magnitude.
  const double n = 1024.0;
  const double tau = 40.0 * std::log(n) / n;
  const ConcentrationReport r =
      omega_concentration_check(tau, 1024, 10, 20.0, 5, DeviationScale::sqrt_log_n);
  EXPECT_GT(r.exact_probability, 100.0 * r.mc.theoretical_bound.value());
}

TEST(Concentration, RemovingTheLogBreaksTheBound) {
  // tau N = 2, lambda = 1.9: 2 N^{-lambda^2/(4 tau N)} is about 0.088 while
  // P(| |Omega| - 2 | > 1.9) is about 0.28.
  const ConcentrationReport r =
      omega_concentration_check(2.0 / 1024.0, 1024, 4000, 1.9, 11, DeviationScale::none);
  EXPECT_FALSE(r.mc.bound_satisfied.value());
  EXPECT_GT(r.exact_probability, r.mc.theoretical_bound.value());
}

TEST(McRecovery, FullAndTooFewFrequencies) {
  ExperimentConfig c;
  c.n = 32;
  c.t_sparsity = 3;
  c.omega_size = 32;
  c.trials = 20;
  c.master_seed = 3;
  EXPECT_EQ(mc_recovery_probability(c).mc.success_count, 20u);
  c.omega_size = 2;
  const RecoveryMcReport few = mc_recovery_probability(c);
  EXPECT_EQ(few.mc.success_count, 0u);
  EXPECT_FALSE(few.mc.theoretical_bound.has_value());
}

TEST(McRecovery, MonotoneInOmegaOnAverage) {
  ExperimentConfig c;
  c.n = 127;
  c.t_sparsity = 1;
  c.trials = 40;
  c.master_seed = 8;
  std::vector<double> p;
  for (std::size_t m : {1u, 2u, 4u, 8u, 16u, 32u}) {
    c.omega_size = m;
    p.push_back(mc_recovery_probability(c).mc.empirical_p);
  }
  // Isotonic trend: no drop larger than sampling noise, and overall rise.
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_GE(p[i], p[i - 1] - 0.15);
  EXPECT_GT(p.back(), p.front());
  EXPECT_DOUBLE_EQ(p.back(), 1.0);
}
