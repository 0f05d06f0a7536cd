#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "minext/lacunary.hpp"
#include "test_util.hpp"

using namespace minext;

namespace {
constexpr double kPi = std::numbers::pi;

LacunaryParams spec_point() {
  const double a = 10.0;
  const double rl = std::sqrt(std::log(a));
  return {1, 2.0 * a * rl + 1.0, 2.0 * rl / a + 0.01, a};
}
}  // namespace

TEST(Theta, ReferenceValues) {
  // Reference: 40-digit summation of the spatial series.
  EXPECT_NEAR(theta_kernel(0.0, 10.0), 10.0, 1e-12);
  EXPECT_NEAR(theta_kernel(0.3, 2.0), 0.64967295727167989068, 1e-14);
  EXPECT_NEAR(theta_kernel(0.1, 0.5), 1.0000056426384627533, 1e-14);
  EXPECT_NEAR(theta_kernel(0.25, 10.0), 2.9692569965648222489e-8, 1e-20);
}

TEST(Theta, PoissonSummationAgreement) {
  for (double a : {0.5, 2.0, 10.0}) {
    for (int i = 0; i <= 20; ++i) {
      const double t = -0.5 + 0.05 * i;
      EXPECT_NEAR(theta_spatial(t, a), theta_fourier(t, a), 1e-10) << a << " " << t;
    }
  }
}

TEST(Theta, PeriodicEvenDecreasing) {
  for (double a : {1.0, 3.0, 10.0}) {
    double prev = theta_kernel(0.0, a);
    for (int i = 1; i <= 50; ++i) {
      const double t = 0.01 * i;
      EXPECT_NEAR(theta_kernel(t + 1.0, a), theta_kernel(t, a), 1e-12);
      EXPECT_NEAR(theta_kernel(-t, a), theta_kernel(t, a), 1e-12);
      const double v = theta_kernel(t, a);
      EXPECT_LE(v, prev + 1e-15);
      prev = v;
    }
  }
}

TEST(Theta, ProductForm) {
  const std::vector<double> pt{0.1, 0.0};
  EXPECT_NEAR(theta_kernel(pt, 3.0), theta_kernel(0.1, 3.0, 2), 1e-12);
  EXPECT_THROW(theta_kernel(0.1, -1.0), std::invalid_argument);
}

TEST(MajorantChain, AdmissiblePointHolds) {
  const LacunaryParams p = spec_point();
  const BoundReport b = majorant_chain(p);
  EXPECT_TRUE(b.radius_admissible);
  EXPECT_TRUE(b.step_admissible);
  EXPECT_TRUE(b.chain_holds);
  // Closed-form values from direct evaluation.
  EXPECT_NEAR(b.tail, 1.1721149336246087e-12, 1e-24);
  EXPECT_NEAR(b.A_max, 0.0008891852128881788, 1e-16);
  EXPECT_NEAR(b.B_max, 0.9773272403109647, 1e-14);
  EXPECT_LE(b.tail, kPi / 800.0);
  EXPECT_LE(b.A_max, kPi / 400.0);
  EXPECT_LE(b.B_max, 1.0 - 2.0 * kPi / 400.0);
  EXPECT_LE(b.tail_exact, b.tail);
  EXPECT_LE(b.A_series, b.A_max);
}

TEST(MajorantChain, ScaleOutsideAdmissibleRangeThrows) {
  LacunaryParams p = spec_point();
  p.r = 0.1;  // 1/r = a
  EXPECT_THROW(majorant_chain(p), InadmissibleScale);
  p = spec_point();
  p.a = 9.0;
  EXPECT_THROW(majorant_chain(p), InadmissibleScale);
  p = spec_point();
  p.d = 9.5;
  EXPECT_THROW(majorant_chain(p), InadmissibleScale);
}

TEST(MajorantChain, SmallRadiusBreaksChain) {
  LacunaryParams p = spec_point();
  p.r = 0.15;
  const BoundReport b = majorant_chain(p);
  EXPECT_FALSE(b.radius_admissible);
  EXPECT_FALSE(b.chain_holds);
}

TEST(MajorantChain, HigherDimensionUsesFactorialConstant) {
  LacunaryParams p = spec_point();
  p.nu = 2;
  const BoundReport b = majorant_chain(p);
  EXPECT_DOUBLE_EQ(b.tail_constant, 2.0);
  EXPECT_NEAR(b.tail, 2.0 * 100.0 * std::exp(-kPi * 100.0 * p.r * p.r), 1e-20);
  p.nu = 3;
  EXPECT_DOUBLE_EQ(majorant_chain(p).tail_constant, 6.0);
}

TEST(MajorantChain, HoldingChainMeetsTargets) {
  Xoshiro256 rng(3);
  int holding = 0;
  for (int i = 0; i < 2000; ++i) {
    const double a = rng.uniform(10.0, 60.0);
    const double r = rng.uniform(1.0 / a + 1e-9, 0.49);
    const double d = rng.uniform(a + 1e-9, 6.0 * a);
    const BoundReport b = majorant_chain({1, d, r, a});
    if (!b.chain_holds) continue;
    ++holding;
    EXPECT_LE(b.tail, kPi / (8 * a * a));
    EXPECT_LE(b.A_max, kPi / (4 * a * a));
    EXPECT_LE(b.B_max, 1.0 - 2.0 * kPi / (4 * a * a));
  }
  EXPECT_GT(holding, 100);
}

TEST(ExactAB, Examples) {
  const ExactAB one = exact_AB({{0}}, 10.0, {1.0});
  EXPECT_EQ(one.max_A, 0.0);
  const ExactAB two = exact_AB({{0}, {30}}, 10.0, {1.0, 1.0});
  EXPECT_NEAR(two.A.at({0}).real(), gaussian(3.0), 1e-15);
  EXPECT_THROW(exact_AB({}, 10.0, {}), std::invalid_argument);
  EXPECT_THROW(exact_AB({{0}}, 10.0, {}), std::invalid_argument);
}

TEST(ExactAB, MajorantsDominate) {
  Xoshiro256 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(10.0, 25.0);
    const double d = std::ceil(a) + static_cast<double>(rng.uniform_index(static_cast<std::uint64_t>(3 * a)));
    const std::size_t count = 1 + rng.uniform_index(6);
    std::vector<LatticePoint> s;
    std::vector<Complex> eps;
    long long pos = 0;
    for (std::size_t k = 0; k < count; ++k) {
      s.push_back({pos});
      eps.push_back(rng.unit_phase());
      pos += static_cast<long long>(d) + static_cast<long long>(rng.uniform_index(20));
    }
    ASSERT_GE(euclidean_step(s), d);
    const ExactAB ex = exact_AB(s, a, eps);
    const BoundReport b = majorant_chain({1, d, 0.49, a});
    ASSERT_LE(ex.max_A, b.A_max) << a << " " << d;
    ASSERT_LE(ex.max_B, b.B_max) << a << " " << d;
  }
}

TEST(TheoremConditions, Examples) {
  EXPECT_TRUE(check_theorem_conditions(LacunaryParams::with_default_scale(1, 100, 0.25)).cond_38);
  EXPECT_FALSE(check_theorem_conditions(LacunaryParams::with_default_scale(1, 100, 0.2)).cond_38);
  EXPECT_TRUE(check_theorem_conditions(LacunaryParams::with_default_scale(1, 300, 0.05)).cond_37);
  EXPECT_FALSE(check_theorem_conditions(LacunaryParams::with_default_scale(1, 299, 0.05)).cond_37);
  // Side conditions: d >= 10 and r < 1/10.
  EXPECT_FALSE(check_theorem_conditions(LacunaryParams::with_default_scale(1, 9, 0.45)).cond_38);
  EXPECT_FALSE(check_theorem_conditions(LacunaryParams::with_default_scale(1, 1e6, 0.2)).cond_37);
}

TEST(TheoremConditions, BothReadingsOfTheStepCondition) {
  // nu = 1: the first reading is exactly r > (5/d) log d.
  for (double r : {0.1, 0.2, 0.2302, 0.2303, 0.3}) {
    const TheoremConditions c = check_theorem_conditions(LacunaryParams::with_default_scale(1, 100, r));
    EXPECT_EQ(c.cond_44, c.cond_38) << r;
  }
  // nu = 2, d = 100: 0.05 sqrt(2) log 200 = 0.3747, 0.05 sqrt(2 log 200) = 0.1628.
  const TheoremConditions c = check_theorem_conditions(LacunaryParams::with_default_scale(2, 100, 0.3));
  EXPECT_FALSE(c.cond_44);
  EXPECT_TRUE(c.cond_44_alt);
}

TEST(Band, SufficientSize) {
  EXPECT_EQ(sufficient_band_size(1024, 64), 327u);
  EXPECT_EQ(band_size_for_radius(1000, 0.1), 200u);
}

TEST(Band, SeparatedSupportsHaveTheStep) {
  Xoshiro256 rng(6);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 64 + rng.uniform_index(200);
    const std::size_t d = 1 + rng.uniform_index(20);
    const std::size_t count = 1 + rng.uniform_index(n / d);
    const SupportSet s = random_separated_support(n, d, count, rng);
    ASSERT_EQ(s.size(), count);
    ASSERT_GE(cyclic_step(s), d);
  }
  EXPECT_THROW(random_separated_support(10, 4, 3, rng), std::invalid_argument);
}

TEST(Band, FullBandAlwaysRecovers) {
  const BandRecoveryReport r = band_recovery_experiment(64, 8, 64, 10, 1);
  EXPECT_EQ(r.successes, 10u);
}

TEST(Band, SingleFrequencyFails) {
  const BandRecoveryReport r = band_recovery_experiment(64, 8, 1, 10, 1, {}, 3);
  EXPECT_EQ(r.successes, 0u);
}

TEST(FailureExample, FourPointClosedForm) {
  const SupportSet band(4, {0, 1});
  const FailureExample fe = construct_failure_example(band, 3);
  EXPECT_EQ(fe.kept, 3u);
  EXPECT_NEAR(l1_norm(fe.x), 1.5, 1e-12);
  EXPECT_NEAR(l1_norm(fe.competitor), 0.5, 1e-12);
  EXPECT_EQ(construct_failure_example(band, 1).kept, 3u);
  EXPECT_THROW(construct_failure_example(band, 4), std::invalid_argument);
  EXPECT_THROW(construct_failure_example(SupportSet::full(4), 1), std::invalid_argument);
  EXPECT_THROW(construct_failure_example(band, Spectrum::delta(4, 1), 1), std::invalid_argument);
}

TEST(FailureExample, CertifiesSolverFailure) {
  Xoshiro256 rng(9);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 16 + rng.uniform_index(100);
    const SupportSet band = SupportSet::interval(n, rng.uniform_index(n), 1 + rng.uniform_index(n - 1));
    const FailureExample fe = construct_failure_example(band, random_offband_spectrum(band, rng), 1);
    EXPECT_LT(l1_norm(fe.competitor), l1_norm(fe.x));
    const Spectrum xs = dft(fe.x), cs = dft(fe.competitor);
    for (std::size_t w : band) ASSERT_LE(std::abs(xs[w] - cs[w]), 1e-10);
    const RecoveryReport r = solve_minimal_extension(restrict_spectrum(xs, band), {}, &fe.x);
    EXPECT_LT(r.objective, l1_norm(fe.x) - 1e-9);
    EXPECT_FALSE(r.recovered.value());
  }
}
