#include <gtest/gtest.h>

#include <cmath>

#include "minext/fourier.hpp"
#include "minext/solver.hpp"
#include "test_util.hpp"

using namespace minext;

namespace {

double max_sample_error(const RecoveryReport& r, const Samples& s) {
  const Spectrum got = dft(r.minimizer);
  double m = 0.0;
  for (std::size_t k = 0; k < s.omega.size(); ++k) {
    m = std::max(m, std::abs(got[s.omega.members()[k]] - s.values[k]));
  }
  return m;
}

}  // namespace

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.relaxation = 2.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.max_iter = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.eps_feasibility = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Samples, FromMapAndValidation) {
  const Samples s = Samples::from_map(8, {{5, 1.0}, {1, Complex(0, 2)}});
  EXPECT_EQ(s.omega, SupportSet(8, {1, 5}));
  EXPECT_EQ(s.values[0], Complex(0, 2));
  EXPECT_THROW(Samples(SupportSet(4, {0}), {}), std::invalid_argument);
}

TEST(MinimalExtension, FullOmegaReturnsSignal) {
  Xoshiro256 rng(1);
  const Signal x = testutil::random_signal(12, rng);
  const RecoveryReport r =
      minimal_extension_recover(restrict_spectrum(dft(x), SupportSet::full(12)), {}, x);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(max_abs_diff(r.minimizer, x), 1e-9);
  EXPECT_TRUE(r.recovered.value());
}

TEST(MinimalExtension, SingleSpikeFromFourFrequencies) {
  const Signal x = Signal::delta(5, 2);
  const RecoveryReport r =
      minimal_extension_recover(restrict_spectrum(dft(x), SupportSet(5, {0, 1, 2, 3})), {}, x);
  EXPECT_LE(max_abs_diff(r.minimizer, x), 1e-6);
  EXPECT_TRUE(r.recovered.value());
}

TEST(MinimalExtension, CombIsNotRecovered) {
  const Signal x({1, 0, 1, 0});
  const Samples s = restrict_spectrum(dft(x), SupportSet(4, {0, 2}));
  const RecoveryReport r = minimal_extension_recover(s, {}, x);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.objective, 2.0, 1e-6);
  EXPECT_FALSE(r.recovered.value());
}

TEST(MinimalExtension, ComplexInstanceMatchesConicSolver) {
  // Reference objective from an independent second-order cone solver.
  std::vector<Complex> v(16, Complex{});
  v[2] = Complex(1, 1);
  v[9] = Complex(0, -0.5);
  v[12] = 0.8;
  const Signal x(std::move(v));
  const SupportSet omega(16, {0, 1, 2, 3, 5, 8, 11, 13});
  const RecoveryReport r = minimal_extension_recover(restrict_spectrum(dft(x), omega), {}, x);
  EXPECT_NEAR(r.objective, 2.714213562373095, 1e-6);
  EXPECT_TRUE(r.recovered.value());
}

TEST(MinimalExtension, ObjectiveEqualsL1OfMinimizer) {
  Xoshiro256 rng(21);
  const Signal x = testutil::random_sparse_signal(40, 6, rng);
  const RecoveryReport r = solve_minimal_extension(restrict_spectrum(dft(x), random_subset(40, 18, rng)));
  EXPECT_DOUBLE_EQ(r.objective, l1_norm(r.minimizer));
}

TEST(MinimalExtension, Errors) {
  EXPECT_THROW(minimal_extension_recover(Samples(SupportSet::empty(4), {})), EmptyConstraint);
  Xoshiro256 rng(2);
  const Signal x = testutil::random_sparse_signal(64, 10, rng);
  SolverConfig tight;
  tight.max_iter = 1;
  const Samples s = restrict_spectrum(dft(x), random_subset(64, 20, rng));
  try {
    (void)minimal_extension_recover(s, tight);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.iterations(), 1);
    EXPECT_GT(e.residual(), 0.0);
  }
  const RecoveryReport r = solve_minimal_extension(s, tight);
  EXPECT_FALSE(r.converged);
}

TEST(MinimalExtension, FeasibilityAndMinimalityProperties) {
  Xoshiro256 rng(77);
  const SolverConfig cfg;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 8 + rng.uniform_index(60);
    const std::size_t k = 1 + rng.uniform_index(n / 4);
    const Signal x = testutil::random_sparse_signal(n, k, rng);
    const SupportSet omega = random_subset(n, 1 + rng.uniform_index(n), rng);
    const Samples s = restrict_spectrum(dft(x), omega);
    const RecoveryReport r = solve_minimal_extension(s, cfg, &x);
    if (!r.converged) continue;
    EXPECT_LE(r.feasibility_residual, cfg.eps_feasibility);
    EXPECT_LE(max_sample_error(r, s), 10 * cfg.eps_feasibility);
    // x itself is feasible, so it bounds the minimum.
    EXPECT_LE(r.objective, l1_norm(x) + 1e-6);
  }
}

TEST(InjectiveOnSupport, DetectsRankDeficiency) {
  EXPECT_FALSE(injective_on_support(SupportSet(4, {0, 2}), SupportSet(4, {0, 2})));
  EXPECT_TRUE(injective_on_support(SupportSet(4, {0, 1}), SupportSet(4, {0, 2})));
  EXPECT_FALSE(injective_on_support(SupportSet(9, {0}), SupportSet(9, {0, 1})));
  EXPECT_TRUE(injective_on_support(SupportSet(9, {0}), SupportSet::empty(9)));
}

TEST(MixedDecomposition, ZeroSignal) {
  const MixedDecomposition d = dh_decompose_l1(Signal::zeros(8));
  EXPECT_NEAR(d.objective, 0.0, 1e-12);
  EXPECT_LE(linf_norm(d.y.values()), 1e-12);
  EXPECT_LE(linf_norm(d.z.values()), 1e-12);
}

TEST(MixedDecomposition, SpikeStaysInTimePart) {
  const Signal x = Signal::delta(16, 0);
  const MixedDecomposition d = dh_decompose_l1(x);
  EXPECT_LE(max_abs_diff(d.y, x), 1e-6);
  EXPECT_LE(linf_norm(d.z.values()), 1e-6);
  EXPECT_NEAR(d.objective, 1.0, 1e-6);
}

TEST(MixedDecomposition, SeparatesSpikeFromExponential) {
  const std::size_t n = 64;
  const Signal spike = Signal::delta(n, 10);
  const Signal wave = idft(Spectrum::delta(n, 5));
  const MixedDecomposition d = dh_decompose_l1(spike + wave);
  EXPECT_LE(max_abs_diff(d.y, spike), 1e-6);
  EXPECT_LE(max_abs_diff(d.z, wave), 1e-6);
  EXPECT_NEAR(d.objective, 2.0, 1e-6);
  EXPECT_LE(max_abs_diff(d.y + d.z, spike + wave), 1e-8);
}
