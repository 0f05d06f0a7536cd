#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "minext/certificates.hpp"
#include "test_util.hpp"

using namespace minext;

TEST(Kernel, FullSetIsScaledDelta) {
  const IdempotentKernel k = make_kernel(SupportSet::full(12));
  EXPECT_NEAR(k(0).real(), 12.0, 1e-10);
  for (std::size_t t = 1; t < 12; ++t) EXPECT_NEAR(std::abs(k(t)), 0.0, 1e-10);
}

TEST(Kernel, SingleFrequencyIsConstant) {
  const IdempotentKernel k = make_kernel(SupportSet(7, {0}));
  for (std::size_t t = 0; t < 7; ++t) EXPECT_NEAR(std::abs(k(t) - 1.0), 0.0, 1e-12);
}

TEST(Kernel, MissingCharacter) {
  const IdempotentKernel k = make_kernel(SupportSet(5, {0, 1, 2, 3}));
  EXPECT_DOUBLE_EQ(k.peak(), 4.0);
  for (std::size_t t = 1; t < 5; ++t) {
    const double ang = 2.0 * std::numbers::pi * 4.0 * static_cast<double>(t) / 5.0;
    EXPECT_NEAR(std::abs(k(t) + Complex(std::cos(ang), std::sin(ang))), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(k(t)), 1.0, 1e-12);
  }
}

TEST(Kernel, EmptyOmegaThrows) {
  EXPECT_THROW(make_kernel(SupportSet::empty(5)), std::invalid_argument);
}

TEST(Kernel, FastMatchesDirectAndParsevalIdentity) {
  Xoshiro256 rng(1);
  for (std::size_t n : {5u, 16u, 31u, 64u, 101u, 256u}) {
    const SupportSet omega = random_subset(n, 1 + rng.uniform_index(n), rng);
    const IdempotentKernel a = make_kernel(omega), b = make_kernel_fast(omega);
    for (std::size_t t = 0; t < n; ++t) ASSERT_NEAR(std::abs(a(t) - b(t)), 0.0, 1e-10);
    EXPECT_NEAR(kernel_energy(a), static_cast<double>(n * omega.size()), 1e-8 * n);
  }
}

TEST(ConditionIv, Examples) {
  EXPECT_TRUE(check_condition_iv(make_kernel(SupportSet::full(9)), 9).holds);
  const ConditionCheck single = check_condition_iv(make_kernel(SupportSet(9, {0})), 1);
  EXPECT_FALSE(single.holds);
  EXPECT_NEAR(single.margin, -0.5, 1e-12);
  const IdempotentKernel k = make_kernel(SupportSet(5, {0, 1, 2, 3}));
  const ConditionCheck t1 = check_condition_iv(k, 1);
  EXPECT_TRUE(t1.holds);
  EXPECT_NEAR(t1.margin, 1.0, 1e-12);
  const ConditionCheck t2 = check_condition_iv(k, 2);
  EXPECT_FALSE(t2.holds);  // equality is a failure
  EXPECT_EQ(t2.margin, 0.0);
}

TEST(Certificate, Examples) {
  const IdempotentKernel k = make_kernel(SupportSet(5, {0, 1, 2, 3}));
  const SignPattern sp(SupportSet(5, {0}), {1.0});
  const DualCertificate p = build_certificate(sp, k);
  EXPECT_NEAR(std::abs(p.values()[0] - 1.0), 0.0, 1e-12);
  for (std::size_t t = 1; t < 5; ++t) EXPECT_NEAR(std::abs(p.values()[t]), 0.25, 1e-12);
  const CertificateCheck c = check_condition_2prime(p, sp);
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.worst_on_support, 0.0, 1e-12);
  EXPECT_NEAR(c.worst_off_support, 0.25, 1e-12);

  const SignPattern none(SupportSet::empty(5), {});
  const DualCertificate zero = build_certificate(none, k);
  for (const Complex& v : zero.values()) EXPECT_EQ(v, Complex(0.0));
  EXPECT_TRUE(check_condition_2prime(zero, none).holds);

  const DualCertificate flat = build_certificate(sp, make_kernel(SupportSet(5, {0})));
  const CertificateCheck cf = check_condition_2prime(flat, sp);
  EXPECT_FALSE(cf.holds);
  EXPECT_NEAR(cf.worst_off_support, 1.0, 1e-12);
}

TEST(SignPattern, RequiresUnitModulus) {
  EXPECT_THROW(SignPattern(SupportSet(4, {1}), {Complex(0.5, 0)}), std::invalid_argument);
  EXPECT_THROW(SignPattern(SupportSet(4, {1}), {}), std::invalid_argument);
  const SignPattern sp = SignPattern::of(Signal({0, Complex(0, -3), 0, 2}));
  EXPECT_EQ(sp.support(), SupportSet(4, {1, 3}));
  EXPECT_NEAR(std::abs(sp.lambdas()[0] - Complex(0, -1)), 0.0, 1e-15);
}

TEST(Certificate, SpectrumStaysInOmegaAndTranslates) {
  Xoshiro256 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 8 + rng.uniform_index(100);
    const IdempotentKernel k = make_kernel(random_subset(n, 1 + rng.uniform_index(n), rng));
    const SupportSet s = random_subset(n, 1 + rng.uniform_index(4), rng);
    std::vector<Complex> lam(s.size());
    for (auto& l : lam) l = rng.unit_phase();
    const DualCertificate p = build_certificate(SignPattern(s, lam), k);
    EXPECT_LE(certificate_leakage(p), 1e-9);

    const std::size_t shift = rng.uniform_index(n);
    const DualCertificate q = build_certificate(SignPattern(s.translated(shift), [&] {
      // Phases follow their points under translation.
      std::vector<Complex> moved(s.size());
      const SupportSet ts = s.translated(shift);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::size_t to = (s.members()[i] + shift) % n;
        const auto pos = std::lower_bound(ts.begin(), ts.end(), to) - ts.begin();
        moved[static_cast<std::size_t>(pos)] = lam[i];
      }
      return moved;
    }()), k);
    for (std::size_t t = 0; t < n; ++t) {
      ASSERT_NEAR(std::abs(q.values()[(t + shift) % n] - p.values()[t]), 0.0, 1e-10);
    }
  }
}

TEST(ParsevalBound, Formula) {
  EXPECT_NEAR(omega_parseval_lower_bound(5, 100), 10000.0 / 199.0, 1e-12);
  EXPECT_NEAR(omega_parseval_lower_bound(3, 100000000), 3.6e9 / 100000035.0, 1e-12);
  EXPECT_LT(36.0 - omega_parseval_lower_bound(3, 100000000), 1e-4);
}

TEST(Implication, CertifiedSetRecoversEveryTrial) {
  const IdempotentKernel k = make_kernel(SupportSet(5, {0, 1, 2, 3}));
  const ImplicationReport r = verify_implication_iv_to_recovery(k, 1, 100, 17);
  EXPECT_EQ(r.trials, 100u);
  EXPECT_EQ(r.recoveries, 100u);
  EXPECT_EQ(r.certificate_holds, 100u);
  EXPECT_EQ(r.counterexamples, 0u);
  EXPECT_THROW(verify_implication_iv_to_recovery(k, 2, 10, 1), std::invalid_argument);
}

TEST(Implication, FullSetRecovers) {
  const ImplicationReport r = verify_implication_iv_to_recovery(make_kernel(SupportSet::full(16)), 4, 25, 3);
  EXPECT_EQ(r.recoveries, 25u);
  EXPECT_EQ(r.counterexamples, 0u);
}

TEST(Implication, HoldingKernelsSatisfyParsevalBound) {
  Xoshiro256 rng(8);
  int holding = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 31;
    const std::size_t t = 1 + rng.uniform_index(2);
    const SupportSet omega = bernoulli_frequency_sample(0.85, n, rng);
    if (omega.empty()) continue;
    if (!check_condition_iv(make_kernel(omega), t).holds) continue;
    ++holding;
    EXPECT_GE(static_cast<double>(omega.size()), omega_parseval_lower_bound(t, n));
  }
  EXPECT_GT(holding, 0);
}
