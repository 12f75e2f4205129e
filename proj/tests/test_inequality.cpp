#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "optdesign/errors.hpp"
#include "optdesign/inequality.hpp"

using namespace optdesign;

namespace {

KktProblem random_problem(std::mt19937_64& rng, bool one_singleton, double max_ratio) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> theta(0.2, 3.0);
  std::uniform_real_distribution<double> ratio(1.05, max_ratio);
  const std::vector<double> ps = {0.5, 1.0, 2.0, 3.0};
  int m1 = count(rng);
  int m2 = count(rng);
  if (one_singleton) (rng() % 2 ? m1 : m2) = 1;
  const double t1 = theta(rng);
  return KktProblem::make(m1, m2, t1, t1 * ratio(rng), ps[rng() % ps.size()]);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

}  // namespace

TEST(Problem, Validation) {
  EXPECT_THROW(KktProblem::make(1, 1, 2.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(KktProblem::make(1, 1, 1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(KktProblem::make(0, 1, 1.0, 2.0, 1.0), DomainError);
  EXPECT_THROW(KktProblem::make(1, 1, 1.0, 2.0, 0.0), DomainError);
  EXPECT_THROW(KktProblem::make(1, 1, 1.0, 2.0, 1.0, 5.0), DomainError);  // xi^-p below f(target)
  const auto p = KktProblem::make(2, 3, 1.0, 2.0, 1.0);
  EXPECT_NEAR(std::pow(p.xi, -p.p), 2.0 * p.target_objective(), 1e-12);
  EXPECT_EQ(p.target(), (std::vector<double>{1, 1, 2, 2, 2}));
  EXPECT_DOUBLE_EQ(p.target_product(), 8.0);
}

TEST(Objective, PermutationInvariantBitForBit) {
  std::vector<double> x = {0.3, 1.7, 2.2, 0.9, 5.1};
  const double base = objective(x, 1.3);
  std::mt19937_64 rng(51);
  for (int i = 0; i < 50; ++i) {
    std::shuffle(x.begin(), x.end(), rng);
    ASSERT_EQ(objective(x, 1.3), base);
  }
  EXPECT_THROW(objective(std::vector<double>{1.0, 0.0}, 1.0), DomainError);
}

TEST(Constraints, TargetIsFeasible) {
  const auto p = KktProblem::make(2, 2, 1.0, 3.0, 2.0);
  const auto c = constraints(p, p.target());
  EXPECT_TRUE(c.feasible);
  EXPECT_NEAR(c.g, 0.0, 1e-12);
  EXPECT_EQ(c.m.size(), 2u);
  EXPECT_THROW(constraints(p, std::vector<double>{1, 2}), DomainError);
}

TEST(Main2, CounterexampleWithTwoOfEach) {
  // Same sum, larger sum of squares, same minimum, smaller product, yet a
  // smaller power sum: 1 + 25/16 + 25/61 < 3.
  const auto p = KktProblem::make(2, 2, 1.0, 2.0, 1.0);
  const std::vector<double> x = {1.0, 32.0 / 25.0, 32.0 / 25.0, 61.0 / 25.0};
  const auto v = theorem_main2_check(p, x);
  EXPECT_EQ(v.status, Main2Status::Violation);
  EXPECT_NEAR(v.gap(), -27.0 / 976.0, 1e-12);
}

TEST(Main2, ReverseDirectionAlsoFails) {
  // All hypotheses hold and the power sum goes up, so no inequality of the
  // form f(x) <= f(target) can hold either.
  const auto p = KktProblem::make(2, 1, 1.0, 2.0, 1.0);
  const std::vector<double> x = {0.9, 1.0, 2.1};
  const auto v = theorem_main2_check(p, x);
  EXPECT_EQ(v.status, Main2Status::Consistent);
  EXPECT_GT(v.gap(), 0.08);
}

TEST(Main2, ReportsFirstFailedHypothesis) {
  EXPECT_EQ(theorem_main2_check(KktProblem::make(2, 1, 1.0, 2.0, 1.0), std::vector<double>{1.2, 1.2, 1.6}).failed_condition,
            2);
  const auto p = KktProblem::make(1, 1, 1.0, 2.0, 1.0);
  EXPECT_EQ(theorem_main2_check(p, std::vector<double>{1.0, 2.5}).failed_condition, 1);
  EXPECT_EQ(theorem_main2_check(p, std::vector<double>{1.4, 1.6}).failed_condition, 2);
  EXPECT_EQ(theorem_main2_check(p, std::vector<double>{1.0, 2.0}).status, Main2Status::Consistent);
}

TEST(Sampler, DeterministicInSeed) {
  const auto p = KktProblem::make(2, 3, 1.0, 2.0, 1.0);
  const auto a = sample_feasible(p, 500, 7);
  const auto b = sample_feasible(p, 500, 7);
  const auto c = sample_feasible(p, 500, 8);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  ASSERT_EQ(a.size(), 500u);
  EXPECT_EQ(a.front(), p.target());
}

TEST(Sampler, PointsAreSortedAndFeasible) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(rng, false, 4.0);
    const auto stats = sample_feasible(p, 2000, rng(), [&](std::span<const double> x) {
      ASSERT_TRUE(std::is_sorted(x.begin(), x.end()));
      ASSERT_TRUE(constraints(p, x).feasible);
      ASSERT_NE(theorem_main2_check(p, x).status, Main2Status::Infeasible);
    });
    EXPECT_EQ(stats.accepted, 2000u);
    EXPECT_GT(stats.acceptance_rate(), 0.0);
  }
}

TEST(Sampler, NThreeGridCoversSlice) {
  const auto p = KktProblem::make(2, 1, 1.0, 2.0, 2.0);
  std::size_t n = 0;
  sample_feasible(p, 4000, 3, [&](std::span<const double> x) {
    ASSERT_EQ(x.size(), 3u);
    ++n;
  });
  EXPECT_EQ(n, 4000u);
}

TEST(Main2Property, HoldsWithASingletonGroup) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 12; ++trial) {
    const auto p = random_problem(rng, true, 2.0);
    const auto target = p.target();
    sample_feasible(p, 5000, rng(), [&](std::span<const double> x) {
      const auto v = theorem_main2_check(p, x);
      ASSERT_EQ(v.status, Main2Status::Consistent)
          << "m1=" << p.m1 << " m2=" << p.m2 << " theta=(" << p.theta1 << "," << p.theta2 << ") p=" << p.p
          << " gap=" << v.gap();
      if (std::abs(v.gap()) <= 1e-9) ASSERT_LE(max_abs_diff(x, target), 1e-6);
    });
  }
}

TEST(Kkt, CanonicalMultipliersCertifyTarget) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_problem(rng, false, 5.0);
    const auto pt = canonical_multipliers(p);
    EXPECT_GT(pt.lambda, 0.0);
    const auto res = kkt_residuals(p, pt, 1e-10);
    EXPECT_TRUE(res.pass) << res.problem << " residual " << res.max_residual;
  }
}

TEST(Kkt, CanonicalMultipliersByHand) {
  auto pt = canonical_multipliers(KktProblem::make(1, 1, 1.0, 2.0, 1.0));
  EXPECT_NEAR(pt.nu, 1.75, 1e-12);
  EXPECT_NEAR(pt.lambda, 0.375, 1e-12);
  pt = canonical_multipliers(KktProblem::make(1, 1, 1.0, 2.0, 2.0));
  EXPECT_NEAR(pt.nu, 3.75, 1e-12);
  EXPECT_NEAR(pt.lambda, 0.875, 1e-12);
}

TEST(Kkt, PerturbedMultipliersFail) {
  const auto p = KktProblem::make(2, 2, 1.0, 2.0, 1.0);
  auto pt = canonical_multipliers(p);
  pt.nu += 1e-3;
  EXPECT_FALSE(kkt_residuals(p, pt, 1e-10).pass);
  pt = canonical_multipliers(p);
  pt.rho = -1.0;
  EXPECT_FALSE(kkt_residuals(p, pt).pass);
}

TEST(Kkt, YRootsAreTheTwoValues) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_problem(rng, false, 5.0);
    const auto pt = canonical_multipliers(p);
    const auto roots = y_positive_roots(pt.nu, pt.lambda, pt.rho, pt.D, p.p);
    ASSERT_LE(roots.size(), 2u);
    ASSERT_EQ(roots.size(), 2u);
    EXPECT_NEAR(roots[0], p.theta1, 1e-9 * p.theta2);
    EXPECT_NEAR(roots[1], p.theta2, 1e-9 * p.theta2);
  }
}

TEST(Kkt, YRootsExamples) {
  const auto two = y_positive_roots(1.75, 0.375, 0.0, 2.0, 1.0);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_NEAR(two[0], 1.0, 1e-9);
  EXPECT_NEAR(two[1], 2.0, 1e-9);
  // lambda = 0: y is monotone with the single zero (p/nu)^(1/(p+1))
  const auto one = y_positive_roots(3.0, 0.0, 0.0, 1.0, 2.0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0], std::cbrt(2.0 / 3.0), 1e-9);
}

TEST(Kkt, YRootsNeverExceedTwo) {
  std::mt19937_64 rng(58);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  const std::vector<double> ps = {0.5, 1.0, 2.0};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto roots = y_positive_roots(u(rng), u(rng), u(rng) - 0.01, u(rng), ps[rng() % 3]);
    ASSERT_LE(roots.size(), 2u);
  }
}

TEST(Kkt, EndpointCounts) {
  const std::vector<double> e = {1, 1, 1.5, 2, 2, 2};
  const auto c = endpoint_counts(e);
  EXPECT_EQ(c.r, 2);
  EXPECT_EQ(c.s, 1);
  EXPECT_EQ(c.t, 3);
}

TEST(Mfcq, WitnessOnSampledPoints) {
  std::mt19937_64 rng(56);
  std::size_t checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(rng, false, 4.0);
    sample_feasible(p, 100, rng(), [&](std::span<const double> x) {
      const auto m = mfcq_witness(p, x);
      ASSERT_TRUE(m.verified);
      ASSERT_EQ(m.grad_g_dot, 0.0);
      for (const auto& [name, dot] : m.active) ASSERT_LT(dot, 0.0) << name;
      ++checked;
    });
  }
  EXPECT_EQ(checked, 1000u);
}

TEST(Mfcq, HandComputedWitness) {
  const auto p = KktProblem::make(1, 2, 1.0, 2.0, 1.0);
  const auto m = mfcq_witness(p, std::vector<double>{1.0, 2.0, 2.0});
  EXPECT_EQ(m.witness.w, (std::vector<double>{-3.0, 1.0, 2.0}));
  EXPECT_EQ(m.grad_g_dot, 0.0);
  std::map<std::string, double> dots(m.active.begin(), m.active.end());
  EXPECT_DOUBLE_EQ(dots.at("h"), -6.0);
  EXPECT_DOUBLE_EQ(dots.at("k"), -6.0);
  EXPECT_DOUBLE_EQ(dots.at("l1"), -3.0);
  EXPECT_DOUBLE_EQ(dots.at("n2"), -1.0);
  EXPECT_TRUE(m.verified);
}

TEST(Mfcq, RejectsConstantPoint) {
  const auto p = KktProblem::make(1, 1, 1.0, 2.0, 1.0);
  EXPECT_THROW(mfcq_witness(p, std::vector<double>{1.5, 1.5}), DomainError);
}

TEST(Lemma2Eq, SolutionsSatisfyBothMoments) {
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  int found = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 4);
    const int n = 1 + static_cast<int>(rng() % 4);
    const int s = 1 + static_cast<int>(rng() % static_cast<unsigned>(m + n - 1));
    const int t = m + n - s;
    const double a1 = u(rng);
    const double a2 = a1 + u(rng);
    const auto sols = lemma_2eq_solve(m, n, s, t, a1, a2);
    if (s != m) EXPECT_TRUE(sols.empty()) << m << " " << n << " " << s << " " << t;
    for (const auto& [x, y] : sols) {
      ++found;
      EXPECT_GT(x, 0.0);
      EXPECT_LE(x, a1);
      EXPECT_GE(y, a2);
      EXPECT_NEAR(s * x + t * y, m * a1 + n * a2, 1e-9 * (m * a1 + n * a2));
      EXPECT_NEAR(s * x * x + t * y * y, m * a1 * a1 + n * a2 * a2, 1e-8 * (m * a1 * a1 + n * a2 * a2));
    }
  }
  EXPECT_GT(found, 0);
  const auto same = lemma_2eq_solve(2, 3, 2, 3, 1.0, 2.0);
  ASSERT_FALSE(same.empty());
  EXPECT_NEAR(same.front().first, 1.0, 1e-9);
  EXPECT_TRUE(lemma_2eq_solve(2, 1, 1, 2, 1.0, 2.0).empty());  // 3y^2 - 8y + 5 = 0 has no root >= 2
  EXPECT_THROW(lemma_2eq_solve(2, 2, 1, 2, 1.0, 2.0), DomainError);
}

TEST(Phi, ParseAndShape) {
  EXPECT_TRUE(PhiFunction::parse("square").convex());
  EXPECT_TRUE(PhiFunction::parse("log").concave());
  EXPECT_TRUE(PhiFunction::parse("log").derivative_convex());
  EXPECT_FALSE(PhiFunction::parse("neg-log").concave());
  const auto inv = PhiFunction::parse("power(-2)");
  EXPECT_EQ(inv.kind, PhiFunction::Kind::InversePower);
  EXPECT_DOUBLE_EQ(inv(2.0), 0.25);
  EXPECT_THROW(PhiFunction::parse("sine"), std::invalid_argument);
}

TEST(Bennet, VariantOneConvex) {
  const std::vector<double> w = {0.5, 0.5};
  const std::vector<double> a = {1.0, 2.0};
  const std::vector<double> d = {0.5, 2.5};
  EXPECT_EQ(bennet_check(1, w, w, a, d, PhiFunction::parse("square")), BennetVerdict::Holds);
  EXPECT_EQ(bennet_check(1, w, w, a, d, PhiFunction::parse("exp")), BennetVerdict::Holds);
  EXPECT_EQ(bennet_check(1, w, w, a, d, PhiFunction::parse("log")), BennetVerdict::NotApplicable);
  // unequal first moments
  EXPECT_EQ(bennet_check(1, w, w, a, std::vector<double>{0.5, 3.0}, PhiFunction::parse("square")),
            BennetVerdict::NotApplicable);
}

TEST(Bennet, SquareWithEqualWeights) {
  const std::vector<double> w = {1.0, 1.0};
  const std::vector<double> a = {1.0, 3.0};
  const std::vector<double> d = {0.0, 4.0};
  EXPECT_EQ(bennet_check(1, w, w, a, d, PhiFunction::parse("square")), BennetVerdict::Holds);
  EXPECT_EQ(bennet_check(1, w, w, a, std::vector<double>{1.5, 2.5}, PhiFunction::parse("square")),
            BennetVerdict::NotApplicable);
}

TEST(Bennet, VariantTwoLog) {
  const std::vector<double> alpha = {0.5, 0.5};
  const std::vector<double> delta = {0.6, 0.4};
  const std::vector<double> a = {1.0, 3.0};
  const std::vector<double> d = {1.2, 3.2};
  const auto v = bennet_check(2, alpha, delta, a, d, PhiFunction::parse("log"));
  const bool direct = 0.5 * std::log(3.0) <= 0.6 * std::log(1.2) + 0.4 * std::log(3.2);
  EXPECT_EQ(v, direct ? BennetVerdict::Holds : BennetVerdict::Fails);
  EXPECT_EQ(bennet_check(2, alpha, delta, a, d, PhiFunction::parse("square")), BennetVerdict::NotApplicable);
}
