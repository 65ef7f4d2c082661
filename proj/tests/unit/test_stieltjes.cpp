#include <gtest/gtest.h>

#include <random>

#include "momentlab/distributions.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/stieltjes.hpp"
#include "oracles.hpp"

using namespace momentlab;
using namespace momentlab::stieltjes;

namespace {

using Q = BigRational;
using Span = std::span<const Q>;

std::vector<Q> lattice(long q, std::size_t n) { return distributions::lattice_lognormal_moments(q, 1, n).exact_values(); }

std::vector<Q> constant(std::size_t n, const Q& c) {
  std::vector<Q> v;
  for (std::size_t i = 0; i <= n; ++i) v.push_back(pow(c, i));
  return v;
}

std::vector<Q> bell(std::size_t n) { return distributions::poisson_moments(1, n).exact_values(); }

}  // namespace

TEST(HankelDet, Examples) {
  const auto ones = constant(8, 1);
  EXPECT_EQ(hankel_det(MomentSequence::exact(ones), {0, 1}), 0);
  for (std::size_t s = 1; s <= 3; ++s) EXPECT_EQ(hankel_det(MomentSequence::exact(constant(8, Q(7, 3))), {1, s}), 0);
  EXPECT_EQ(hankel_det(MomentSequence::exact(bell(6)), {0, 1}), 1);
  EXPECT_THROW(hankel_det(MomentSequence::exact(bell(3)), {0, 2}), InputError);
  PrecisionScope scope(128);
  EXPECT_THROW(hankel_det(MomentSequence::approximate({Real(1), Real(1), Real(2)}, 128), {0, 1}), BackendError);
}

TEST(HankelDet, MatchesCofactorOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Q> a;
    for (int i = 0; i < 12; ++i) a.push_back(oracle::random_rational(rng, -15, 15, 6));
    for (std::size_t shift = 0; shift <= 1; ++shift)
      for (std::size_t size = 0; size <= 4; ++size)
        EXPECT_EQ(hankel_det(Span(a), {shift, size}), oracle::cofactor_det(oracle::hankel(a, shift, size)));
  }
}

TEST(Verdict, Examples) {
  const auto l = lattice(2, 13);
  const auto v = stieltjes_verdict(Span(l), 6);
  EXPECT_EQ(v.kind, Definiteness::strictly_positive);
  EXPECT_EQ(v.requested_depth, 6u);
  EXPECT_EQ(v.depth_shift0, 6u);
  EXPECT_EQ(v.depth_shift1, 6u);

  const auto ones = constant(8, 1);
  const auto s = stieltjes_verdict(Span(ones), 3);
  EXPECT_EQ(s.kind, Definiteness::semi_definite);
  ASSERT_TRUE(s.witness);
  EXPECT_EQ(s.witness->query.size, 1u);
  EXPECT_EQ(s.witness->sign, 0);

  const std::vector<Q> bad{1, 2, 1, 1, 1};
  const auto n = stieltjes_verdict(Span(bad), 2);
  EXPECT_EQ(n.kind, Definiteness::not_stieltjes);
  ASSERT_TRUE(n.witness);
  EXPECT_EQ(n.witness->value, -3);
  EXPECT_EQ(n.witness->sign, -1);
}

TEST(Verdict, RealBackendAgreesOnClearCases) {
  PrecisionScope scope(128);
  const auto b = bell(10);
  std::vector<Real> r;
  for (const auto& x : b) r.push_back(to_real(x));
  EXPECT_EQ(stieltjes_verdict(std::span<const Real>(r), 3).kind, Definiteness::strictly_positive);
  // Delta_{4,1} = 288 is below 2^-40 of its Hadamard bound: unsigned at the default tolerance,
  // positive at a tighter one.
  const auto v = stieltjes_verdict(std::span<const Real>(r), 4);
  EXPECT_EQ(v.kind, Definiteness::semi_definite);
  EXPECT_EQ(v.witness->query, (HankelQuery{1, 4}));
  EXPECT_EQ(stieltjes_verdict(std::span<const Real>(r), 4, {std::ldexp(1.0, -80)}).kind, Definiteness::strictly_positive);
  // Determinants of q^{n^2} fall below the Hadamard-relative tolerance quickly; the real
  // backend then reports semi_definite rather than claiming a sign it cannot certify.
  const auto l = lattice(3, 10);
  std::vector<Real> lr;
  for (const auto& x : l) lr.push_back(to_real(x));
  EXPECT_NE(stieltjes_verdict(std::span<const Real>(lr), 5).kind, Definiteness::not_stieltjes);
  std::vector<Real> ones(9, Real(1));
  EXPECT_EQ(stieltjes_verdict(std::span<const Real>(ones), 4).kind, Definiteness::semi_definite);
}

TEST(Fekete, Examples) {
  for (long q : {2, 3}) {
    const auto l = lattice(q, 8);
    const auto f = fekete_total_positivity(Span(l), {0, 4});
    EXPECT_EQ(f.kind, TotalPositivity::strictly_tp);
    EXPECT_FALSE(f.witness);
    EXPECT_GT(f.minors_checked, 0u);
  }
  const auto c = constant(8, Q(5, 2));
  const auto fc = fekete_total_positivity(Span(c), {0, 4});
  EXPECT_EQ(fc.kind, TotalPositivity::semi_definite);
  ASSERT_TRUE(fc.witness);
  EXPECT_EQ(fc.witness->order, 2u);

  // a_1^2 > a_0 a_2
  const std::vector<Q> violator{1, 2, 3, 10, 100, 1000, 10000, 100000, 1000000};
  const auto fv = fekete_total_positivity(Span(violator), {0, 4});
  EXPECT_EQ(fv.kind, TotalPositivity::not_tp);
  ASSERT_TRUE(fv.witness);
  EXPECT_EQ(fv.witness->order, 2u);
  EXPECT_LT(fv.witness->value, 0);
}

// Consecutive minors of a Hankel matrix enumerated directly.
TEST(Fekete, MinorCountAndVerdictMatchBruteForce) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Q> a{1};
    Q x = 1;
    for (int i = 1; i <= 8; ++i) {
      x *= oracle::random_rational(rng, 1, 12, 3);
      a.push_back(x);
    }
    const std::size_t m = 3;
    const auto h = oracle::hankel(a, 0, m);
    std::size_t count = 0;
    int worst = 1;
    for (std::size_t order = 1; order <= m + 1; ++order)
      for (std::size_t r = 0; r + order <= m + 1; ++r)
        for (std::size_t c = 0; c + order <= m + 1; ++c) {
          std::vector<std::vector<Q>> sub(order, std::vector<Q>(order));
          for (std::size_t i = 0; i < order; ++i)
            for (std::size_t j = 0; j < order; ++j) sub[i][j] = h[r + i][c + j];
          worst = std::min(worst, sgn(oracle::cofactor_det(sub)));
          ++count;
        }
    const auto f = fekete_total_positivity(Span(a), {0, m});
    const auto expected = worst > 0 ? TotalPositivity::strictly_tp : worst == 0 ? TotalPositivity::semi_definite : TotalPositivity::not_tp;
    if (f.kind == TotalPositivity::strictly_tp) EXPECT_EQ(f.minors_checked, count);
    EXPECT_EQ(f.kind, expected);
    if (f.kind == TotalPositivity::strictly_tp) {
      EXPECT_EQ(stieltjes_verdict(Span(a), 3).kind, Definiteness::strictly_positive);
    }
  }
}

TEST(Indeterminacy, Examples) {
  const auto l = lattice(2, 12);
  const auto r = indeterminacy_ratios(Span(l), 5);
  EXPECT_EQ(r.depth, 5u);
  EXPECT_FALSE(r.shift0.degenerate);
  EXPECT_TRUE(r.shift0.appears_bounded_away);
  EXPECT_TRUE(r.shift1.appears_bounded_away);

  const auto c = constant(12, 2);
  const auto d = indeterminacy_ratios(Span(c), 5);
  EXPECT_TRUE(d.shift0.degenerate);

  const auto b = bell(12);
  const auto p = indeterminacy_ratios(Span(b), 5);
  EXPECT_FALSE(p.shift0.degenerate);
  for (const auto& v : p.shift0.values) {
    ASSERT_TRUE(v);
    EXPECT_GT(*v, 0);
  }
  EXPECT_THROW(indeterminacy_ratios(Span(b), 6), InputError);
}

TEST(C1, DepthOneByHand) {
  const std::vector<Q> a{1, Q(3, 2), Q(7, 2), Q(21, 2)};
  const auto c = c1_sequence(Span(a), 1);
  ASSERT_TRUE(c.values[0]);
  EXPECT_EQ(*c.values[0], a[2] * a[2] / a[3]);
}

TEST(C1, LatticeBelowMu1AndMonotone) {
  for (long q : {2, 3}) {
    const auto l = lattice(q, 11);
    const auto c = c1_sequence(Span(l), 5);
    EXPECT_FALSE(c.degenerate);
    EXPECT_TRUE(c.monotone_nondecreasing);
    EXPECT_TRUE(c.strictly_below_mu1);
    for (const auto& v : c.values) {
      ASSERT_TRUE(v);
      EXPECT_LT(*v, l[1]);
    }
  }
  const auto d = constant(11, 3);
  EXPECT_TRUE(c1_sequence(Span(d), 5).degenerate);
}

// The defining property: substituting c_{1,d} for a_1 zeroes the shift-1 determinant.
TEST(C1, ZeroesTheDeterminant) {
  const auto b = bell(11);
  const auto c = c1_sequence(Span(b), 5);
  for (std::size_t d = 1; d <= 5; ++d) {
    ASSERT_TRUE(c.values[d - 1]);
    auto a = b;
    a[1] = *c.values[d - 1];
    EXPECT_EQ(oracle::cofactor_det(oracle::hankel(a, 1, d)), 0) << d;
  }
}

TEST(LogConvexity, Examples) {
  PrecisionScope scope(128);
  const auto ln = distributions::lognormal_moments({0, Q(1, 2)}, 8, {128, 1e-20}).approx_values();
  const auto r = log_convexity_report(std::span<const Real>(ln));
  for (const auto& t : r.theta) EXPECT_LT(abs(t - exp(Real(-0.5))), Real(1e-30));

  const auto g = constant(8, Q(3, 5));
  const auto rg = log_convexity_report(Span(g));
  for (const auto& t : rg.theta) EXPECT_EQ(t, 1);
  EXPECT_EQ(rg.verdict, LogConvexity::log_convex);

  const auto l = lattice(3, 8);
  const auto rl = log_convexity_report(Span(l));
  for (const auto& t : rl.theta) EXPECT_EQ(t, Q(1, 9));
  EXPECT_EQ(rl.verdict, LogConvexity::strictly_log_convex);
  EXPECT_EQ(rl.theta_sup, Q(1, 9));
  EXPECT_EQ(rl.tail_to, 7u);

  const std::vector<Q> zero{1, 0, 1};
  EXPECT_THROW(log_convexity_report(Span(zero)), InputError);
}

TEST(LogConvexity, StieltjesPrefixesHaveThetaAtMostOne) {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    // moments of a random five-atom measure on (0, inf)
    std::vector<Q> a(9, 0);
    Q total = 0;
    for (int atom = 0; atom < 5; ++atom) {
      const Q x = oracle::random_rational(rng, 1, 20, 4), w = oracle::random_rational(rng, 1, 9, 1);
      for (std::size_t n = 0; n < a.size(); ++n) a[n] += w * pow(x, n);
      total += w;
    }
    for (auto& v : a) v /= total;
    if (stieltjes_verdict(Span(a), 3).kind != Definiteness::strictly_positive) continue;
    ++checked;
    for (const auto& t : log_convexity_report(Span(a)).theta) EXPECT_LE(t, 1);
  }
  EXPECT_GT(checked, 0);
}

TEST(C46, Examples) {
  const auto l = lattice(2, 8);
  const auto eq = c46_check(Span(l), Q(1, 4));
  EXPECT_EQ(eq.status, C46Status::holds);
  EXPECT_EQ(eq.equalities, eq.pairs_checked);

  const auto strict = c46_check(Span(l), Q(1));
  EXPECT_EQ(strict.status, C46Status::holds);
  EXPECT_EQ(strict.equalities, 0u);

  const auto tight = c46_check(Span(l), Q(1, 5));
  EXPECT_EQ(tight.status, C46Status::precondition_failed);
  ASSERT_TRUE(tight.precondition_index);

  const std::vector<Q> bad{1, 2, 1, 2, 1};
  EXPECT_EQ(c46_check(Span(bad), Q(1)).status, C46Status::precondition_failed);
}

TEST(C46, BruteForceRatiosOnRandomLogConvexInput) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 40; ++trial) {
    // Increasing successive ratios make the sequence log-convex.
    std::vector<Q> ratios;
    for (int i = 0; i < 8; ++i) ratios.push_back(oracle::random_rational(rng, 1, 30, 5));
    std::sort(ratios.begin(), ratios.end());
    std::vector<Q> a{1};
    for (const auto& r : ratios) a.push_back(a.back() * r);
    const auto report = log_convexity_report(Span(a));
    const Q theta = report.theta_sup;
    const auto c = c46_check(Span(a), theta);
    ASSERT_EQ(c.status, C46Status::holds);
    for (std::size_t n = 2; n < a.size(); ++n)
      for (std::size_t k = 1; k < n; ++k) EXPECT_LE(a[k] * a[n - k] / a[n], pow(theta, k * (n - k)));
  }
}
