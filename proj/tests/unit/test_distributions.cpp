#include <gtest/gtest.h>

#include <boost/math/constants/constants.hpp>

#include "momentlab/distributions.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/quadrature.hpp"
#include "momentlab/stieltjes.hpp"

using namespace momentlab;
using namespace momentlab::distributions;

namespace {

using Q = BigRational;

const Precision p128{128, 1e-25};

Real pi() { return boost::math::constants::pi<Real>(); }

Real rel(const Real& a, const Real& b) { return abs(a / b - 1); }

Real dec(long num, long den) { return to_real(Q(num, den)); }

}  // namespace

TEST(Psi, ClosedFormRelations) {
  PrecisionScope scope(128);
  EXPECT_LT(abs(psi(Real(0)) - sqrt(pi() / 2)), Real(1e-35));
  for (double x : {-3.0, -0.5, 0.7, 2.5}) {
    EXPECT_LT(abs(psi(Real(x)) + psi(Real(-x)) - sqrt(2 * pi())), Real(1e-35));
    EXPECT_LT(abs(normal_cdf(Real(x)) - (1 - psi(Real(x)) / sqrt(2 * pi()))), Real(1e-35));
  }
  EXPECT_LT(abs(psi(Q(-7, 5), p128) - psi(dec(-7, 5))), Real(1e-35));
}

TEST(Lognormal, ClosedFormAndQuadrature) {
  PrecisionScope scope(128);
  const auto m = lognormal_moments({0, 1}, 6, p128).approx_values();
  for (int n = 0; n <= 6; ++n) EXPECT_LT(rel(m[n], exp(Real(n * n) / 2)), Real(1e-35));
  const auto q = log_space_moments({0, 1}, std::nullopt, std::nullopt, 6, p128);
  for (int n = 0; n <= 6; ++n) {
    EXPECT_LT(abs(q.values[n] - m[n]), Real(1e-25) * (1 + m[n]));
    EXPECT_LE(q.abs_errors[n], Real(1e-25) * (1 + m[n]));
  }
  const auto small = lognormal_moments({0, Q(1, 1000000)}, 4, p128).approx_values();
  for (const auto& v : small) EXPECT_LT(abs(v - 1), Real(1e-4));
  const auto shifted = lognormal_moments({Q(1, 3), Q(1, 2)}, 5, p128).approx_values();
  for (int n = 0; n <= 5; ++n) EXPECT_LT(rel(shifted[n], exp(Real(n) / 3 + Real(n * n) / 4)), Real(1e-35));
  EXPECT_THROW(lognormal_moments({0, 0}, 3, p128), InputError);
}

TEST(Lattice, ExactValues) {
  EXPECT_EQ(lattice_lognormal_moments(2, 1, 4).exact_values(), (std::vector<Q>{1, 2, 16, 512, 65536}));
  const auto m = lattice_lognormal_moments(3, Q(2, 5), 6).exact_values();
  for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(m[n], pow(Q(2, 5), n) * pow(Q(3), n * n));
  const auto r = stieltjes::log_convexity_report(std::span<const Q>(m));
  for (const auto& t : r.theta) EXPECT_EQ(t, Q(1, 9));
  EXPECT_THROW(lattice_lognormal_moments(1, 1, 3), InputError);
  EXPECT_THROW(lattice_lognormal_moments(2, 0, 3), InputError);
}

TEST(Truncated, PsiCrossCheckAndConvergence) {
  PrecisionScope scope(128);
  const auto r = truncated_lognormal_moments({0, 1}, CensorSpec::left_truncate(Q(-7, 5)), 6, p128);
  const auto m = r.moments.approx_values();
  EXPECT_EQ(m[0], 1);
  for (int n = 0; n <= 6; ++n) {
    EXPECT_LT(abs(r.psi_form_difference[n]), Real(1e-24) * (1 + abs(r.psi_form[n])));
    EXPECT_LT(abs(r.quadrature[n] - r.psi_form[n]), r.abs_errors[n] + Real(1e-30) * (1 + r.psi_form[n]));
  }
  EXPECT_LT(abs(r.moved_mass - normal_cdf(dec(-7, 5))), Real(1e-30));
  // m_1 by hand: e^{1/2} Psi(-2.4) / sqrt(2 pi)
  EXPECT_LT(abs(m[1] - exp(Real(0.5)) * psi(dec(-12, 5)) / sqrt(2 * pi())), Real(1e-24));
  // the ratio form differs at finite b
  EXPECT_GT(abs(r.psi_ratio_form_difference[1]), Real(1e-3));

  const auto full = lognormal_moments({0, 1}, 6, p128).approx_values();
  Real previous_gap = 1;
  Real previous_theta = 1;
  for (const Q logb : {Q(-1), Q(-3), Q(-5), Q(-8)}) {
    const auto t = truncated_lognormal_moments({0, 1}, CensorSpec::left_truncate(logb), 6, {192, 1e-35});
    const auto v = t.moments.approx_values();
    Real gap = 0;
    for (int n = 1; n <= 6; ++n) {
      EXPECT_LE(v[n], full[n]);
      const Real d = abs(v[n] / full[n] - 1);
      if (d > gap) gap = d;
    }
    EXPECT_LT(gap, previous_gap);
    previous_gap = gap;
    const auto report = stieltjes::log_convexity_report(std::span<const Real>(v));
    const Real off = abs(report.theta[0] - exp(Real(-1)));
    EXPECT_LT(off, previous_theta);
    previous_theta = off;
  }
  EXPECT_LT(previous_theta, Real(1e-3));
}

TEST(Gap, CdfOracleAndMonotonicity) {
  PrecisionScope scope(128);
  const auto g = gap_censored_lognormal_moments({0, 1}, 1, 2, 6, p128);
  const Real cdf = normal_cdf(log(Real(2))) - normal_cdf(Real(0));
  EXPECT_LT(abs(g.removed[0] - cdf), Real(1e-24));
  EXPECT_LT(abs(g.removed_mass_cdf - cdf), Real(1e-35));
  // integral_1^2 y dmu = e^{1/2} (Phi(log 2 - 1) - Phi(-1))
  EXPECT_LT(abs(g.removed[1] - exp(Real(0.5)) * (normal_cdf(log(Real(2)) - 1) - normal_cdf(Real(-1)))), Real(1e-24));
  const auto full = lognormal_moments({0, 1}, 6, p128).approx_values();
  const auto v = g.moments.approx_values();
  EXPECT_EQ(v[0], 1);
  for (int n = 1; n <= 6; ++n) {
    EXPECT_LT(v[n], full[n]);
    EXPECT_LT(abs(v[n] - (full[n] - g.removed[n])), Real(1e-30) * full[n]);
  }
  const auto narrow = gap_censored_lognormal_moments({0, 1}, 1, Q(1000001, 1000000), 4, p128).moments.approx_values();
  for (int n = 1; n <= 4; ++n) EXPECT_LT(rel(narrow[n], full[n]), Real(1e-6));
  EXPECT_THROW(gap_censored_lognormal_moments({0, 1}, 2, 1, 3, p128), InputError);
  EXPECT_THROW(gap_censored_lognormal_moments({0, 1}, 0, 1, 3, p128), InputError);
}

TEST(Leipnik, SameMomentsAsLognormal) {
  PrecisionScope scope(128);
  for (const Q s2 : {Q(1, 2), Q(1), Q(2)}) {
    const auto r = leipnik_discrete_moments(s2, 0, 6, p128);
    const auto ln = lognormal_moments({0, s2}, 6, p128).approx_values();
    const auto v = r.moments.approx_values();
    for (int n = 0; n <= 6; ++n) EXPECT_LT(rel(v[n], ln[n]), Real(1e-20)) << n;
    Real sum = 0;
    for (const auto& w : r.weights) sum += w;
    EXPECT_LT(abs(sum - 1), Real(1e-35));
    EXPECT_EQ(r.points.size(), 2 * r.n_cut + 1);
  }
}

TEST(Leipnik, ShiftAndOffset) {
  PrecisionScope scope(128);
  const auto base = leipnik_discrete_moments(1, 0, 5, p128).moments.approx_values();
  const auto shifted = leipnik_discrete_moments(1, Q(1, 2), 5, p128).moments.approx_values();
  for (int n = 0; n <= 5; ++n) EXPECT_LT(rel(shifted[n], base[n] * exp(Real(n) / 2)), Real(1e-30));
  const auto offset = leipnik_discrete_moments(1, 0, 5, p128, Q(3, 2)).moments.approx_values();
  for (int n = 0; n <= 5; ++n) EXPECT_LT(rel(offset[n], base[n]), Real(1e-20));
  EXPECT_THROW(leipnik_discrete_moments(0, 0, 3, p128), InputError);
}

TEST(MixedPoisson, MatchesDirectIntegration) {
  PrecisionScope scope(128);
  MixedPoissonSpec s;
  s.log_b = Q(-7, 5);
  s.N = 10;
  const auto pmf = mixed_poisson_pmf(s, 12, p128);
  const Real c = 1 / sqrt(2 * pi());
  for (unsigned k = 0; k <= 12; ++k) {
    Real kfact = 1;
    for (unsigned i = 2; i <= k; ++i) kfact *= i;
    const auto direct = quadrature::tanh_sinh(
        [&](const Real& x) {
          const Real lambda = 10 * exp(x);
          return exp(-lambda) * pow(lambda, k) / kfact * c * exp(-x * x / 2);
        },
        dec(-7, 5), Real(12), Real(1e-28));
    Real expected = direct.value;
    if (k == 0) expected += normal_cdf(dec(-7, 5));
    EXPECT_LT(abs(pmf.masses[k] - expected), Real(1e-24)) << k;
    EXPECT_LE(pmf.abs_errors[k], Real(1e-24));
  }
  EXPECT_TRUE(pmf.tail_flag);
  Real total = pmf.tail_mass;
  for (const auto& m : pmf.masses) total += m;
  EXPECT_LT(abs(total - 1), Real(1e-22));
}

TEST(MixedPoisson, UntruncatedSumsToOne) {
  PrecisionScope scope(128);
  MixedPoissonSpec s;
  s.N = 1;
  const auto pmf = mixed_poisson_pmf(s, 60, p128);
  Real total = 0;
  for (const auto& m : pmf.masses) total += m;
  // P[K > 60] is about 2.4e-5: the intensity e^X has a heavy right tail.
  EXPECT_LT(abs(total + pmf.tail_mass - 1), Real(1e-22));
  EXPECT_GT(pmf.tail_mass, Real(1e-6));
  EXPECT_LT(pmf.tail_mass, Real(1e-4));
  EXPECT_TRUE(pmf.tail_flag);
  const auto longer = mixed_poisson_pmf(s, 400, p128);
  EXPECT_LT(longer.tail_mass, pmf.tail_mass / 1000);
  EXPECT_LT(abs(longer.masses[60] - pmf.masses[60]), Real(1e-24));
}

TEST(Poisson, PmfAndMoments) {
  PrecisionScope scope(128);
  const auto pmf = poisson_pmf(Q(3, 2), 10, p128);
  Real f = 1;
  for (int k = 0; k <= 10; ++k) {
    if (k) f *= k;
    EXPECT_LT(abs(pmf.masses[k] - exp(Real(-1.5)) * pow(Real(1.5), k) / f), Real(1e-35));
  }
  EXPECT_EQ(poisson_moments(1, 6).exact_values(), (std::vector<Q>{1, 1, 2, 5, 15, 52, 203}));
  const auto g = geometric_pmf(Q(1, 3), 5);
  for (std::size_t k = 0; k <= 5; ++k) EXPECT_EQ(g[k], Q(2, 3) * pow(Q(1, 3), k));
  EXPECT_THROW(geometric_pmf(Q(1), 3), InputError);
}
