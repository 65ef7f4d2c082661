#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "momentlab/errors.hpp"
#include "momentlab/simulator.hpp"

using namespace momentlab;
using namespace momentlab::simulator;

namespace {

struct Sample {
  double mean = 0, var = 0;
};

Sample summarize(const std::vector<double>& x) {
  Sample s;
  for (double v : x) s.mean += v;
  s.mean /= static_cast<double>(x.size());
  for (double v : x) s.var += (v - s.mean) * (v - s.mean);
  s.var /= static_cast<double>(x.size() - 1);
  return s;
}

// |sample mean - mean| and |sample variance - var| within k standard errors; the variance SE
// uses the fourth central moment m4.
void expect_moments(const std::vector<double>& x, double mean, double var, double m4, double k = 5) {
  const double n = static_cast<double>(x.size());
  const auto s = summarize(x);
  EXPECT_LT(std::abs(s.mean - mean), k * std::sqrt(var / n)) << "mean " << s.mean << " vs " << mean;
  EXPECT_LT(std::abs(s.var - var), k * std::sqrt((m4 - var * var) / n)) << "var " << s.var << " vs " << var;
}

JumpSpec atoms(std::vector<Atom> a, double rate = 1, double epsilon = 0) {
  JumpSpec s;
  s.rate = rate;
  s.law = AtomLaw{std::move(a)};
  s.epsilon = epsilon;
  return s;
}

}  // namespace

TEST(Sampler, UnitJumpsArePoisson) {
  // X ~ Poisson(2): variance 2, fourth central moment 2 + 3 * 4.
  const auto x = sample_compound_poisson(atoms({{1, 1}}, 2), 1, 7, 1000000);
  expect_moments(x, 2, 2, 2 + 3 * 4);
  for (double v : x) ASSERT_EQ(v, std::floor(v));
}

TEST(Sampler, CompoundMomentsFromCumulants) {
  // cumulants of a compound Poisson sum: kappa_j = rate t E[Y^j]
  JumpSpec s = atoms({{0.5, 1}, {2, 3}}, 1.5);
  s.validate();
  const double t = 2;
  const double k2 = s.rate * t * s.retained_moment(2);
  const double k4 = s.rate * t * (0.25 * std::pow(0.5, 4) + 0.75 * 16);
  const auto x = sample_compound_poisson(s, t, 8, 1000000);
  expect_moments(x, s.rate * t * s.retained_moment(1), k2, k4 + 3 * k2 * k2);

  JumpSpec p;
  p.rate = 0.7;
  p.law = PoissonLaw{3};
  // Poisson(3) raw moments: 3, 12, 93
  EXPECT_NEAR(p.retained_moment(1), 3, 1e-12);
  EXPECT_NEAR(p.retained_moment(2), 12, 1e-11);
  const auto y = sample_compound_poisson(p, 1, 9, 1000000);
  const double pk2 = 0.7 * 12, pk4 = 0.7 * (3 + 7 * 9 + 6 * 27 + 81);
  expect_moments(y, 0.7 * 3, pk2, pk4 + 3 * pk2 * pk2);
}

TEST(Sampler, EpsilonDiscardsSmallJumps) {
  const auto x = sample_compound_poisson(atoms({{0.25, 1}, {1, 1}}, 3, 0.5), 1, 10, 200000);
  for (double v : x) ASSERT_EQ(v, std::floor(v));
  expect_moments(x, 1.5, 1.5, 1.5 + 3 * 1.5 * 1.5);
  const auto none = sample_compound_poisson(atoms({{0.25, 1}, {1, 1}}, 3, 2), 1, 10, 1000);
  for (double v : none) EXPECT_EQ(v, 0);
  const auto at_zero = sample_compound_poisson(atoms({{1, 1}}, 3), 0, 10, 1000);
  for (double v : at_zero) EXPECT_EQ(v, 0);
}

TEST(Sampler, DeterministicAndPrefixStable) {
  JumpSpec s;
  s.law = LognormalLaw{0, 1};
  s.rate = 2;
  const auto a = sample_compound_poisson(s, 1, 123, 50000);
  const auto b = sample_compound_poisson(s, 1, 123, 50000);
  EXPECT_EQ(a, b);
  const auto prefix = sample_compound_poisson(s, 1, 123, 20000);
  EXPECT_TRUE(std::equal(prefix.begin(), prefix.end(), a.begin()));
  EXPECT_NE(sample_compound_poisson(s, 1, 124, 50000), a);
  EXPECT_NE(block_seed(1, 0), block_seed(1, 1));
  EXPECT_NE(block_seed(1, 0), block_seed(2, 0));
}

TEST(JumpLaws, RetainedQuantitiesAgainstQuadrature) {
  JumpSpec s;
  s.law = LognormalLaw{0.3, 0.8};
  for (double eps : {0.0, 0.5, 2.0}) {
    s.epsilon = eps;
    const double sd = std::sqrt(0.8);
    auto density = [&](double y) { return std::exp(-std::pow(std::log(y) - 0.3, 2) / 1.6) / (y * sd * std::sqrt(2 * M_PI)); };
    // substitute y = e^u to integrate over the real line
    for (int order = 0; order <= 2; ++order) {
      const double lo = eps > 0 ? std::log(eps) : -40.0;
      const double direct = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double u) { const double y = std::exp(u); return std::pow(y, order) * density(y) * y; }, lo, 40.0, 15, 1e-13);
      if (order == 0) EXPECT_NEAR(s.retained_probability(), direct, 1e-10) << eps;
      EXPECT_NEAR(s.retained_moment(order), direct, 1e-9 * (1 + direct)) << eps << " " << order;
    }
  }
  JumpSpec p;
  p.law = PoissonLaw{2};
  p.epsilon = 1.5;
  EXPECT_NEAR(p.retained_probability(), 1 - 3 * std::exp(-2.0), 1e-14);
  EXPECT_NEAR(p.retained_moment(1), 2 - 2 * std::exp(-2.0), 1e-13);
}

TEST(JumpLaws, Validation) {
  EXPECT_THROW(sample_compound_poisson(atoms({{1, 1}}, 0), 1, 1, 10), InputError);
  EXPECT_THROW(sample_compound_poisson(atoms({{-1, 1}}), 1, 1, 10), InputError);
  EXPECT_THROW(sample_compound_poisson(atoms({{1, 0}}), 1, 1, 10), InputError);
  EXPECT_THROW(sample_compound_poisson(atoms({}), 1, 1, 10), InputError);
  EXPECT_THROW(sample_compound_poisson(atoms({{1, 1}}), -1, 1, 10), InputError);
  JumpSpec l;
  l.law = LognormalLaw{0, 0};
  EXPECT_THROW(l.validate(), InputError);
  auto w = atoms({{1, 2}, {2, 6}});
  w.validate();
  EXPECT_DOUBLE_EQ(std::get<AtomLaw>(w.law).atoms[0].w, 0.25);
}

TEST(Estimate, ClopperPearsonMatchesBinomialQuantiles) {
  using boost::math::binomial_distribution;
  for (auto [count, trials] : {std::pair<std::size_t, std::size_t>{0, 100}, {3, 100}, {50, 100}, {100, 100}, {17, 100000}}) {
    const auto e = estimate(count, trials, 0.99);
    const double n = static_cast<double>(trials), k = static_cast<double>(count);
    EXPECT_NEAR(e.ci_low, binomial_distribution<>::find_lower_bound_on_p(n, k, 0.005, binomial_distribution<>::clopper_pearson_exact_interval),
                1e-12);
    EXPECT_NEAR(e.ci_high, binomial_distribution<>::find_upper_bound_on_p(n, k, 0.005, binomial_distribution<>::clopper_pearson_exact_interval),
                1e-12);
    EXPECT_LE(e.ci_low, e.p_hat);
    EXPECT_GE(e.ci_high, e.p_hat);
    EXPECT_NEAR(e.standard_error, std::sqrt(e.p_hat * (1 - e.p_hat) / n), 1e-15);
  }
  EXPECT_THROW(estimate(1, 10, 1.0), InputError);
}

TEST(Spectrum, PoissonIsConsistent) {
  const auto r = spectrum_gap_test(atoms({{1, 1}}), 0.5, 1.5, 3, 1000000, 42, 0.99);
  EXPECT_EQ(r.verdict, SpectrumVerdict::consistent);
  // (a,b) holds X = 1, (3a,3b) holds X = 2, 3, 4
  EXPECT_NEAR(r.ab.p_hat, std::exp(-1.0), 5 * r.ab.standard_error);
  EXPECT_NEAR(r.nanb.p_hat, std::exp(-1.0) * (1.0 / 2 + 1.0 / 6 + 1.0 / 24), 5 * r.nanb.standard_error);
  EXPECT_GT(r.nanb.count, 0u);
  EXPECT_EQ(r.replication_jump_count, 1u);
  EXPECT_NEAR(r.replication_lower_bound, std::exp(-1.0) / 6, 1e-3);

  JumpSpec l;
  l.law = LognormalLaw{0, 1};
  l.epsilon = 0.05;
  EXPECT_EQ(spectrum_gap_test(l, 0.8, 1.2, 2, 200000, 5, 0.99).verdict, SpectrumVerdict::consistent);
}

TEST(Spectrum, RemovedGapIsAViolation) {
  // mass in (1.5, 3.5) moved to 0: X = 2 and X = 3 vanish, so (1.8, 2.2) is empty while
  // two single jumps in (0.9, 1.1) would land there with probability e^{-1}/2.
  const auto r = spectrum_gap_test(atoms({{1, 1}}), 0.9, 1.1, 2, 200000, 11, 0.99, 1, std::pair{1.5, 3.5});
  EXPECT_EQ(r.verdict, SpectrumVerdict::violation);
  EXPECT_EQ(r.nanb.count, 0u);
  EXPECT_NEAR(r.replication_lower_bound, std::exp(-1.0) / 2, 1e-2);
  ASSERT_TRUE(r.z_score);
  EXPECT_GT(*r.z_score, 10);

  const auto same = spectrum_gap_test(atoms({{1, 1}}), 0.9, 1.1, 2, 200000, 11, 0.99, 1, std::pair{1.5, 3.5});
  EXPECT_EQ(same.ab.count, r.ab.count);
  EXPECT_EQ(same.replication_lower_bound, r.replication_lower_bound);
  EXPECT_THROW(spectrum_gap_test(atoms({{1, 1}}), 2, 1, 2, 10, 1, 0.99), InputError);
}

TEST(Drift, AgreesWithPathwiseDifference) {
  const auto spec = atoms({{0.25, 2}, {0.5, 1}, {2, 1}}, 4);
  const std::vector<double> grid{0.1, 0.3, 0.6, 5};
  const double eta = 0.6;
  const std::size_t trials = 60000;
  const auto table = epsilon_truncation_drift(spec, grid, eta, trials, 99);
  ASSERT_EQ(table.rows.size(), 4u);
  EXPECT_EQ(table.rows.front().epsilon, 5);
  EXPECT_TRUE(table.monotone_counts);
  EXPECT_TRUE(table.monotone_within_bands);

  // same seed, same paths: X - X_eps recomputed from two independent sampler runs
  const auto full = sample_compound_poisson(spec, 1, 99, trials);
  for (const auto& row : table.rows) {
    auto s = spec;
    s.epsilon = row.epsilon;
    const auto kept = sample_compound_poisson(s, 1, 99, trials);
    std::size_t c = 0;
    for (std::size_t i = 0; i < trials; ++i) c += full[i] - kept[i] > eta;
    EXPECT_EQ(row.estimate.count, c) << row.epsilon;
  }
  EXPECT_EQ(table.rows.back().estimate.count, 0u);

  const auto zero = epsilon_truncation_drift(spec, {0}, 0, 1000, 3);
  EXPECT_EQ(zero.rows[0].estimate.count, 0u);
  EXPECT_THROW(epsilon_truncation_drift(spec, {}, 0.1, 10, 1), InputError);
}
