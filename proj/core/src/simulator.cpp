#include "momentlab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "momentlab/errors.hpp"
#include "momentlab/parallel.hpp"

namespace momentlab::simulator {

namespace {

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

double poisson_cdf(long k, double lambda) {
  if (k < 0) return 0;
  double term = std::exp(-lambda);
  double acc = term;
  for (long j = 1; j <= k; ++j) {
    term *= lambda / static_cast<double>(j);
    acc += term;
  }
  return std::min(acc, 1.0);
}

double poisson_pmf(unsigned long k, double lambda) {
  if (lambda == 0) return k == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(k) * std::log(lambda) - lambda - std::lgamma(static_cast<double>(k) + 1));
}

// Draws the jumps of one path; all of them, before the epsilon filter.
class PathSampler {
 public:
  PathSampler(const JumpSpec& spec, double t, std::uint64_t seed) : spec_(spec), rng_(seed), mean_(spec.rate * t), count_(mean_ > 0 ? mean_ : 1.0) {
    std::visit(overloaded{
                   [&](const AtomLaw& law) {
                     std::vector<double> w;
                     for (const auto& a : law.atoms) w.push_back(a.w);
                     atoms_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
                   },
                   [&](const PoissonLaw& law) { poisson_jump_ = std::poisson_distribution<long>(law.lambda); },
                   [&](const LognormalLaw& law) { lognormal_ = std::lognormal_distribution<double>(law.alpha, std::sqrt(law.sigma2)); },
               },
               spec_.law);
  }

  const std::vector<double>& next() {
    jumps_.clear();
    const long n = mean_ > 0 ? count_(rng_) : 0;
    for (long i = 0; i < n; ++i) jumps_.push_back(draw());
    return jumps_;
  }

 private:
  double draw() {
    return std::visit(overloaded{
                          [&](const AtomLaw& law) { return law.atoms[atoms_(rng_)].x; },
                          [&](const PoissonLaw&) { return static_cast<double>(poisson_jump_(rng_)); },
                          [&](const LognormalLaw&) { return lognormal_(rng_); },
                      },
                      spec_.law);
  }

  const JumpSpec& spec_;
  std::mt19937_64 rng_;
  double mean_;
  std::poisson_distribution<long> count_;
  std::discrete_distribution<std::size_t> atoms_;
  std::poisson_distribution<long> poisson_jump_;
  std::lognormal_distribution<double> lognormal_;
  std::vector<double> jumps_;
};

// Calls visit(block, index, jumps) for every trial; blocks run concurrently, each with its
// own substream, and a block's trials are visited in order.
void for_each_path(const JumpSpec& spec, double t, std::uint64_t seed, std::size_t trials,
                   const std::function<void(std::size_t, std::size_t, const std::vector<double>&)>& visit) {
  const std::size_t blocks = (trials + block_size - 1) / block_size;
  parallel_for(blocks, [&](std::size_t block) {
    PathSampler sampler(spec, t, block_seed(seed, block));
    const std::size_t begin = block * block_size;
    const std::size_t end = std::min(trials, begin + block_size);
    for (std::size_t i = begin; i < end; ++i) visit(block, i, sampler.next());
  });
}

double retained_sum(const std::vector<double>& jumps, double epsilon, unsigned& retained) {
  double x = 0;
  retained = 0;
  for (double j : jumps) {
    if (j > epsilon) {
      x += j;
      ++retained;
    }
  }
  return x;
}

double z_for(double level) { return boost::math::quantile(boost::math::normal(), level); }

double wilson_lower(std::size_t hits, std::size_t n, double z) {
  if (n == 0) return 0;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double centre = p + z2 / (2 * nn);
  const double spread = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return std::max(0.0, (centre - spread) / (1 + z2 / nn));
}

double one_sided_upper(std::size_t count, std::size_t trials, double level) {
  if (count >= trials) return 1;
  return boost::math::ibeta_inv(static_cast<double>(count + 1), static_cast<double>(trials - count), level);
}

void check_level(double level) {
  if (!(level > 0 && level < 1)) throw InputError("confidence level must lie in (0,1)");
}

}  // namespace

void JumpSpec::validate() {
  if (!(rate > 0) || !std::isfinite(rate)) throw InputError("jump rate must be positive");
  if (!(epsilon >= 0) || !std::isfinite(epsilon)) throw InputError("epsilon must be non-negative");
  std::visit(overloaded{
                 [](AtomLaw& law) {
                   if (law.atoms.empty()) throw InputError("atom law needs at least one atom");
                   double total = 0;
                   for (const auto& a : law.atoms) {
                     if (!(a.x > 0) || !std::isfinite(a.x)) throw InputError("atoms must lie in (0, inf)");
                     if (!(a.w > 0) || !std::isfinite(a.w)) throw InputError("atom weights must be positive");
                     total += a.w;
                   }
                   for (auto& a : law.atoms) a.w /= total;
                 },
                 [](PoissonLaw& law) {
                   if (!(law.lambda > 0) || !std::isfinite(law.lambda)) throw InputError("Poisson jump law needs lambda > 0");
                 },
                 [](LognormalLaw& law) {
                   if (!(law.sigma2 > 0) || !std::isfinite(law.sigma2) || !std::isfinite(law.alpha)) {
                     throw InputError("lognormal jump law needs finite alpha and sigma2 > 0");
                   }
                 },
             },
             law);
}

double JumpSpec::retained_probability() const {
  return std::visit(overloaded{
                        [&](const AtomLaw& law) {
                          double p = 0;
                          for (const auto& a : law.atoms) {
                            if (a.x > epsilon) p += a.w;
                          }
                          return p;
                        },
                        [&](const PoissonLaw& law) { return 1 - poisson_cdf(static_cast<long>(std::floor(epsilon)), law.lambda); },
                        [&](const LognormalLaw& law) {
                          if (epsilon == 0) return 1.0;
                          return 0.5 * std::erfc((std::log(epsilon) - law.alpha) / std::sqrt(2 * law.sigma2));
                        },
                    },
                    law);
}

double JumpSpec::retained_moment(int order) const {
  if (order < 0) throw InputError("moment order must be non-negative");
  return std::visit(overloaded{
                        [&](const AtomLaw& law) {
                          double m = 0;
                          for (const auto& a : law.atoms) {
                            if (a.x > epsilon) m += a.w * std::pow(a.x, order);
                          }
                          return m;
                        },
                        [&](const PoissonLaw& law) {
                          // Sum until the pmf is negligible past the mean.
                          double m = 0;
                          const auto stop = static_cast<unsigned long>(law.lambda + 40 * std::sqrt(law.lambda) + 60);
                          for (unsigned long j = 0; j <= stop; ++j) {
                            if (static_cast<double>(j) > epsilon) m += std::pow(static_cast<double>(j), order) * poisson_pmf(j, law.lambda);
                          }
                          return m;
                        },
                        [&](const LognormalLaw& law) {
                          const double o = order;
                          const double full = std::exp(o * law.alpha + o * o * law.sigma2 / 2);
                          if (epsilon == 0) return full;
                          const double sigma = std::sqrt(law.sigma2);
                          const double z = (o * law.sigma2 + law.alpha - std::log(epsilon)) / sigma;
                          return full * 0.5 * std::erfc(-z / std::sqrt(2.0));
                        },
                    },
                    law);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) { return splitmix64(splitmix64(seed) ^ splitmix64(~block)); }

std::vector<double> sample_compound_poisson(JumpSpec spec, double t, std::uint64_t seed, std::size_t count) {
  spec.validate();
  if (!(t >= 0) || !std::isfinite(t)) throw InputError("time must be non-negative");
  std::vector<double> out(count);
  for_each_path(spec, t, seed, count, [&](std::size_t, std::size_t i, const std::vector<double>& jumps) {
    unsigned retained = 0;
    out[i] = retained_sum(jumps, spec.epsilon, retained);
  });
  return out;
}

BinomialEstimate estimate(std::size_t count, std::size_t trials, double level) {
  check_level(level);
  BinomialEstimate e;
  e.count = count;
  e.trials = trials;
  if (trials == 0) {
    e.ci_high = 1;
    return e;
  }
  const double n = static_cast<double>(trials);
  e.p_hat = static_cast<double>(count) / n;
  e.standard_error = std::sqrt(e.p_hat * (1 - e.p_hat) / n);
  const double tail = (1 - level) / 2;
  e.ci_low = count == 0 ? 0.0 : boost::math::ibeta_inv(static_cast<double>(count), static_cast<double>(trials - count + 1), tail);
  e.ci_high = count == trials ? 1.0 : boost::math::ibeta_inv(static_cast<double>(count + 1), static_cast<double>(trials - count), 1 - tail);
  return e;
}

SpectrumTestResult spectrum_gap_test(JumpSpec spec, double a, double b, unsigned n, std::size_t trials, std::uint64_t seed,
                                     double level, double t, std::optional<std::pair<double, double>> gap) {
  spec.validate();
  check_level(level);
  if (!(a > 0 && a < b)) throw InputError("spectrum test needs 0 < a < b");
  if (n < 1) throw InputError("spectrum test needs n >= 1");
  if (trials < 1) throw InputError("spectrum test needs at least one trial");
  if (!(t > 0) || !std::isfinite(t)) throw InputError("time must be positive");
  if (gap && !(gap->first > 0 && gap->first < gap->second)) throw InputError("gap needs 0 < a < b");

  // Per block: hits in (a,b), hits in (na,nb), and per retained jump count m the number of
  // paths and how many of them landed in (a,b).
  constexpr unsigned max_m = 256;
  struct Tally {
    std::size_t ab = 0, nanb = 0;
    std::vector<std::size_t> paths = std::vector<std::size_t>(max_m + 1, 0);
    std::vector<std::size_t> hits = std::vector<std::size_t>(max_m + 1, 0);
  };
  const std::size_t blocks = (trials + block_size - 1) / block_size;
  std::vector<Tally> tallies(blocks);
  const double na = n * a;
  const double nb = n * b;
  for_each_path(spec, t, seed, trials, [&](std::size_t block, std::size_t, const std::vector<double>& jumps) {
    unsigned m = 0;
    double x = retained_sum(jumps, spec.epsilon, m);
    if (gap && x > gap->first && x < gap->second) x = 0;
    Tally& tally = tallies[block];
    const bool in_ab = x > a && x < b;
    if (in_ab) ++tally.ab;
    if (x > na && x < nb) ++tally.nanb;
    if (m <= max_m) {
      ++tally.paths[m];
      if (in_ab) ++tally.hits[m];
    }
  });
  Tally total;
  for (const auto& tally : tallies) {
    total.ab += tally.ab;
    total.nanb += tally.nanb;
    for (unsigned m = 0; m <= max_m; ++m) {
      total.paths[m] += tally.paths[m];
      total.hits[m] += tally.hits[m];
    }
  }

  SpectrumTestResult out;
  out.a = a;
  out.b = b;
  out.n = n;
  out.t = t;
  out.trials = trials;
  out.level = level;
  out.seed = seed;
  out.gap = gap;
  out.ab = estimate(total.ab, trials, level);
  out.nanb = estimate(total.nanb, trials, level);

  const double z = z_for(level);
  const double big_lambda = spec.rate * t * spec.retained_probability();
  for (unsigned m = 1; m <= max_m; ++m) {
    const double g = wilson_lower(total.hits[m], total.paths[m], z);
    if (g <= 0) continue;
    const double bound = poisson_pmf(static_cast<unsigned long>(n) * m, big_lambda) * std::pow(g, n);
    if (bound > out.replication_lower_bound) {
      out.replication_lower_bound = bound;
      out.replication_jump_count = m;
    }
  }
  const double upper = one_sided_upper(total.nanb, trials, level);
  const double lb = out.replication_lower_bound;
  if (lb > 0 && lb < 1) out.z_score = (lb - out.nanb.p_hat) / std::sqrt(lb * (1 - lb) / static_cast<double>(trials));
  const bool ab_significant = out.ab.ci_low > 0;
  if (ab_significant && total.nanb == 0 && lb > upper) out.verdict = SpectrumVerdict::violation;
  return out;
}

DriftTable epsilon_truncation_drift(JumpSpec spec, std::vector<double> eps_grid, double eta, std::size_t trials,
                                    std::uint64_t seed, double level, double t) {
  spec.epsilon = 0;
  spec.validate();
  check_level(level);
  if (eps_grid.empty()) throw InputError("epsilon grid is empty");
  for (double e : eps_grid) {
    if (!(e >= 0) || !std::isfinite(e)) throw InputError("epsilon grid values must be non-negative");
  }
  if (!(eta >= 0) || !std::isfinite(eta)) throw InputError("eta must be non-negative");
  if (!(t >= 0) || !std::isfinite(t)) throw InputError("time must be non-negative");
  std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());

  const std::size_t blocks = (trials + block_size - 1) / block_size;
  std::vector<std::vector<std::size_t>> counts(blocks, std::vector<std::size_t>(eps_grid.size(), 0));
  for_each_path(spec, t, seed, trials, [&](std::size_t block, std::size_t, const std::vector<double>& jumps) {
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
      double dropped = 0;
      for (double j : jumps) {
        if (j <= eps_grid[i]) dropped += j;
      }
      if (dropped > eta) ++counts[block][i];
    }
  });

  DriftTable out;
  out.eta = eta;
  out.t = t;
  out.trials = trials;
  out.seed = seed;
  out.level = level;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    std::size_t c = 0;
    for (const auto& block : counts) c += block[i];
    out.rows.push_back({eps_grid[i], estimate(c, trials, level)});
  }
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    const auto& prev = out.rows[i - 1].estimate;
    const auto& cur = out.rows[i].estimate;
    if (cur.count > prev.count) out.monotone_counts = false;
    const double slack = (prev.ci_high - prev.p_hat) + (cur.p_hat - cur.ci_low);
    if (cur.p_hat > prev.p_hat + slack) out.monotone_within_bands = false;
  }
  return out;
}

std::string to_string(SpectrumVerdict v) { return v == SpectrumVerdict::consistent ? "consistent" : "violation"; }

}  // namespace momentlab::simulator
