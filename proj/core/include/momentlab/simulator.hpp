#pragma once

// Monte-Carlo compound-Poisson engine: X(t) = sum of the jumps at the epochs of a Poisson
// process on [0, t], jumps of size <= epsilon discarded.
//
// Trials are split into fixed blocks; block b draws from std::mt19937_64 seeded with
// splitmix64 of (seed, b), so results depend only on the seed and never on thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace momentlab::simulator {

struct Atom {
  double x = 0;
  double w = 0;
};

struct AtomLaw {
  std::vector<Atom> atoms;
};
struct PoissonLaw {
  double lambda = 1;
};
struct LognormalLaw {
  double alpha = 0;
  double sigma2 = 1;
};

using JumpLaw = std::variant<AtomLaw, PoissonLaw, LognormalLaw>;

struct JumpSpec {
  double rate = 1;
  JumpLaw law = AtomLaw{{{1.0, 1.0}}};
  /// Jumps of size <= epsilon are discarded.
  double epsilon = 0;

  /// Normalises atom weights; throws InputError on invalid parameters.
  void validate();
  /// P[jump > epsilon].
  double retained_probability() const;
  /// E[Y], E[Y^2] of a retained jump contribution Y 1{Y > epsilon}.
  double retained_moment(int order) const;
};

constexpr std::size_t block_size = 1 << 14;

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block);

/// count independent draws of X(t); deterministic given the seed.
std::vector<double> sample_compound_poisson(JumpSpec spec, double t, std::uint64_t seed, std::size_t count);

struct BinomialEstimate {
  std::size_t count = 0;
  std::size_t trials = 0;
  double p_hat = 0;
  double standard_error = 0;
  /// Two-sided Clopper-Pearson interval at the stated level.
  double ci_low = 0;
  double ci_high = 0;
};

BinomialEstimate estimate(std::size_t count, std::size_t trials, double level);

enum class SpectrumVerdict { consistent, violation };

struct SpectrumTestResult {
  double a = 0, b = 0;
  unsigned n = 1;
  double t = 1;
  std::size_t trials = 0;
  double level = 0.99;
  std::uint64_t seed = 0;
  /// Post-hoc removal of sampled mass in (gap_a, gap_b) to the origin.
  std::optional<std::pair<double, double>> gap;
  BinomialEstimate ab;
  BinomialEstimate nanb;
  /// max_m P[N_eps = n m] g_m^n: n independent groups of m retained jumps, each landing in
  /// (a, b) with conditional frequency at least g_m (Wilson lower bound), put the sum in (na, nb).
  double replication_lower_bound = 0;
  std::optional<unsigned> replication_jump_count;
  SpectrumVerdict verdict = SpectrumVerdict::consistent;
  std::optional<double> z_score;
};

/// Estimates P[X in (a,b)] and P[X in (na,nb)]. A violation needs mass in (a,b), no sample in
/// (na,nb), and a replication lower bound above the upper confidence limit for (na,nb).
SpectrumTestResult spectrum_gap_test(JumpSpec spec, double a, double b, unsigned n, std::size_t trials, std::uint64_t seed,
                                     double level, double t = 1, std::optional<std::pair<double, double>> gap = std::nullopt);

struct DriftRow {
  double epsilon = 0;
  BinomialEstimate estimate;
};

struct DriftTable {
  double eta = 0;
  double t = 1;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double level = 0.99;
  /// Rows sorted by decreasing epsilon.
  std::vector<DriftRow> rows;
  /// Every estimate is at most the previous one plus the combined confidence half-widths.
  bool monotone_within_bands = true;
  /// Counts are non-increasing; exact here because all epsilons share the same sample paths.
  bool monotone_counts = true;
};

/// P[|X - X_eps| > eta] over eps_grid, using the same sample paths for every epsilon; X is the
/// untruncated process (spec.epsilon is ignored).
DriftTable epsilon_truncation_drift(JumpSpec spec, std::vector<double> eps_grid, double eta, std::size_t trials,
                                    std::uint64_t seed, double level = 0.99, double t = 1);

std::string to_string(SpectrumVerdict v);

}  // namespace momentlab::simulator
