#pragma once

// Experiments on the t-indexed Maxwell-Boltzmann family mu^{o t}: the semigroup law as a
// polynomial identity in (s, t), the sign-alternation structure of the terms grouped by the
// number of occupied cells, the two-sided bound t mu_n >= mu^{o t}_n > (1 - theta) t mu_n, and
// a theta-threshold scan on the canonical family mu_n = q^{n^2}.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "momentlab/moment_sequence.hpp"
#include "momentlab/numeric.hpp"
#include "momentlab/stieltjes.hpp"

namespace momentlab::semigroup {

struct SemigroupIdentityResult {
  bool holds = true;
  std::size_t depth = 0;
  std::optional<std::size_t> first_failure;
};

/// classical_convolve(mu^{o s}, mu^{o t})_n == mu^{o (s+t)}_n as bivariate polynomials, n <= depth.
SemigroupIdentityResult mb_semigroup_identity(const MomentSequence& m, std::size_t depth);

struct AlternationResult {
  bool precondition_ok = true;
  std::vector<std::string> precondition_notes;
  /// terms[j-1] = C^t_j * (composition sum of n into j parts)
  std::vector<BigRational> terms;
  bool leading_term_ok = true;
  bool alternates = true;
  bool decreasing = true;
  bool tails_dominated = true;
  bool holds() const { return leading_term_ok && alternates && decreasing && tails_dominated; }
};

/// Groups mu^{o t}_n by the number j of occupied cells and checks: leading term t mu_n, signs
/// alternate in j, moduli decrease, and each tail sum is smaller in modulus than the term
/// before it. Precondition violations (not strictly log-convex, t outside (0,1)) are reported.
AlternationResult l45_alternation_check(const MomentSequence& m, const BigRational& t, std::size_t n);

struct BoundsRow {
  std::size_t n = 0;
  BigRational upper;  // t mu_n
  BigRational value;  // mu^{o t}_n
  BigRational lower;  // (1 - theta) t mu_n
  bool ok = true;
};

struct BoundsResult {
  bool precondition_ok = true;
  std::optional<std::size_t> precondition_index;
  bool holds = true;
  std::optional<std::size_t> first_violation;
  std::vector<BoundsRow> rows;
};

/// t mu_n >= mu^{o t}_n > (1 - theta) t mu_n for 1 <= n <= depth, after confirming the
/// sequence is theta-log-convex on the available range.
BoundsResult c420_bounds_check(const MomentSequence& m, const BigRational& theta, const BigRational& t, std::size_t depth);

/// mu_n = q^{n^2}; theta = 1/q^2 exactly. q must be a rational greater than 1.
MomentSequence canonical_log_convex_family(const BigRational& q, std::size_t upto);
/// q with theta = 1/q^2, or InputError unless theta is the reciprocal of a rational square in (0,1).
BigRational q_for_theta(const BigRational& theta);

struct ScanCell {
  bool stieltjes_ok = false;
  stieltjes::Definiteness kind = stieltjes::Definiteness::strictly_positive;
  std::optional<stieltjes::HankelQuery> witness;
};

struct ThresholdScanResult {
  std::vector<BigRational> theta_grid;
  std::vector<BigRational> t_grid;
  std::size_t depth = 0;
  /// pass_matrix[i][j] for theta_grid[i], t_grid[j]
  std::vector<std::vector<ScanCell>> pass_matrix;
  /// theta/(1-theta)^2 per grid theta, the quantity the sufficiency argument compares with delta.
  std::vector<BigRational> sufficiency_ratio;
  std::optional<BigRational> delta;
  /// Whether passing is monotone (non-increasing) in theta along each t column, as observed.
  std::vector<bool> monotone_in_theta;
  /// Largest grid theta for which every t passes; nullopt when none does.
  std::optional<BigRational> empirical_theta_max;
  BigRational conjectured_threshold{1, 6};
};

/// For each theta = 1/q^2, evaluates mu^{o t} of mu_n = q^{n^2} at every t and runs the
/// Stieltjes check to `depth`. Cells are independent and evaluated concurrently; the result is
/// a pure function of the grids.
ThresholdScanResult theta_threshold_scan(const std::vector<BigRational>& theta_grid, const std::vector<BigRational>& t_grid,
                                         std::size_t depth = 5, std::optional<BigRational> delta = std::nullopt);

}  // namespace momentlab::semigroup
