#pragma once

// Hankel-matrix analysis of moment sequences: determinants, positive definiteness on both
// shifts, Fekete total positivity, indeterminacy diagnostics, log-convexity reports.
//
// Every operation is instantiated for exact rationals and for MPFR reals. Exact inputs never
// use tolerances. Real inputs decide signs with a relative tolerance against the Hadamard
// bound of the matrix (determinants) or against the compared magnitudes (ratios).
//
// All verdicts describe finite-depth evidence only and carry the depth they examined.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "momentlab/moment_sequence.hpp"
#include "momentlab/numeric.hpp"

namespace momentlab::stieltjes {

/// Addresses the Hankel matrix [a_shift, ..., a_{shift+2 size}], i.e. the (size+1) x (size+1)
/// matrix with entry (i,j) = a_{shift+i+j}.
struct HankelQuery {
  std::size_t shift = 0;
  std::size_t size = 0;

  std::size_t last_index() const { return shift + 2 * size; }
  friend bool operator==(const HankelQuery&, const HankelQuery&) = default;
};

struct SignOptions {
  /// Only consulted for approximate sequences.
  double relative_tolerance = std::ldexp(1.0, -40);
};

template <class T>
struct DeterminantRecord {
  HankelQuery query;
  T value;
  int sign = 0;
};

/// Throws InputError when the query reaches beyond the sequence.
void check_query(std::size_t sequence_length, const HankelQuery& q);

template <class T>
T hankel_det(std::span<const T> a, const HankelQuery& q);

/// Exact determinant of the addressed Hankel matrix. Rejects approximate sequences.
BigRational hankel_det(const MomentSequence& m, const HankelQuery& q);

/// Sign of the determinant, with the tolerance applied for approximate values.
template <class T>
DeterminantRecord<T> signed_hankel_det(std::span<const T> a, const HankelQuery& q, const SignOptions& opts);

// ---------------------------------------------------------------------------------------------

enum class Definiteness { strictly_positive, semi_definite, not_stieltjes };

template <class T>
struct StieltjesVerdict {
  Definiteness kind = Definiteness::strictly_positive;
  std::size_t requested_depth = 0;
  /// Largest size checked on shift 0 and on shift 1 (shift 1 may be shallower when the
  /// sequence is too short; nullopt when it could not be checked at all).
  std::size_t depth_shift0 = 0;
  std::optional<std::size_t> depth_shift1;
  /// First negative determinant for not_stieltjes, first vanishing one for semi_definite.
  std::optional<DeterminantRecord<T>> witness;
  std::vector<DeterminantRecord<T>> determinants;
};

/// Checks Delta_{m,0} and Delta_{m,1} for m = 0..upto. Requires 2*upto <= N.
template <class T>
StieltjesVerdict<T> stieltjes_verdict(std::span<const T> a, std::size_t upto, const SignOptions& opts = {});

// ---------------------------------------------------------------------------------------------

enum class TotalPositivity { strictly_tp, semi_definite, not_tp };

template <class T>
struct FeketeMinor {
  std::size_t row = 0;  // first row of the consecutive block
  std::size_t col = 0;  // first column of the consecutive block
  std::size_t order = 0;
  T value;
  int sign = 0;
};

template <class T>
struct FeketeResult {
  TotalPositivity kind = TotalPositivity::strictly_tp;
  HankelQuery query;
  /// First negative minor for not_tp, first vanishing one for semi_definite.
  std::optional<FeketeMinor<T>> witness;
  std::size_t minors_checked = 0;
  /// A consecutive Hankel minor depends only on (row+col, order); each distinct one is
  /// evaluated once.
  std::size_t determinants_evaluated = 0;
};

/// Enumerates every minor on consecutive rows and columns of the addressed Hankel matrix,
/// O(m^3) minors of order <= m+1. Strictly TP by Fekete's criterion when all are positive.
template <class T>
FeketeResult<T> fekete_total_positivity(std::span<const T> a, const HankelQuery& q, const SignOptions& opts = {});

// ---------------------------------------------------------------------------------------------

template <class T>
struct RatioSeries {
  /// Entry n-1 holds the ratio at n = 1..depth; nullopt where the denominator vanishes.
  std::vector<std::optional<T>> values;
  bool degenerate = false;
  /// Finite-depth heuristic: every value is positive and the last value is at least half
  /// of the value at the middle of the computed range.
  bool appears_bounded_away = false;
};

template <class T>
struct IndeterminacyReport {
  std::size_t depth = 0;
  /// Delta_{n,0} / Delta_{n-1,2}
  RatioSeries<T> shift0;
  /// Delta_{n,1} / Delta_{n-1,3}
  RatioSeries<T> shift1;
};

/// Requires 2*upto + 1 <= N.
template <class T>
IndeterminacyReport<T> indeterminacy_ratios(std::span<const T> a, std::size_t upto, const SignOptions& opts = {});

template <class T>
struct C1Report {
  std::size_t depth = 0;
  T mu1;
  /// Entry d-1 holds c_{1,d}; nullopt where the cofactor vanishes.
  std::vector<std::optional<T>> values;
  bool degenerate = false;
  bool monotone_nondecreasing = true;
  bool strictly_below_mu1 = true;
};

/// For each depth d = 1..upto, the value replacing a_1 that makes the shift-1 Hankel
/// determinant of size d vanish. The determinant is affine in that entry. Requires
/// 2*upto + 1 <= N.
template <class T>
C1Report<T> c1_sequence(std::span<const T> a, std::size_t upto, const SignOptions& opts = {});

// ---------------------------------------------------------------------------------------------

enum class LogConvexity { strictly_log_convex, log_convex, not_log_convex };

template <class T>
struct LogConvexityReport {
  /// theta[n-1] = a_n^2 / (a_{n-1} a_{n+1}) for n = 1..N-1.
  std::vector<T> theta;
  T theta_sup;
  std::size_t sup_index = 0;
  /// Supremum over the last half of the computed indices: the finite-depth stand-in for the
  /// critical ratio (a limsup).
  T tail_sup;
  std::size_t tail_from = 0;
  std::size_t tail_to = 0;
  LogConvexity verdict = LogConvexity::not_log_convex;
};

/// Requires N >= 2 and every a_n > 0.
template <class T>
LogConvexityReport<T> log_convexity_report(std::span<const T> a, const SignOptions& opts = {});

enum class C46Status { holds, violated, precondition_failed };

template <class T>
struct C46Violation {
  std::size_t k = 0;
  std::size_t n = 0;
  T lhs;  // a_k a_{n-k} / a_n
  T rhs;  // theta^{k(n-k)}
};

template <class T>
struct C46Result {
  C46Status status = C46Status::holds;
  std::size_t pairs_checked = 0;
  std::size_t equalities = 0;
  /// First n at which theta_n exceeds the supplied theta.
  std::optional<std::size_t> precondition_index;
  std::optional<C46Violation<T>> first_violation;
};

/// Verifies the sequence is theta-log-convex, then a_k a_{n-k} / a_n <= theta^{k(n-k)} for all
/// 1 <= k < n <= N.
template <class T>
C46Result<T> c46_check(std::span<const T> a, const T& theta, const SignOptions& opts = {});

}  // namespace momentlab::stieltjes
