#pragma once

// Infinite-divisibility tests for distributions on the non-negative integers: Katti's
// recursion for the compound-Poisson rates r_k, and the log-convexity sufficient condition.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "momentlab/distributions.hpp"
#include "momentlab/numeric.hpp"

namespace momentlab::divisibility {

enum class KattiVerdict {
  /// Some r_k is negative with its whole error interval: not infinitely divisible.
  not_infinitely_divisible,
  /// No certified-negative entry. Necessary, not sufficient.
  no_certified_negative,
  /// Every interval contains 0; the pmf is not accurate enough to sign anything.
  inconclusive,
};

struct KattiReport {
  std::vector<Real> r;
  /// Rigorous half-widths: the true r_k lies in [r_k - radius_k, r_k + radius_k].
  std::vector<Real> radius;
  std::optional<std::size_t> first_negative;
  std::vector<std::size_t> certified_negative;
  /// Largest radius over the computed entries.
  Real error_bound;
  KattiVerdict verdict = KattiVerdict::inconclusive;
};

/// Solves (j+1) p_{j+1} = sum_{k=0}^{j} p_{j-k} r_k for j = 0..kmax, with interval error
/// propagation from the pmf's abs_errors and the working-precision rounding. Needs p_0 > 0
/// beyond its error and masses up to kmax+1.
KattiReport katti_r(const distributions::DiscretePMF& p, std::size_t kmax);

struct ExactKattiReport {
  std::vector<BigRational> r;
  std::optional<std::size_t> first_negative;
};

ExactKattiReport katti_r_exact(std::span<const BigRational> p, std::size_t kmax);

enum class LogConvexVerdict {
  /// p_k^2 <= p_{k-1} p_{k+1} at every interior k: infinitely divisible.
  certified_id,
  /// Some interior inequality fails (or cannot be decided within the error bounds).
  no_conclusion,
  /// A zero mass inside the examined range; the criterion does not apply.
  inapplicable,
};

struct LogConvexPmfResult {
  LogConvexVerdict verdict = LogConvexVerdict::no_conclusion;
  std::size_t checked = 0;
  std::optional<std::size_t> first_failure;
  std::optional<std::size_t> zero_index;
};

LogConvexPmfResult logconvex_pmf_check(std::span<const BigRational> p);
/// An inequality counts as satisfied only when it holds for every value inside the error bounds.
LogConvexPmfResult logconvex_pmf_check(const distributions::DiscretePMF& p);

std::string to_string(KattiVerdict v);
std::string to_string(LogConvexVerdict v);

}  // namespace momentlab::divisibility
