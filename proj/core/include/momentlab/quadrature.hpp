#pragma once

// Double-exponential (tanh-sinh) quadrature at the current MPFR working precision.

#include <cstddef>
#include <functional>
#include <optional>

#include "momentlab/numeric.hpp"

namespace momentlab::quadrature {

struct QuadratureResult {
  Real value;
  /// Difference of the last two levels plus a rounding allowance, plus any tail bound.
  Real error;
  std::size_t evaluations = 0;
  unsigned levels = 0;
};

using Function = std::function<Real(const Real&)>;

/// Integral of f over the finite interval [a, b]. Halves the step until two successive levels
/// agree to abs_tol; throws NumericalError when max_levels is exhausted. f sees the rounded
/// abscissa and nodes stop one ulp short of a nonzero endpoint, so an integrable singularity
/// there (rather than at 0) limits the attainable accuracy to about sqrt(ulp).
QuadratureResult tanh_sinh(const Function& f, const Real& a, const Real& b, const Real& abs_tol, unsigned max_levels = 12);

/// exp(log_f) with log_f concave on the integration range; dlog_f is its derivative.
struct LogConcave {
  Function log_f;
  Function dlog_f;
};

/// Integral of exp(log_f) over (lo, hi); nullopt endpoints are infinite. The range is split at
/// the mode. Infinite tails are cut at a point U where exp(log_f(U)) / |log_f'(U)| is below the
/// tail budget, which bounds the discarded mass by concavity; the bound is added to error.
QuadratureResult integrate_log_concave(const LogConcave& g, const std::optional<Real>& lo, const std::optional<Real>& hi,
                                       const Real& abs_tol, unsigned max_levels = 12);

}  // namespace momentlab::quadrature
