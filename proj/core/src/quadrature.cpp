#include "momentlab/quadrature.hpp"

#include <algorithm>
#include <utility>

#include <boost/math/constants/constants.hpp>

#include "momentlab/errors.hpp"

namespace momentlab::quadrature {

namespace {

Real rounding_allowance(const Real& value) {
  const int bits = static_cast<int>(current_precision_bits());
  return abs(value) * ldexp(Real(1), 8 - bits);
}

// Adds the abscissae k*h for k = first, first+step, ... on both sides of the centre. Each side
// stops when its nodes collapse onto its endpoint at the working precision; an endpoint at 0
// never collapses, so distances below half * 2^(-4 bits) are dropped as well.
Real add_nodes(const Function& f, const Real& a, const Real& b, const Real& h, std::size_t first, std::size_t step,
               std::size_t& evaluations) {
  const Real half = (b - a) / 2;
  const Real pi_2 = boost::math::constants::half_pi<Real>();
  const Real floor = half * ldexp(Real(1), -4 * static_cast<int>(current_precision_bits()));
  Real sum = 0;
  bool left_open = true;
  bool right_open = true;
  for (std::size_t k = first; left_open || right_open; k += step) {
    const Real t = h * static_cast<unsigned long>(k);
    const Real u = pi_2 * sinh(t);
    const Real e = exp(-2 * u);
    const Real d = half * 2 * e / (1 + e);
    if (d < floor) break;
    const Real right = b - d;
    const Real left = a + d;
    right_open = right_open && right != b;
    left_open = left_open && left != a;
    const Real w = half * pi_2 * cosh(t) * 4 * e / ((1 + e) * (1 + e));
    if (left_open) {
      sum += w * f(left);
      ++evaluations;
    }
    if (right_open) {
      sum += w * f(right);
      ++evaluations;
    }
  }
  return sum;
}

}  // namespace

QuadratureResult tanh_sinh(const Function& f, const Real& a, const Real& b, const Real& abs_tol, unsigned max_levels) {
  if (!(a < b)) {
    if (a == b) return {Real(0), Real(0), 0, 0};
    auto r = tanh_sinh(f, b, a, abs_tol, max_levels);
    r.value = -r.value;
    return r;
  }
  const Real pi_2 = boost::math::constants::half_pi<Real>();
  QuadratureResult out;
  Real h = 1;
  Real sum = (b - a) / 2 * pi_2 * f((a + b) / 2);
  out.evaluations = 1;
  sum += add_nodes(f, a, b, h, 1, 1, out.evaluations);
  Real previous = h * sum;
  for (unsigned level = 1; level <= max_levels; ++level) {
    h /= 2;
    sum += add_nodes(f, a, b, h, 1, 2, out.evaluations);
    const Real current = h * sum;
    const Real error = abs(current - previous) + rounding_allowance(current);
    out.value = current;
    out.error = error;
    out.levels = level;
    if (level >= 3 && error <= abs_tol) return out;
    previous = current;
  }
  throw NumericalError("tanh-sinh quadrature did not reach tolerance " + to_string(abs_tol, 3) + " (last error estimate " +
                       to_string(out.error, 3) + ")");
}

namespace {

Real find_mode(const LogConcave& g, const std::optional<Real>& lo, const std::optional<Real>& hi) {
  if (lo && g.dlog_f(*lo) <= 0) return *lo;
  if (hi && g.dlog_f(*hi) >= 0) return *hi;
  Real left;
  Real right;
  if (lo && hi) {
    left = *lo;
    right = *hi;
  } else {
    const Real start = lo ? *lo : (hi ? *hi : Real(0));
    Real step = 1;
    if (g.dlog_f(start) > 0) {
      left = start;
      right = start + step;
      for (int i = 0; g.dlog_f(right) > 0; ++i) {
        if (i > 200) throw NumericalError("log-concave integrand: mode search diverged");
        left = right;
        step *= 2;
        right = start + step;
      }
    } else {
      right = start;
      left = start - step;
      for (int i = 0; g.dlog_f(left) < 0; ++i) {
        if (i > 200) throw NumericalError("log-concave integrand: mode search diverged");
        right = left;
        step *= 2;
        left = start - step;
      }
    }
  }
  for (int i = 0; i < 80; ++i) {
    const Real mid = (left + right) / 2;
    if (g.dlog_f(mid) > 0) {
      left = mid;
    } else {
      right = mid;
    }
  }
  return (left + right) / 2;
}

// Cut point beyond which the tail mass is below budget, with the bound itself.
std::pair<Real, Real> tail_cut(const LogConcave& g, const Real& mode, int direction, const Real& budget) {
  const Real log_budget = log(budget);
  Real step = 1;
  for (int i = 0; i < 200; ++i, step *= 2) {
    const Real x = mode + direction * step;
    const Real slope = -direction * g.dlog_f(x);
    if (slope <= 0) continue;
    const Real log_bound = g.log_f(x) - log(slope);
    if (log_bound < log_budget) return {x, exp(log_bound)};
  }
  throw NumericalError("log-concave integrand: tail does not decay");
}

}  // namespace

QuadratureResult integrate_log_concave(const LogConcave& g, const std::optional<Real>& lo, const std::optional<Real>& hi,
                                       const Real& abs_tol, unsigned max_levels) {
  if (lo && hi && !(*lo < *hi)) return {Real(0), Real(0), 0, 0};
  const Real mode = find_mode(g, lo, hi);
  const Function f = [&g](const Real& x) { return exp(g.log_f(x)); };
  QuadratureResult out{Real(0), Real(0), 0, 0};
  Real lower = lo ? *lo : Real(0);
  Real upper = hi ? *hi : Real(0);
  if (!lo) {
    auto [x, bound] = tail_cut(g, mode, -1, abs_tol / 8);
    lower = x;
    out.error += bound;
  }
  if (!hi) {
    auto [x, bound] = tail_cut(g, mode, 1, abs_tol / 8);
    upper = x;
    out.error += bound;
  }
  for (const auto& [a, b] : {std::pair{lower, mode}, std::pair{mode, upper}}) {
    if (!(a < b)) continue;
    const auto piece = tanh_sinh(f, a, b, abs_tol / 4, max_levels);
    out.value += piece.value;
    out.error += piece.error;
    out.evaluations += piece.evaluations;
    out.levels = std::max(out.levels, piece.levels);
  }
  return out;
}

}  // namespace momentlab::quadrature
