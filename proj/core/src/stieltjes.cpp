#include "momentlab/stieltjes.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "momentlab/determinant.hpp"
#include "momentlab/errors.hpp"

namespace momentlab::stieltjes {

namespace {

std::pair<BigRational, int> det_with_sign(const SquareMatrix<BigRational>& m, const SignOptions&) {
  BigRational d = determinant(m);
  return {d, sgn(d)};
}

std::pair<Real, int> det_with_sign(const SquareMatrix<Real>& m, const SignOptions& opts) {
  Real d = determinant(m);
  const Real scale = hadamard_bound(m);
  if (abs(d) <= scale * opts.relative_tolerance) return {d, 0};
  return {d, d.sign()};
}

/// Three-way comparison; approximate values within the relative tolerance compare equal.
int compare(const BigRational& a, const BigRational& b, const SignOptions&) { return cmp(a, b) < 0 ? -1 : (cmp(a, b) > 0 ? 1 : 0); }

int compare(const Real& a, const Real& b, const SignOptions& opts) {
  const Real diff = a - b;
  const Real scale = abs(a) > abs(b) ? abs(a) : abs(b);
  if (abs(diff) <= scale * opts.relative_tolerance) return 0;
  return diff.sign();
}

int sign_of(const BigRational& v, const SignOptions&) { return sgn(v); }
int sign_of(const Real& v, const SignOptions&) { return v.sign(); }

BigRational power(const BigRational& base, unsigned long e) { return momentlab::pow(base, e); }
Real power(const Real& base, unsigned long e) { return pow(base, static_cast<long>(e)); }

template <class T>
T zero() {
  return T(0);
}

}  // namespace

void check_query(std::size_t sequence_length, const HankelQuery& q) {
  if (sequence_length == 0 || q.last_index() >= sequence_length) {
    throw InputError("Hankel query (shift " + std::to_string(q.shift) + ", size " + std::to_string(q.size) +
                     ") needs index " + std::to_string(q.last_index()) + " but the sequence ends at " +
                     std::to_string(sequence_length == 0 ? 0 : sequence_length - 1));
  }
}

template <class T>
T hankel_det(std::span<const T> a, const HankelQuery& q) {
  check_query(a.size(), q);
  return determinant(hankel_matrix(a, q.shift, q.size));
}

BigRational hankel_det(const MomentSequence& m, const HankelQuery& q) {
  return hankel_det(std::span<const BigRational>(m.exact_values()), q);
}

template <class T>
DeterminantRecord<T> signed_hankel_det(std::span<const T> a, const HankelQuery& q, const SignOptions& opts) {
  check_query(a.size(), q);
  auto [value, s] = det_with_sign(hankel_matrix(a, q.shift, q.size), opts);
  return {q, std::move(value), s};
}

template <class T>
StieltjesVerdict<T> stieltjes_verdict(std::span<const T> a, std::size_t upto, const SignOptions& opts) {
  if (a.empty() || 2 * upto >= a.size()) {
    throw InputError("stieltjes_verdict: depth " + std::to_string(upto) + " needs moments up to index " +
                     std::to_string(2 * upto));
  }
  StieltjesVerdict<T> out;
  out.requested_depth = upto;
  std::optional<DeterminantRecord<T>> first_negative;
  std::optional<DeterminantRecord<T>> first_zero;
  for (std::size_t m = 0; m <= upto; ++m) {
    for (std::size_t shift = 0; shift <= 1; ++shift) {
      const HankelQuery q{shift, m};
      if (q.last_index() >= a.size()) continue;
      auto rec = signed_hankel_det(a, q, opts);
      if (shift == 0) {
        out.depth_shift0 = m;
      } else {
        out.depth_shift1 = m;
      }
      if (rec.sign < 0 && !first_negative) first_negative = rec;
      if (rec.sign == 0 && !first_zero) first_zero = rec;
      out.determinants.push_back(std::move(rec));
    }
  }
  if (first_negative) {
    out.kind = Definiteness::not_stieltjes;
    out.witness = std::move(first_negative);
  } else if (first_zero) {
    out.kind = Definiteness::semi_definite;
    out.witness = std::move(first_zero);
  } else {
    out.kind = Definiteness::strictly_positive;
  }
  return out;
}

template <class T>
FeketeResult<T> fekete_total_positivity(std::span<const T> a, const HankelQuery& q, const SignOptions& opts) {
  check_query(a.size(), q);
  FeketeResult<T> out;
  out.query = q;
  const std::size_t dim = q.size + 1;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<T, int>> cache;  // (offset, order) -> det
  std::optional<FeketeMinor<T>> first_negative;
  std::optional<FeketeMinor<T>> first_zero;
  for (std::size_t order = 1; order <= dim; ++order) {
    for (std::size_t row = 0; row + order <= dim; ++row) {
      for (std::size_t col = 0; col + order <= dim; ++col) {
        const std::size_t offset = q.shift + row + col;
        auto it = cache.find({offset, order});
        if (it == cache.end()) {
          auto [value, s] = det_with_sign(hankel_matrix(a, offset, order - 1), opts);
          it = cache.emplace(std::make_pair(offset, order), std::make_pair(std::move(value), s)).first;
        }
        ++out.minors_checked;
        const auto& [value, s] = it->second;
        if (s < 0 && !first_negative) first_negative = FeketeMinor<T>{row, col, order, value, s};
        if (s == 0 && !first_zero) first_zero = FeketeMinor<T>{row, col, order, value, s};
      }
    }
  }
  out.determinants_evaluated = cache.size();
  if (first_negative) {
    out.kind = TotalPositivity::not_tp;
    out.witness = std::move(first_negative);
  } else if (first_zero) {
    out.kind = TotalPositivity::semi_definite;
    out.witness = std::move(first_zero);
  } else {
    out.kind = TotalPositivity::strictly_tp;
  }
  return out;
}

namespace {

template <class T>
void finish_series(RatioSeries<T>& s, const SignOptions& opts) {
  if (s.values.empty()) return;
  bool all_positive = true;
  for (const auto& v : s.values) {
    if (!v || sign_of(*v, opts) <= 0) all_positive = false;
  }
  if (!all_positive) {
    s.appears_bounded_away = false;
    return;
  }
  const std::size_t mid = (s.values.size() - 1) / 2;
  const T half_mid = *s.values[mid] / T(2);
  s.appears_bounded_away = compare(*s.values.back(), half_mid, opts) >= 0;
}

}  // namespace

template <class T>
IndeterminacyReport<T> indeterminacy_ratios(std::span<const T> a, std::size_t upto, const SignOptions& opts) {
  if (upto < 1 || 2 * upto + 1 >= a.size()) {
    throw InputError("indeterminacy_ratios: depth " + std::to_string(upto) + " needs moments up to index " +
                     std::to_string(2 * upto + 1));
  }
  IndeterminacyReport<T> out;
  out.depth = upto;
  for (std::size_t n = 1; n <= upto; ++n) {
    for (std::size_t shift = 0; shift <= 1; ++shift) {
      auto& series = shift == 0 ? out.shift0 : out.shift1;
      const auto num = signed_hankel_det(a, HankelQuery{shift, n}, opts);
      const auto den = signed_hankel_det(a, HankelQuery{shift + 2, n - 1}, opts);
      if (den.sign == 0) {
        series.values.push_back(std::nullopt);
        series.degenerate = true;
      } else {
        series.values.push_back(T(num.value / den.value));
        if (num.sign == 0) series.degenerate = true;
      }
    }
  }
  finish_series(out.shift0, opts);
  finish_series(out.shift1, opts);
  return out;
}

template <class T>
C1Report<T> c1_sequence(std::span<const T> a, std::size_t upto, const SignOptions& opts) {
  if (upto < 1 || 2 * upto + 1 >= a.size()) {
    throw InputError("c1_sequence: depth " + std::to_string(upto) + " needs moments up to index " +
                     std::to_string(2 * upto + 1));
  }
  C1Report<T> out;
  out.depth = upto;
  out.mu1 = a[1];
  std::optional<T> previous;
  for (std::size_t d = 1; d <= upto; ++d) {
    auto h = hankel_matrix(a, 1, d);
    h(0, 0) = zero<T>();
    const auto [det_at_zero, ignored] = det_with_sign(h, opts);
    const auto cofactor = signed_hankel_det(a, HankelQuery{3, d - 1}, opts);
    if (cofactor.sign == 0) {
      out.values.push_back(std::nullopt);
      out.degenerate = true;
      continue;
    }
    T root = -det_at_zero / cofactor.value;
    if (previous && compare(root, *previous, opts) < 0) out.monotone_nondecreasing = false;
    if (compare(root, out.mu1, opts) >= 0) out.strictly_below_mu1 = false;
    previous = root;
    out.values.push_back(std::move(root));
  }
  return out;
}

template <class T>
LogConvexityReport<T> log_convexity_report(std::span<const T> a, const SignOptions& opts) {
  if (a.size() < 3) throw InputError("log_convexity_report: need moments up to index 2 at least");
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (sign_of(a[n], opts) <= 0) throw InputError("log_convexity_report: moment " + std::to_string(n) + " is not positive");
  }
  LogConvexityReport<T> out;
  const std::size_t last = a.size() - 2;  // theta_n defined for n = 1..N-1
  for (std::size_t n = 1; n <= last; ++n) out.theta.push_back(T(a[n] * a[n] / (a[n - 1] * a[n + 1])));
  out.sup_index = 1;
  out.theta_sup = out.theta[0];
  for (std::size_t n = 1; n <= last; ++n) {
    if (compare(out.theta[n - 1], out.theta_sup, opts) > 0) {
      out.theta_sup = out.theta[n - 1];
      out.sup_index = n;
    }
  }
  const std::size_t tail_count = (last + 1) / 2;
  out.tail_from = last - tail_count + 1;
  out.tail_to = last;
  out.tail_sup = out.theta[out.tail_from - 1];
  for (std::size_t n = out.tail_from; n <= last; ++n) {
    if (compare(out.theta[n - 1], out.tail_sup, opts) > 0) out.tail_sup = out.theta[n - 1];
  }
  const int c = compare(out.theta_sup, T(1), opts);
  out.verdict = c < 0 ? LogConvexity::strictly_log_convex : (c == 0 ? LogConvexity::log_convex : LogConvexity::not_log_convex);
  return out;
}

template <class T>
C46Result<T> c46_check(std::span<const T> a, const T& theta, const SignOptions& opts) {
  C46Result<T> out;
  const auto report = log_convexity_report(a, opts);
  for (std::size_t n = 1; n <= report.theta.size(); ++n) {
    if (compare(report.theta[n - 1], theta, opts) > 0) {
      out.status = C46Status::precondition_failed;
      out.precondition_index = n;
      return out;
    }
  }
  for (std::size_t n = 2; n < a.size(); ++n) {
    for (std::size_t k = 1; k < n; ++k) {
      T lhs = a[k] * a[n - k] / a[n];
      T rhs = power(theta, static_cast<unsigned long>(k * (n - k)));
      ++out.pairs_checked;
      const int c = compare(lhs, rhs, opts);
      if (c == 0) ++out.equalities;
      if (c > 0 && !out.first_violation) out.first_violation = C46Violation<T>{k, n, std::move(lhs), std::move(rhs)};
    }
  }
  out.status = out.first_violation ? C46Status::violated : C46Status::holds;
  return out;
}

#define MOMENTLAB_INSTANTIATE(T)                                                                                         \
  template T hankel_det<T>(std::span<const T>, const HankelQuery&);                                                      \
  template DeterminantRecord<T> signed_hankel_det<T>(std::span<const T>, const HankelQuery&, const SignOptions&);        \
  template StieltjesVerdict<T> stieltjes_verdict<T>(std::span<const T>, std::size_t, const SignOptions&);                \
  template FeketeResult<T> fekete_total_positivity<T>(std::span<const T>, const HankelQuery&, const SignOptions&);       \
  template IndeterminacyReport<T> indeterminacy_ratios<T>(std::span<const T>, std::size_t, const SignOptions&);          \
  template C1Report<T> c1_sequence<T>(std::span<const T>, std::size_t, const SignOptions&);                              \
  template LogConvexityReport<T> log_convexity_report<T>(std::span<const T>, const SignOptions&);                        \
  template C46Result<T> c46_check<T>(std::span<const T>, const T&, const SignOptions&);

MOMENTLAB_INSTANTIATE(BigRational)
MOMENTLAB_INSTANTIATE(Real)

#undef MOMENTLAB_INSTANTIATE

}  // namespace momentlab::stieltjes
