#include "momentlab/moment_algebra.hpp"

#include <algorithm>

namespace momentlab::algebra {

namespace {

unsigned combined_bits(const ScalarSequence& a, const ScalarSequence& b) {
  if (a.is_exact()) return b.precision_bits();
  if (b.is_exact()) return a.precision_bits();
  return std::min(a.precision_bits(), b.precision_bits());
}

template <class F>
MomentSequence binary_op(const MomentSequence& a, const MomentSequence& b, F&& op) {
  if (a.is_exact() && b.is_exact()) {
    return MomentSequence::exact(op(std::span<const BigRational>(a.exact_values()), std::span<const BigRational>(b.exact_values())));
  }
  const unsigned bits = combined_bits(a, b);
  PrecisionScope scope(bits);
  const auto av = a.approx_values();
  const auto bv = b.approx_values();
  return MomentSequence::approximate(op(std::span<const Real>(av), std::span<const Real>(bv)), bits);
}

}  // namespace

MomentSequence classical_convolve(const MomentSequence& a, const MomentSequence& b, std::size_t upto) {
  return binary_op(a, b, [upto](auto x, auto y) { return kernels::classical_convolve(x, y, upto); });
}

MomentSequence mb_compose_integer(const MomentSequence& m, unsigned k, std::size_t upto) {
  if (m.is_exact()) {
    return MomentSequence::exact(kernels::mb_compose_integer(std::span<const BigRational>(m.exact_values()), k, upto));
  }
  PrecisionScope scope(m.precision_bits());
  const auto v = m.approx_values();
  return MomentSequence::approximate(kernels::mb_compose_integer(std::span<const Real>(v), k, upto), m.precision_bits());
}

std::vector<TPolynomial> mb_compose_t(const MomentSequence& m, std::size_t upto) {
  if (!m.is_exact()) throw BackendError("mb_compose_t: symbolic t-composition requires exact moments");
  const auto s = kernels::composition_sum_table(std::span<const BigRational>(m.exact_values()), upto);
  std::vector<TPolynomial> out;
  out.reserve(upto + 1);
  out.emplace_back(BigRational(1));
  for (std::size_t n = 1; n <= upto; ++n) {
    TPolynomial p;
    for (std::size_t j = 1; j <= n; ++j) p += TPolynomial::binomial_in_t(static_cast<unsigned>(j)) * s[n][j];
    out.push_back(std::move(p));
  }
  return out;
}

MomentSequence evaluate_at(const std::vector<TPolynomial>& polys, const BigRational& t) {
  std::vector<BigRational> values;
  values.reserve(polys.size());
  for (const auto& p : polys) values.push_back(p.evaluate(t));
  return MomentSequence::exact(std::move(values));
}

CumulantSequence cumulants_from_moments(const MomentSequence& m) {
  if (m.is_exact()) return CumulantSequence::exact(kernels::cumulants_from_moments(std::span<const BigRational>(m.exact_values())));
  PrecisionScope scope(m.precision_bits());
  const auto v = m.approx_values();
  return CumulantSequence::approximate(kernels::cumulants_from_moments(std::span<const Real>(v)), m.precision_bits());
}

MomentSequence moments_from_cumulants(const CumulantSequence& k) {
  if (k.is_exact()) return MomentSequence::exact(kernels::moments_from_cumulants(std::span<const BigRational>(k.exact_values())));
  PrecisionScope scope(k.precision_bits());
  const auto v = k.approx_values();
  return MomentSequence::approximate(kernels::moments_from_cumulants(std::span<const Real>(v)), k.precision_bits());
}

MomentSequence levy_moments_at_t(const CumulantSequence& k, const BigRational& t) {
  if (k.is_exact()) return MomentSequence::exact(kernels::levy_moments(std::span<const BigRational>(k.exact_values()), t));
  PrecisionScope scope(k.precision_bits());
  const auto v = k.approx_values();
  return MomentSequence::approximate(kernels::levy_moments(std::span<const Real>(v), to_real(t)), k.precision_bits());
}

BooleanCumulantSequence boolean_cumulants_from_moments(const MomentSequence& m) {
  if (m.is_exact()) {
    return BooleanCumulantSequence::exact(kernels::boolean_cumulants_from_moments(std::span<const BigRational>(m.exact_values())));
  }
  PrecisionScope scope(m.precision_bits());
  const auto v = m.approx_values();
  return BooleanCumulantSequence::approximate(kernels::boolean_cumulants_from_moments(std::span<const Real>(v)),
                                              m.precision_bits());
}

MomentSequence moments_from_boolean_cumulants(const BooleanCumulantSequence& b) {
  if (b.is_exact()) return MomentSequence::exact(kernels::moments_from_boolean_cumulants(std::span<const BigRational>(b.exact_values())));
  PrecisionScope scope(b.precision_bits());
  const auto v = b.approx_values();
  return MomentSequence::approximate(kernels::moments_from_boolean_cumulants(std::span<const Real>(v)), b.precision_bits());
}

MomentSequence boolean_convolve(const MomentSequence& a, const MomentSequence& b, std::size_t upto) {
  return binary_op(a, b, [upto](auto x, auto y) { return kernels::boolean_convolve(x, y, upto); });
}

MomentSequence boolean_power_t(const MomentSequence& m, const BigRational& t, std::size_t upto) {
  if (t < 0) throw InputError("boolean_power_t: t must be non-negative");
  if (m.is_exact()) return MomentSequence::exact(kernels::boolean_power(std::span<const BigRational>(m.exact_values()), t, upto));
  PrecisionScope scope(m.precision_bits());
  const auto v = m.approx_values();
  return MomentSequence::approximate(kernels::boolean_power(std::span<const Real>(v), to_real(t), upto), m.precision_bits());
}

}  // namespace momentlab::algebra
