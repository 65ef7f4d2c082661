#include "momentlab/divisibility.hpp"

#include "momentlab/errors.hpp"

namespace momentlab::divisibility {

namespace {

Real ulp_allowance(const Real& v) { return abs(v) * ldexp(Real(1), 4 - static_cast<int>(current_precision_bits())); }

}  // namespace

KattiReport katti_r(const distributions::DiscretePMF& p, std::size_t kmax) {
  if (p.masses.size() < kmax + 2) throw InputError("katti_r: the pmf must be given up to index kmax+1");
  if (p.abs_errors.size() != p.masses.size()) throw InputError("katti_r: abs_errors must match masses");
  PrecisionScope scope(p.bits ? p.bits : current_precision_bits());
  const auto& m = p.masses;
  const auto& e = p.abs_errors;
  if (!(m[0] - e[0] > 0)) throw InputError("katti_r: p_0 must be positive beyond its error bound");

  KattiReport out;
  for (std::size_t j = 0; j <= kmax; ++j) {
    const Real jj(static_cast<unsigned long>(j + 1));
    Real x = jj * m[j + 1];
    Real xi = jj * e[j + 1];
    Real magnitude = abs(x);
    for (std::size_t k = 0; k < j; ++k) {
      const Real& pk = m[j - k];
      const Real& ek = e[j - k];
      const Real term = pk * out.r[k];
      x -= term;
      xi += abs(pk) * out.radius[k] + ek * abs(out.r[k]) + ek * out.radius[k];
      magnitude += abs(term);
    }
    xi += ulp_allowance(magnitude);
    const Real mid = x / m[0];
    Real rad = (xi * m[0] + abs(x) * e[0]) / (m[0] * (m[0] - e[0]));
    rad += ulp_allowance(mid);
    out.r.push_back(mid);
    out.radius.push_back(rad);
  }

  out.error_bound = 0;
  bool any_signed = false;
  for (std::size_t k = 0; k <= kmax; ++k) {
    if (out.radius[k] > out.error_bound) out.error_bound = out.radius[k];
    if (out.r[k] + out.radius[k] < 0) {
      out.certified_negative.push_back(k);
      if (!out.first_negative) out.first_negative = k;
    }
    if (abs(out.r[k]) > out.radius[k]) any_signed = true;
  }
  if (out.first_negative) {
    out.verdict = KattiVerdict::not_infinitely_divisible;
  } else if (any_signed) {
    out.verdict = KattiVerdict::no_certified_negative;
  } else {
    out.verdict = KattiVerdict::inconclusive;
  }
  return out;
}

ExactKattiReport katti_r_exact(std::span<const BigRational> p, std::size_t kmax) {
  if (p.size() < kmax + 2) throw InputError("katti_r: the pmf must be given up to index kmax+1");
  if (!(p[0] > 0)) throw InputError("katti_r: p_0 must be positive");
  ExactKattiReport out;
  for (std::size_t j = 0; j <= kmax; ++j) {
    BigRational x = BigRational(static_cast<unsigned long>(j + 1)) * p[j + 1];
    for (std::size_t k = 0; k < j; ++k) x -= p[j - k] * out.r[k];
    out.r.push_back(x / p[0]);
    if (out.r.back() < 0 && !out.first_negative) out.first_negative = j;
  }
  return out;
}

LogConvexPmfResult logconvex_pmf_check(std::span<const BigRational> p) {
  if (p.size() < 3) throw InputError("logconvex_pmf_check needs at least three masses");
  LogConvexPmfResult out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] < 0) throw InputError("pmf masses must be non-negative");
    if (p[k] == 0) {
      out.zero_index = k;
      out.verdict = LogConvexVerdict::inapplicable;
      return out;
    }
  }
  for (std::size_t k = 1; k + 1 < p.size(); ++k) {
    ++out.checked;
    if (p[k] * p[k] > p[k - 1] * p[k + 1]) {
      out.first_failure = k;
      out.verdict = LogConvexVerdict::no_conclusion;
      return out;
    }
  }
  out.verdict = LogConvexVerdict::certified_id;
  return out;
}

LogConvexPmfResult logconvex_pmf_check(const distributions::DiscretePMF& p) {
  if (p.masses.size() < 3) throw InputError("logconvex_pmf_check needs at least three masses");
  if (p.abs_errors.size() != p.masses.size()) throw InputError("logconvex_pmf_check: abs_errors must match masses");
  PrecisionScope scope(p.bits ? p.bits : current_precision_bits());
  const auto& m = p.masses;
  const auto& e = p.abs_errors;
  LogConvexPmfResult out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] + e[k] < 0) throw InputError("pmf masses must be non-negative");
    if (!(m[k] - e[k] > 0)) {
      out.zero_index = k;
      out.verdict = LogConvexVerdict::inapplicable;
      return out;
    }
  }
  for (std::size_t k = 1; k + 1 < m.size(); ++k) {
    ++out.checked;
    const Real upper = (m[k] + e[k]) * (m[k] + e[k]);
    const Real lower = (m[k - 1] - e[k - 1]) * (m[k + 1] - e[k + 1]);
    if (upper + ulp_allowance(upper) > lower - ulp_allowance(lower)) {
      out.first_failure = k;
      out.verdict = LogConvexVerdict::no_conclusion;
      return out;
    }
  }
  out.verdict = LogConvexVerdict::certified_id;
  return out;
}

std::string to_string(KattiVerdict v) {
  switch (v) {
    case KattiVerdict::not_infinitely_divisible: return "not_infinitely_divisible";
    case KattiVerdict::no_certified_negative: return "no_certified_negative";
    case KattiVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(LogConvexVerdict v) {
  switch (v) {
    case LogConvexVerdict::certified_id: return "certified_id";
    case LogConvexVerdict::no_conclusion: return "no_conclusion";
    case LogConvexVerdict::inapplicable: return "inapplicable";
  }
  return "?";
}

}  // namespace momentlab::divisibility
