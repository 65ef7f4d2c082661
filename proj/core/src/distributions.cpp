#include "momentlab/distributions.hpp"

#include <boost/math/constants/constants.hpp>

#include "momentlab/combinatorics.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/quadrature.hpp"

namespace momentlab::distributions {

namespace {

Real sqrt_two_pi() { return sqrt(2 * boost::math::constants::pi<Real>()); }

Real rounding_allowance(const Real& v) { return abs(v) * ldexp(Real(1), 8 - static_cast<int>(current_precision_bits())); }

Real ln(const BigRational& q) { return log(to_real(q)); }

}  // namespace

void LognormalSpec::validate() const {
  if (!(sigma2 > 0)) throw InputError("lognormal sigma2 must be positive");
}

CensorSpec CensorSpec::left_truncate(BigRational log_b) {
  CensorSpec c;
  c.kind = CensorKind::left_truncate;
  c.log_b = std::move(log_b);
  return c;
}

CensorSpec CensorSpec::gap(BigRational a, BigRational b) {
  CensorSpec c;
  c.kind = CensorKind::gap;
  c.a = std::move(a);
  c.b = std::move(b);
  c.validate();
  return c;
}

CensorSpec CensorSpec::right_truncate(BigRational c_) {
  CensorSpec c;
  c.kind = CensorKind::right_truncate;
  c.c = std::move(c_);
  c.disposition = MassDisposition::redistribute;
  c.validate();
  return c;
}

void CensorSpec::validate() const {
  switch (kind) {
    case CensorKind::left_truncate:
      if (disposition != MassDisposition::to_origin) throw InputError("left truncation moves the mass to the origin");
      break;
    case CensorKind::gap:
      if (!(a > 0 && a < b)) throw InputError("gap censoring needs 0 < a < b");
      if (disposition != MassDisposition::to_origin) throw InputError("gap censoring moves the mass to the origin");
      break;
    case CensorKind::right_truncate:
      if (!(c > 0)) throw InputError("right truncation needs c > 0");
      if (disposition != MassDisposition::redistribute) throw InputError("right truncation redistributes the mass over [0, c)");
      break;
  }
}

Real psi(const Real& x) {
  return sqrt(boost::math::constants::half_pi<Real>()) * erfc(x / boost::math::constants::root_two<Real>());
}

Real psi(const BigRational& x, const Precision& p) {
  p.validate();
  PrecisionScope scope(p.bits);
  return psi(to_real(x));
}

Real normal_cdf(const Real& x) { return erfc(-x / boost::math::constants::root_two<Real>()) / 2; }

MomentSequence lognormal_moments(const LognormalSpec& s, std::size_t upto, const Precision& p) {
  s.validate();
  p.validate();
  PrecisionScope scope(p.bits);
  const Real alpha = to_real(s.alpha);
  const Real sigma2 = to_real(s.sigma2);
  std::vector<Real> values;
  values.reserve(upto + 1);
  for (std::size_t n = 0; n <= upto; ++n) {
    const Real nn(static_cast<unsigned long>(n));
    values.push_back(exp(nn * alpha + nn * nn * sigma2 / 2));
  }
  return MomentSequence::approximate(std::move(values), p.bits);
}

QuadratureMoments log_space_moments(const LognormalSpec& s, const std::optional<Real>& lo, const std::optional<Real>& hi,
                                    std::size_t upto, const Precision& p) {
  s.validate();
  p.validate();
  PrecisionScope scope(p.bits);
  const Real alpha = to_real(s.alpha);
  const Real sigma2 = to_real(s.sigma2);
  const Real log_norm = log(sqrt(sigma2) * sqrt_two_pi());
  const Real tol(p.abs_tol);
  QuadratureMoments out;
  for (std::size_t n = 0; n <= upto; ++n) {
    const Real nn(static_cast<unsigned long>(n));
    quadrature::LogConcave g{
        [&](const Real& u) { return nn * u - (u - alpha) * (u - alpha) / (2 * sigma2) - log_norm; },
        [&](const Real& u) { return nn - (u - alpha) / sigma2; }};
    auto r = quadrature::integrate_log_concave(g, lo, hi, tol);
    out.values.push_back(r.value);
    out.abs_errors.push_back(r.error);
  }
  return out;
}

MomentSequence lattice_lognormal_moments(const BigInt& q, const BigRational& r, std::size_t upto) {
  if (q < 2) throw InputError("lattice family needs an integer q >= 2");
  if (!(r > 0)) throw InputError("lattice family needs r > 0");
  std::vector<BigRational> values;
  values.reserve(upto + 1);
  const BigRational qq(q);
  for (std::size_t n = 0; n <= upto; ++n) values.push_back(pow(r, n) * pow(qq, static_cast<unsigned long>(n * n)));
  return MomentSequence::exact(std::move(values));
}

TruncatedMomentsReport truncated_lognormal_moments(const LognormalSpec& s, const CensorSpec& c, std::size_t upto,
                                                   const Precision& p) {
  s.validate();
  c.validate();
  if (c.kind != CensorKind::left_truncate) throw InputError("truncated_lognormal_moments needs a left-truncation censor");
  p.validate();
  PrecisionScope scope(p.bits);
  const Real log_b = to_real(c.log_b);
  auto q = log_space_moments(s, log_b, std::nullopt, upto, p);

  const Real sigma = sqrt(to_real(s.sigma2));
  const Real z0 = (log_b - to_real(s.alpha)) / sigma;
  const auto full = lognormal_moments(s, upto, p).approx_values();
  const Real psi_z0 = psi(z0);

  TruncatedMomentsReport out;
  for (std::size_t n = 0; n <= upto; ++n) {
    const Real tail = psi(z0 - static_cast<unsigned long>(n) * sigma);
    out.psi_form.push_back(full[n] * tail / sqrt_two_pi());
    out.psi_ratio_form.push_back(full[n] * tail / psi_z0);
    out.psi_form_difference.push_back(q.values[n] - out.psi_form.back());
    out.psi_ratio_form_difference.push_back(q.values[n] - out.psi_ratio_form.back());
  }
  out.moved_mass = normal_cdf(z0);
  out.quadrature = q.values;
  out.abs_errors = q.abs_errors;
  auto values = q.values;
  values[0] = 1;
  out.abs_errors[0] = 0;
  out.moments = MomentSequence::approximate(std::move(values), p.bits);
  return out;
}

GapMomentsReport gap_censored_lognormal_moments(const LognormalSpec& s, const BigRational& a, const BigRational& b,
                                                std::size_t upto, const Precision& p) {
  s.validate();
  CensorSpec::gap(a, b);
  p.validate();
  PrecisionScope scope(p.bits);
  const Real la = ln(a);
  const Real lb = ln(b);
  auto removed = log_space_moments(s, la, lb, upto, p);
  const auto full = lognormal_moments(s, upto, p).approx_values();

  GapMomentsReport out;
  std::vector<Real> values(upto + 1);
  values[0] = 1;
  out.abs_errors.assign(upto + 1, Real(0));
  for (std::size_t n = 1; n <= upto; ++n) {
    values[n] = full[n] - removed.values[n];
    out.abs_errors[n] = removed.abs_errors[n] + rounding_allowance(full[n]);
  }
  const Real sigma = sqrt(to_real(s.sigma2));
  const Real alpha = to_real(s.alpha);
  out.removed_mass_cdf = normal_cdf((lb - alpha) / sigma) - normal_cdf((la - alpha) / sigma);
  out.removed = std::move(removed.values);
  out.moments = MomentSequence::approximate(std::move(values), p.bits);
  return out;
}

LeipnikReport leipnik_discrete_moments(const BigRational& sigma2, const BigRational& alpha, std::size_t upto,
                                       const Precision& p, const BigRational& a) {
  if (!(sigma2 > 0)) throw InputError("leipnik lattice needs sigma2 > 0");
  if (!(a > 0)) throw InputError("leipnik lattice needs a > 0");
  p.validate();
  PrecisionScope scope(p.bits);
  const Real s = to_real(sigma2);
  const Real log_a = ln(a);
  const Real c = abs(log_a);
  const Real tol(p.abs_tol);

  // Omitted terms a^{-j} e^{-j^2 s/2} with |j| >= M lie under the tangent of the concave
  // exponent at M, a geometric series on each side.
  std::size_t m = 1;
  Real bound;
  for (;; ++m) {
    const Real mm(static_cast<unsigned long>(m));
    if (mm * s <= c) continue;
    const Real one_side = exp(-mm * mm * s / 2 + c * mm) / (1 - exp(-(mm * s - c)));
    bound = 4 * one_side;
    if (bound < tol) break;
    if (m > 1000000) throw NumericalError("leipnik lattice: cut-off search failed");
  }

  LeipnikReport out;
  out.n_cut = upto + m;
  out.relative_tail_bound = bound;
  const long n_cut = static_cast<long>(out.n_cut);
  const Real shift = exp(to_real(alpha)) * to_real(a);
  Real z = 0;
  for (long k = -n_cut; k <= n_cut; ++k) {
    const Real kk(k);
    out.points.push_back(shift * exp(kk * s));
    out.weights.push_back(exp(-kk * log_a - kk * kk * s / 2));
    z += out.weights.back();
  }
  out.weight_sum = 0;
  for (auto& w : out.weights) {
    w /= z;
    out.weight_sum += w;
  }
  std::vector<Real> values(upto + 1, Real(0));
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    Real power = out.weights[i];
    for (std::size_t n = 0; n <= upto; ++n) {
      values[n] += power;
      power *= out.points[i];
    }
  }
  values[0] = 1;
  out.moments = MomentSequence::approximate(std::move(values), p.bits);
  return out;
}

DiscretePMF mixed_poisson_pmf(const MixedPoissonSpec& s, std::size_t kmax, const Precision& p) {
  s.intensity.validate();
  if (s.N < 1) throw InputError("mixed Poisson needs N >= 1");
  p.validate();
  PrecisionScope scope(p.bits);
  const Real alpha = to_real(s.intensity.alpha);
  const Real sigma2 = to_real(s.intensity.sigma2);
  const Real sigma = sqrt(sigma2);
  const Real big_n(s.N);
  const Real log_n = log(big_n);
  const Real log_norm = log(sigma * sqrt_two_pi());
  const Real tol(p.abs_tol);
  std::optional<Real> lo;
  if (s.log_b) lo = to_real(*s.log_b);

  DiscretePMF out;
  out.bits = p.bits;
  for (std::size_t k = 0; k <= kmax; ++k) {
    const Real kk(static_cast<unsigned long>(k));
    const Real constant = kk * log_n - log(to_real(combinatorics::factorial(static_cast<unsigned>(k)))) - log_norm;
    quadrature::LogConcave g{
        [&](const Real& x) { return constant + kk * x - big_n * exp(x) - (x - alpha) * (x - alpha) / (2 * sigma2); },
        [&](const Real& x) { return kk - big_n * exp(x) - (x - alpha) / sigma2; }};
    auto r = quadrature::integrate_log_concave(g, lo, std::nullopt, tol);
    out.masses.push_back(r.value);
    out.abs_errors.push_back(r.error);
  }
  if (lo) {
    const Real atom = normal_cdf((*lo - alpha) / sigma);
    out.masses[0] += atom;
    out.abs_errors[0] += rounding_allowance(atom);
  }
  Real total = 0;
  Real total_error = 0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    total += out.masses[k];
    total_error += out.abs_errors[k];
  }
  out.tail_mass = 1 - total;
  out.tail_error = total_error + rounding_allowance(Real(1));
  out.tail_flag = out.tail_mass - out.tail_error > tol;
  return out;
}

MomentSequence poisson_moments(const BigRational& lambda, std::size_t upto) {
  if (!(lambda > 0)) throw InputError("Poisson rate must be positive");
  std::vector<BigRational> values;
  for (std::size_t n = 0; n <= upto; ++n) {
    BigRational acc = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      acc += BigRational(combinatorics::stirling_subset(static_cast<unsigned>(n), static_cast<unsigned>(k))) * pow(lambda, k);
    }
    values.push_back(acc);
  }
  return MomentSequence::exact(std::move(values));
}

DiscretePMF poisson_pmf(const BigRational& lambda, std::size_t kmax, const Precision& p) {
  if (!(lambda > 0)) throw InputError("Poisson rate must be positive");
  p.validate();
  PrecisionScope scope(p.bits);
  const Real l = to_real(lambda);
  DiscretePMF out;
  out.bits = p.bits;
  Real term = exp(-l);
  Real total = 0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    if (k > 0) term = term * l / static_cast<unsigned long>(k);
    out.masses.push_back(term);
    out.abs_errors.push_back(rounding_allowance(term));
    total += term;
  }
  out.tail_mass = 1 - total;
  out.tail_error = rounding_allowance(Real(1));
  out.tail_flag = out.tail_mass - out.tail_error > Real(p.abs_tol);
  return out;
}

std::vector<BigRational> geometric_pmf(const BigRational& rho, std::size_t kmax) {
  if (!(rho > 0 && rho < 1)) throw InputError("geometric pmf needs 0 < rho < 1");
  std::vector<BigRational> out;
  BigRational term = 1 - rho;
  for (std::size_t k = 0; k <= kmax; ++k) {
    out.push_back(term);
    term *= rho;
  }
  return out;
}

}  // namespace momentlab::distributions
