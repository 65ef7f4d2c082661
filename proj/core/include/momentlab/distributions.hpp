#pragma once

// Moment and pmf generators: lognormal and its censored variants, the exact lattice family
// r^n q^{n^2}, the discrete lattice law with lognormal moments, and mixed-Poisson pmfs.
//
// Approximate results are computed at Precision::bits and carry per-entry absolute error
// bounds from the quadrature.

#include <cstddef>
#include <optional>
#include <vector>

#include "momentlab/moment_sequence.hpp"
#include "momentlab/numeric.hpp"

namespace momentlab::distributions {

/// log Y ~ N(alpha, sigma2).
struct LognormalSpec {
  BigRational alpha{0};
  BigRational sigma2{1};

  void validate() const;
};

enum class CensorKind { left_truncate, gap, right_truncate };
enum class MassDisposition { to_origin, redistribute };

/// Removal of the mass over an interval. Left truncation and gaps move the mass to the origin;
/// right truncation redistributes it over [0, c) and has no moment operation.
struct CensorSpec {
  CensorKind kind = CensorKind::left_truncate;
  BigRational log_b;  // left_truncate, in log space
  BigRational a, b;   // gap (0 < a < b)
  BigRational c;      // right_truncate
  MassDisposition disposition = MassDisposition::to_origin;

  static CensorSpec left_truncate(BigRational log_b);
  static CensorSpec gap(BigRational a, BigRational b);
  static CensorSpec right_truncate(BigRational c);
  void validate() const;
};

/// Lattice pmf p_0..p_K with absolute error bounds. tail_mass = 1 - sum p_k.
struct DiscretePMF {
  std::vector<Real> masses;
  std::vector<Real> abs_errors;
  Real tail_mass = 0;
  Real tail_error = 0;
  /// The tail mass beyond K is above the requested tolerance.
  bool tail_flag = false;
  unsigned bits = 0;
};

/// Psi(x) = integral_x^inf exp(-u^2/2) du = sqrt(pi/2) erfc(x/sqrt 2), at the current precision.
Real psi(const Real& x);
Real psi(const BigRational& x, const Precision& p);
/// Standard normal distribution function.
Real normal_cdf(const Real& x);

/// mu_n = exp(n alpha + n^2 sigma2 / 2).
MomentSequence lognormal_moments(const LognormalSpec& s, std::size_t upto, const Precision& p);

struct QuadratureMoments {
  std::vector<Real> values;
  std::vector<Real> abs_errors;
};

/// integral of exp(n u) against the N(alpha, sigma2) density over (lo, hi) in log space, n = 0..upto.
QuadratureMoments log_space_moments(const LognormalSpec& s, const std::optional<Real>& lo, const std::optional<Real>& hi,
                                    std::size_t upto, const Precision& p);

/// mu_n = r^n q^{n^2}, exact.
MomentSequence lattice_lognormal_moments(const BigInt& q, const BigRational& r, std::size_t upto);

struct TruncatedMomentsReport {
  /// Quadrature values with mu_0 = 1 (the removed mass sits at the origin).
  MomentSequence moments;
  /// integral_{log b}^inf e^{nu} dN(alpha, sigma2)(u); entry 0 is the retained mass.
  std::vector<Real> quadrature;
  std::vector<Real> abs_errors;
  /// m_n Psi(z0 - n sigma) / sqrt(2 pi), z0 = (log b - alpha)/sigma.
  std::vector<Real> psi_form;
  /// m_n Psi(z0 - n sigma) / Psi(z0).
  std::vector<Real> psi_ratio_form;
  std::vector<Real> psi_form_difference;
  std::vector<Real> psi_ratio_form_difference;
  Real moved_mass;
};

TruncatedMomentsReport truncated_lognormal_moments(const LognormalSpec& s, const CensorSpec& c, std::size_t upto,
                                                   const Precision& p);

struct GapMomentsReport {
  /// m_n minus the removed contribution, n >= 1; mu_0 = 1.
  MomentSequence moments;
  /// integral_a^b y^n dmu(y), n = 0..upto.
  std::vector<Real> removed;
  std::vector<Real> abs_errors;
  /// Lognormal distribution function difference F(b) - F(a), the oracle for removed[0].
  Real removed_mass_cdf;
};

GapMomentsReport gap_censored_lognormal_moments(const LognormalSpec& s, const BigRational& a, const BigRational& b,
                                                std::size_t upto, const Precision& p);

struct LeipnikReport {
  MomentSequence moments;
  /// Lattice points and normalised weights for k = -n_cut..n_cut.
  std::vector<Real> points;
  std::vector<Real> weights;
  std::size_t n_cut = 0;
  /// Bound on the relative truncation error of every returned moment.
  Real relative_tail_bound;
  Real weight_sum;
};

/// Weights proportional to a^{-k} exp(-k^2 sigma2 / 2) at the points e^alpha a e^{k sigma2}.
/// n_cut is the smallest lattice radius whose Gaussian tail bound is below abs_tol.
LeipnikReport leipnik_discrete_moments(const BigRational& sigma2, const BigRational& alpha, std::size_t upto,
                                       const Precision& p, const BigRational& a = 1);

/// Poisson law with intensity N e^X, X ~ N(alpha, sigma2) left-truncated at log_b with the cut
/// mass put on intensity 0.
struct MixedPoissonSpec {
  LognormalSpec intensity;
  std::optional<BigRational> log_b;
  unsigned long N = 1;
};

/// p_0..p_{kmax}. tail_flag is set when 1 - sum p_k exceeds abs_tol beyond its error bound.
DiscretePMF mixed_poisson_pmf(const MixedPoissonSpec& s, std::size_t kmax, const Precision& p);

/// Moments of Poisson(lambda): Touchard polynomials, exact.
MomentSequence poisson_moments(const BigRational& lambda, std::size_t upto);
DiscretePMF poisson_pmf(const BigRational& lambda, std::size_t kmax, const Precision& p);
/// (1 - rho) rho^k, exact.
std::vector<BigRational> geometric_pmf(const BigRational& rho, std::size_t kmax);

}  // namespace momentlab::distributions
