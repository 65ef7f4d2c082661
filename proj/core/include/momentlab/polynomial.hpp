#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "momentlab/numeric.hpp"

namespace momentlab {

/// Univariate polynomial in the semigroup parameter t with exact rational coefficients,
/// stored in ascending degree. The zero polynomial has no coefficients.
class TPolynomial {
 public:
  TPolynomial() = default;
  explicit TPolynomial(std::vector<BigRational> coefficients);
  TPolynomial(const BigRational& constant);  // NOLINT(google-explicit-constructor)

  static TPolynomial t();
  /// C^t_j = t(t-1)...(t-j+1)/j! expanded in powers of t.
  static TPolynomial binomial_in_t(unsigned j);

  const std::vector<BigRational>& coefficients() const { return coeffs_; }
  /// Coefficient of t^i (zero beyond the degree).
  BigRational coefficient(std::size_t i) const;
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  BigRational evaluate(const BigRational& t) const;
  Real evaluate(const Real& t) const;

  TPolynomial& operator+=(const TPolynomial& rhs);
  TPolynomial& operator-=(const TPolynomial& rhs);
  TPolynomial& operator*=(const TPolynomial& rhs);
  TPolynomial& operator*=(const BigRational& rhs);

  friend TPolynomial operator+(TPolynomial a, const TPolynomial& b) { return a += b; }
  friend TPolynomial operator-(TPolynomial a, const TPolynomial& b) { return a -= b; }
  friend TPolynomial operator*(TPolynomial a, const TPolynomial& b) { return a *= b; }
  friend TPolynomial operator*(TPolynomial a, const BigRational& b) { return a *= b; }
  friend bool operator==(const TPolynomial& a, const TPolynomial& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<BigRational> coeffs_;
};

/// Sparse multivariate polynomial over the rationals. Used for exact symbolic identity
/// checks (bivariate semigroup laws, identities in symbolic moments).
class MultiPolynomial {
 public:
  using Exponents = std::vector<unsigned>;  // trailing zeros trimmed

  MultiPolynomial() = default;
  MultiPolynomial(const BigRational& constant);  // NOLINT(google-explicit-constructor)
  MultiPolynomial(long constant) : MultiPolynomial(BigRational(constant)) {}  // NOLINT

  static MultiPolynomial variable(std::size_t index);
  static MultiPolynomial monomial(const BigRational& coeff, Exponents exponents);

  const std::map<Exponents, BigRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  BigRational coefficient(Exponents exponents) const;

  BigRational evaluate(std::span<const BigRational> values) const;

  MultiPolynomial& operator+=(const MultiPolynomial& rhs);
  MultiPolynomial& operator-=(const MultiPolynomial& rhs);
  MultiPolynomial& operator*=(const MultiPolynomial& rhs);

  friend MultiPolynomial operator+(MultiPolynomial a, const MultiPolynomial& b) { return a += b; }
  friend MultiPolynomial operator-(MultiPolynomial a, const MultiPolynomial& b) { return a -= b; }
  friend MultiPolynomial operator-(const MultiPolynomial& a) { return MultiPolynomial() - a; }
  friend MultiPolynomial operator*(MultiPolynomial a, const MultiPolynomial& b) { return a *= b; }
  friend bool operator==(const MultiPolynomial& a, const MultiPolynomial& b) { return a.terms_ == b.terms_; }

  std::string to_string() const;

 private:
  static void normalize(Exponents& e);
  void add_term(Exponents e, const BigRational& c);
  std::map<Exponents, BigRational> terms_;
};

/// p(x) for a univariate polynomial p and a multivariate argument x (Horner).
MultiPolynomial substitute(const TPolynomial& p, const MultiPolynomial& x);

template <>
struct RingTraits<MultiPolynomial> {
  static MultiPolynomial from(const BigRational& q) { return MultiPolynomial(q); }
};

template <>
struct RingTraits<TPolynomial> {
  static TPolynomial from(const BigRational& q) { return TPolynomial(q); }
};

}  // namespace momentlab
