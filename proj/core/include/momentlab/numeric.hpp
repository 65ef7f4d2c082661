#pragma once

// Scalar types shared by every module: exact integers and rationals (GMP) and
// runtime-precision binary floating point (MPFR through Boost.Multiprecision).

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace momentlab {

using BigInt = mpz_class;
using BigRational = mpq_class;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Working precision for approximate computations.
struct Precision {
  unsigned bits = 128;
  double abs_tol = 1e-20;

  void validate() const;
};

/// Sets the default precision of newly created Real values for the lifetime of the
/// object and restores the previous setting afterwards. The setting is process-wide.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

/// Current default precision of Real in bits.
unsigned current_precision_bits();

Real to_real(const BigRational& q);
Real to_real(const BigInt& z);
BigRational pow(const BigRational& base, unsigned long exponent);

/// "p" for integers, "p/q" otherwise; lossless.
std::string to_string(const BigRational& q);
std::string to_string(const BigInt& z);
/// Scientific notation with enough digits to round-trip at the value's precision.
std::string to_string(const Real& x);
std::string to_string(const Real& x, int significant_digits);

/// Accepts "p", "p/q", and decimal literals such as "-1.4" or "2.5e-3";
/// decimal literals are converted exactly. Throws InputError on anything else.
BigRational parse_rational(std::string_view text);
/// Accepts "p" and "p/q" only.
BigRational parse_exact_rational(std::string_view text);
/// Parses a decimal literal at the current default precision.
Real parse_real(std::string_view text);

int sign(const BigRational& q);
int sign(const Real& x);

/// Embeds rational constants into a coefficient ring. Specialised for every type
/// the generic moment kernels are instantiated with.
template <class T>
struct RingTraits;

template <>
struct RingTraits<BigRational> {
  static BigRational from(const BigRational& q) { return q; }
};

template <>
struct RingTraits<Real> {
  static Real from(const BigRational& q) { return to_real(q); }
};

template <class T>
T ring_from(const BigRational& q) {
  return RingTraits<T>::from(q);
}

template <class T>
T ring_from(long v) {
  return RingTraits<T>::from(BigRational(v));
}

}  // namespace momentlab
