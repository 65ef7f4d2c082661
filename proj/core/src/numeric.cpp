#include "momentlab/numeric.hpp"

#include <cctype>
#include <cmath>
#include <ios>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return all_digits(s);
}

BigInt parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return BigInt(std::string(s), 10);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void Precision::validate() const {
  if (bits < 64) throw InputError("working precision must be at least 64 bits");
  if (!(abs_tol > 0.0)) throw InputError("quadrature tolerance must be positive");
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(Real::default_precision()) {
  Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

unsigned current_precision_bits() {
  return static_cast<unsigned>(std::floor(Real::default_precision() / 0.30102999566398120));
}

Real to_real(const BigRational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real to_real(const BigInt& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

BigRational pow(const BigRational& base, unsigned long exponent) {
  BigInt num;
  BigInt den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  BigRational out(num, den);
  out.canonicalize();
  return out;
}

std::string to_string(const BigRational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

std::string to_string(const Real& x) { return to_string(x, static_cast<int>(x.precision())); }

std::string to_string(const Real& x, int significant_digits) {
  return x.str(significant_digits, std::ios_base::scientific);
}

BigRational parse_exact_rational(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_literal(s)) throw InputError("not an exact rational: '" + std::string(text) + "'");
    return BigRational(parse_integer(s));
  }
  const auto num = s.substr(0, slash);
  const auto den = s.substr(slash + 1);
  if (!is_integer_literal(num) || !all_digits(den)) {
    throw InputError("not an exact rational: '" + std::string(text) + "'");
  }
  BigInt d = parse_integer(den);
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  BigRational q(parse_integer(num), d);
  q.canonicalize();
  return q;
}

BigRational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.find('/') != std::string_view::npos || is_integer_literal(s)) return parse_exact_rational(s);

  // Decimal literal: [sign] digits [. digits] [(e|E) [sign] digits]
  std::string_view rest = s;
  bool negative = false;
  if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  long exponent = 0;
  const auto epos = rest.find_first_of("eE");
  if (epos != std::string_view::npos) {
    const auto exp_text = rest.substr(epos + 1);
    if (!is_integer_literal(exp_text)) throw InputError("malformed number: '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp_text));
    rest = rest.substr(0, epos);
  }
  std::string digits;
  const auto dot = rest.find('.');
  std::string_view int_part = rest.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
  if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw InputError("malformed number: '" + std::string(text) + "'");
  }
  digits.append(int_part);
  digits.append(frac_part);
  exponent -= static_cast<long>(frac_part.size());
  BigInt mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  BigRational q = exponent < 0 ? BigRational(mantissa, scale) : BigRational(mantissa * scale);
  q.canonicalize();
  return q;
}

Real parse_real(std::string_view text) {
  const std::string s(trim(text));
  try {
    return Real(s);
  } catch (const std::exception&) {
    throw InputError("malformed real number: '" + s + "'");
  }
}

int sign(const BigRational& q) { return sgn(q); }

int sign(const Real& x) { return x.sign(); }

}  // namespace momentlab
