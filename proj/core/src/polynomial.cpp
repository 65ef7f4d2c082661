#include "momentlab/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace momentlab {

TPolynomial::TPolynomial(std::vector<BigRational> coefficients) : coeffs_(std::move(coefficients)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

TPolynomial::TPolynomial(const BigRational& constant) {
  if (constant != 0) coeffs_.push_back(constant);
}

TPolynomial TPolynomial::t() { return TPolynomial(std::vector<BigRational>{0, 1}); }

TPolynomial TPolynomial::binomial_in_t(unsigned j) {
  TPolynomial out(BigRational(1));
  for (unsigned i = 0; i < j; ++i) {
    out *= TPolynomial(std::vector<BigRational>{BigRational(-static_cast<long>(i)), 1});
    out *= BigRational(1, i + 1);
  }
  return out;
}

BigRational TPolynomial::coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigRational(0); }

BigRational TPolynomial::evaluate(const BigRational& t) const {
  BigRational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Real TPolynomial::evaluate(const Real& t) const {
  Real acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + to_real(*it);
  return acc;
}

TPolynomial& TPolynomial::operator+=(const TPolynomial& rhs) {
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

TPolynomial& TPolynomial::operator-=(const TPolynomial& rhs) {
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  trim();
  return *this;
}

TPolynomial& TPolynomial::operator*=(const TPolynomial& rhs) {
  if (is_zero() || rhs.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<BigRational> out(coeffs_.size() + rhs.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  coeffs_ = std::move(out);
  trim();
  return *this;
}

TPolynomial& TPolynomial::operator*=(const BigRational& rhs) {
  for (auto& c : coeffs_) c *= rhs;
  trim();
  return *this;
}

std::string TPolynomial::to_string(const std::string& var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << momentlab::to_string(coeffs_[i]) << ")";
    if (i >= 1) os << "*" << var;
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

void TPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

MultiPolynomial::MultiPolynomial(const BigRational& constant) {
  if (constant != 0) terms_.emplace(Exponents{}, constant);
}

MultiPolynomial MultiPolynomial::variable(std::size_t index) {
  Exponents e(index + 1, 0);
  e[index] = 1;
  return monomial(1, std::move(e));
}

MultiPolynomial MultiPolynomial::monomial(const BigRational& coeff, Exponents exponents) {
  MultiPolynomial out;
  out.add_term(std::move(exponents), coeff);
  return out;
}

BigRational MultiPolynomial::coefficient(Exponents exponents) const {
  normalize(exponents);
  const auto it = terms_.find(exponents);
  return it == terms_.end() ? BigRational(0) : it->second;
}

BigRational MultiPolynomial::evaluate(std::span<const BigRational> values) const {
  BigRational acc = 0;
  for (const auto& [e, c] : terms_) {
    BigRational term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      term *= pow(i < values.size() ? values[i] : BigRational(0), e[i]);
    }
    acc += term;
  }
  return acc;
}

void MultiPolynomial::normalize(Exponents& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

void MultiPolynomial::add_term(Exponents e, const BigRational& c) {
  if (c == 0) return;
  normalize(e);
  auto [it, inserted] = terms_.try_emplace(std::move(e), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPolynomial& MultiPolynomial::operator+=(const MultiPolynomial& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

MultiPolynomial& MultiPolynomial::operator-=(const MultiPolynomial& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

MultiPolynomial& MultiPolynomial::operator*=(const MultiPolynomial& rhs) {
  MultiPolynomial out;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      Exponents e(std::max(ea.size(), eb.size()), 0);
      for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
      for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
      out.add_term(std::move(e), ca * cb);
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

std::string MultiPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << momentlab::to_string(c) << ")";
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      os << "*x" << i;
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

MultiPolynomial substitute(const TPolynomial& p, const MultiPolynomial& x) {
  MultiPolynomial acc;
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + MultiPolynomial(*it);
  return acc;
}

}  // namespace momentlab
