#include "momentlab/determinant.hpp"

#include <utility>

namespace momentlab {

BigInt bareiss_determinant(SquareMatrix<BigInt> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int parity = 1;
  BigInt prev_pivot = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(swap_row, j));
      parity = -parity;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev_pivot.get_mpz_t());
        m(i, j) = std::move(v);
      }
    }
    prev_pivot = m(k, k);
  }
  return parity > 0 ? BigInt(m(n - 1, n - 1)) : BigInt(-m(n - 1, n - 1));
}

BigRational determinant(const SquareMatrix<BigRational>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  // Common denominator L; det(A) = det(L A) / L^n.
  BigInt lcm = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(i, j).get_den_mpz_t());
  }
  SquareMatrix<BigInt> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      BigInt factor = lcm / m(i, j).get_den();
      scaled(i, j) = m(i, j).get_num() * factor;
    }
  }
  BigInt scale;
  mpz_pow_ui(scale.get_mpz_t(), lcm.get_mpz_t(), n);
  BigRational out(bareiss_determinant(std::move(scaled)), scale);
  out.canonicalize();
  return out;
}

Real determinant(const SquareMatrix<Real>& input) {
  SquareMatrix<Real> m = input;
  const std::size_t n = m.size();
  Real det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (abs(m(i, k)) > abs(m(pivot, k))) pivot = i;
    }
    if (m(pivot, k) == 0) return 0;
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(pivot, j));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Real f = m(i, k) / m(k, k);
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

Real hadamard_bound(const SquareMatrix<Real>& m) {
  Real bound = 1;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Real row = 0;
    for (std::size_t j = 0; j < m.size(); ++j) row += m(i, j) * m(i, j);
    bound *= sqrt(row);
  }
  return bound;
}

}  // namespace momentlab
