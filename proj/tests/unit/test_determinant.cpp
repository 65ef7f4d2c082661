#include <gtest/gtest.h>

#include <random>

#include "momentlab/determinant.hpp"
#include "oracles.hpp"

using namespace momentlab;

namespace {

SquareMatrix<BigRational> to_matrix(const std::vector<std::vector<BigRational>>& rows) {
  SquareMatrix<BigRational> m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace

TEST(Determinant, BareissMatchesCofactorOnRandomRationals) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    std::vector<std::vector<BigRational>> rows(n, std::vector<BigRational>(n));
    for (auto& r : rows)
      for (auto& x : r) x = oracle::random_rational(rng, -9, 9, 5);
    EXPECT_EQ(determinant(to_matrix(rows)), oracle::cofactor_det(rows)) << "trial " << trial;
  }
}

TEST(Determinant, ZeroPivotNeedsRowSwap) {
  const std::vector<std::vector<BigRational>> rows{{0, 1, 2}, {1, 0, 3}, {4, -3, 8}};
  EXPECT_EQ(determinant(to_matrix(rows)), oracle::cofactor_det(rows));
  EXPECT_EQ(determinant(to_matrix({{1, 2}, {2, 4}})), 0);
}

TEST(Determinant, IntegerBareiss) {
  SquareMatrix<BigInt> m(3);
  const int v[3][3] = {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = v[i][j];
  EXPECT_EQ(bareiss_determinant(m), 4);
}

TEST(Determinant, RealAgreesWithExactAndHadamardBounds) {
  PrecisionScope scope(160);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 5;
    std::vector<std::vector<BigRational>> rows(n, std::vector<BigRational>(n));
    SquareMatrix<Real> r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        rows[i][j] = oracle::random_rational(rng, -20, 20, 7);
        r(i, j) = to_real(rows[i][j]);
      }
    const Real exact = to_real(oracle::cofactor_det(rows));
    const Real approx = determinant(r);
    const Real bound = hadamard_bound(r);
    EXPECT_LE(abs(exact), bound * (1 + Real(1e-30)));
    EXPECT_LT(abs(approx - exact), bound * Real(1e-40));
  }
}
