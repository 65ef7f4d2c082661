#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "momentlab/numeric.hpp"

namespace momentlab {

/// Dense square matrix, row-major.
template <class T>
class SquareMatrix {
 public:
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n) {}
  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<T> data_;
};

/// The (size+1) x (size+1) Hankel matrix with entry (i,j) = a[shift+i+j].
template <class T>
SquareMatrix<T> hankel_matrix(std::span<const T> a, std::size_t shift, std::size_t size) {
  SquareMatrix<T> h(size + 1);
  for (std::size_t i = 0; i <= size; ++i) {
    for (std::size_t j = 0; j <= size; ++j) h(i, j) = a[shift + i + j];
  }
  return h;
}

/// Exact determinant: denominators are cleared, then fraction-free (Bareiss) elimination
/// runs over the integers with row swaps on zero pivots.
BigRational determinant(const SquareMatrix<BigRational>& m);
BigInt bareiss_determinant(SquareMatrix<BigInt> m);

/// Gaussian elimination with partial pivoting at the working precision.
Real determinant(const SquareMatrix<Real>& m);

/// Product of the Euclidean row norms; bounds |det| from above.
Real hadamard_bound(const SquareMatrix<Real>& m);

}  // namespace momentlab
