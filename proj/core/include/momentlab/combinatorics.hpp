#pragma once

// Exact integer combinatorics. No floating point anywhere in this module.

#include <cstddef>
#include <iterator>
#include <span>
#include <vector>

#include "momentlab/numeric.hpp"

namespace momentlab::combinatorics {

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

/// Stirling number of the second kind: partitions of an n-set into k non-empty blocks.
/// Memoised through the triangle recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1); the cache is
/// shared between threads.
BigInt stirling_subset(unsigned n, unsigned k);

/// Boltzmann number: surjections from an n-set onto k cells, computed by inclusion-exclusion
/// sum_{j<k} (-1)^j C(k,j) (k-j)^n.
BigInt boltzmann(unsigned n, unsigned k);
/// Same quantity as k! * stirling_subset(n, k).
BigInt boltzmann_via_stirling(unsigned n, unsigned k);
/// Same quantity as the k-th forward difference of x -> x^n at 0, by repeated differencing.
BigInt boltzmann_via_differences(unsigned n, unsigned k);

/// t(t-1)...(t-j+1)/j! for rational t.
BigRational binom_general(const BigRational& t, unsigned j);

/// n!/(n_1!...n_q!). Throws InputError unless the parts sum to n.
BigInt multinomial(unsigned n, std::span<const unsigned> parts);

/// Ordered compositions of n into j positive parts, in lexicographic order.
class Compositions {
 public:
  class iterator {
   public:
    using iterator_concept = std::input_iterator_tag;
    using iterator_category = std::input_iterator_tag;
    using value_type = std::vector<unsigned>;
    using difference_type = std::ptrdiff_t;
    using reference = const std::vector<unsigned>&;
    using pointer = const std::vector<unsigned>*;

    iterator() = default;
    reference operator*() const { return parts_; }
    pointer operator->() const { return &parts_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return done_; }

   private:
    friend class Compositions;
    iterator(unsigned n, unsigned j);

    unsigned n_ = 0;
    std::vector<unsigned> parts_;
    bool done_ = true;
  };

  Compositions(unsigned n, unsigned j) : n_(n), j_(j) {}
  iterator begin() const { return iterator(n_, j_); }
  std::default_sentinel_t end() const { return {}; }

 private:
  unsigned n_;
  unsigned j_;
};

/// Empty when j > n (or j == 0 < n); the single empty tuple when n == j == 0.
inline Compositions compositions(unsigned n, unsigned j) { return {n, j}; }

/// One (n, k) pair where B(n,k+1)/B(n,k) exceeds ((k+1)/k)^n / (k+1)^2.
struct RatioBoundViolation {
  unsigned n;
  unsigned k;
  BigRational ratio;
  BigRational bound;
};

/// Checks the ratio bound on consecutive Boltzmann numbers for all 1 <= k < n <= n_max and
/// returns every pair for which it fails. The bound is reported on, never asserted.
std::vector<RatioBoundViolation> boltzmann_ratio_bound_violations(unsigned n_max);

}  // namespace momentlab::combinatorics
