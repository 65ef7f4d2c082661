#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "momentlab/numeric.hpp"

namespace momentlab {

enum class Backend { exact, approximate };

/// A finite sequence of scalars held either as exact rationals or as MPFR reals with a
/// declared precision. Shared storage for moment and cumulant sequences.
class ScalarSequence {
 public:
  bool is_exact() const { return std::holds_alternative<std::vector<BigRational>>(values_); }
  Backend backend() const { return is_exact() ? Backend::exact : Backend::approximate; }
  std::size_t size() const;
  /// Largest index N; the sequence holds indices 0..N.
  std::size_t max_index() const { return size() - 1; }
  /// Declared precision of an approximate sequence; 0 for exact ones.
  unsigned precision_bits() const { return bits_; }

  /// Throws BackendError for approximate sequences.
  const std::vector<BigRational>& exact_values() const;
  /// Approximate values; exact sequences are rounded at the current default precision.
  std::vector<Real> approx_values() const;

 protected:
  ScalarSequence() = default;
  ScalarSequence(std::vector<BigRational> values);
  ScalarSequence(std::vector<Real> values, unsigned bits);

  std::variant<std::vector<BigRational>, std::vector<Real>> values_;
  unsigned bits_ = 0;
};

/// Prefix (mu_0 = 1, mu_1, ..., mu_N) of a moment sequence.
///
/// The only enforced invariant is mu_0 = 1. Positivity is checked by the operations that
/// need it; identity elements such as the moments of the point mass at 0 are legitimate
/// inputs to the convolution operations.
class MomentSequence : public ScalarSequence {
 public:
  MomentSequence() : MomentSequence(std::vector<BigRational>{1}) {}
  static MomentSequence exact(std::vector<BigRational> values);
  static MomentSequence approximate(std::vector<Real> values, unsigned precision_bits);

  bool all_positive() const;
  /// The first n+1 entries.
  MomentSequence prefix(std::size_t upto) const;

  friend bool operator==(const MomentSequence& a, const MomentSequence& b);

 private:
  using ScalarSequence::ScalarSequence;
};

/// Classical cumulants kappa_1..kappa_N. Slot 0 is unused and always zero so that the length
/// and indexing match the moment sequence the cumulants came from.
class CumulantSequence : public ScalarSequence {
 public:
  static CumulantSequence exact(std::vector<BigRational> values);
  static CumulantSequence approximate(std::vector<Real> values, unsigned precision_bits);

 private:
  using ScalarSequence::ScalarSequence;
};

/// Boolean cumulants (self-energy coefficients) b_1..b_N with the same slot-0 convention.
class BooleanCumulantSequence : public ScalarSequence {
 public:
  static BooleanCumulantSequence exact(std::vector<BigRational> values);
  static BooleanCumulantSequence approximate(std::vector<Real> values, unsigned precision_bits);

 private:
  using ScalarSequence::ScalarSequence;
};

}  // namespace momentlab
