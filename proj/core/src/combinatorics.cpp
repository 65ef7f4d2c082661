#include "momentlab/combinatorics.hpp"

#include <mutex>
#include <numeric>
#include <shared_mutex>

#include "momentlab/errors.hpp"

namespace momentlab::combinatorics {

namespace {

class StirlingTriangle {
 public:
  BigInt get(unsigned n, unsigned k) {
    if (k > n) return 0;
    {
      std::shared_lock lock(mutex_);
      if (n < rows_.size()) return rows_[n][k];
    }
    std::unique_lock lock(mutex_);
    while (rows_.size() <= n) {
      const std::size_t m = rows_.size();
      std::vector<BigInt> row(m + 1);
      if (m == 0) {
        row[0] = 1;
      } else {
        const auto& prev = rows_[m - 1];
        row[0] = 0;
        for (std::size_t i = 1; i <= m; ++i) {
          BigInt carried = i < prev.size() ? BigInt(prev[i] * static_cast<unsigned long>(i)) : BigInt(0);
          row[i] = carried + prev[i - 1];
        }
      }
      rows_.push_back(std::move(row));
    }
    return rows_[n][k];
  }

 private:
  std::shared_mutex mutex_;
  std::vector<std::vector<BigInt>> rows_;
};

StirlingTriangle& stirling_cache() {
  static StirlingTriangle cache;
  return cache;
}

BigInt ipow(unsigned long base, unsigned long exponent) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
  return out;
}

}  // namespace

BigInt factorial(unsigned n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

BigInt stirling_subset(unsigned n, unsigned k) { return stirling_cache().get(n, k); }

BigInt boltzmann(unsigned n, unsigned k) {
  BigInt sum = 0;
  // j = k contributes 0^n, which is 1 only for n = 0.
  for (unsigned j = 0; j <= k; ++j) {
    BigInt term = binomial(k, j) * ipow(k - j, n);
    if (j % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

BigInt boltzmann_via_stirling(unsigned n, unsigned k) { return factorial(k) * stirling_subset(n, k); }

BigInt boltzmann_via_differences(unsigned n, unsigned k) {
  std::vector<BigInt> values(k + 1);
  for (unsigned x = 0; x <= k; ++x) values[x] = ipow(x, n);
  for (unsigned order = 0; order < k; ++order) {
    for (unsigned x = 0; x + order < k; ++x) values[x] = values[x + 1] - values[x];
  }
  return values[0];
}

BigRational binom_general(const BigRational& t, unsigned j) {
  BigRational out = 1;
  for (unsigned i = 0; i < j; ++i) {
    out *= t - i;
    out /= i + 1;
  }
  return out;
}

BigInt multinomial(unsigned n, std::span<const unsigned> parts) {
  const unsigned long total = std::accumulate(parts.begin(), parts.end(), 0UL);
  if (total != n) throw InputError("multinomial: parts do not sum to n");
  BigInt out = factorial(n);
  for (unsigned p : parts) out /= factorial(p);
  return out;
}

Compositions::iterator::iterator(unsigned n, unsigned j) : n_(n) {
  if (j == 0) {
    done_ = n != 0;
    return;
  }
  if (j > n) return;
  parts_.assign(j, 1);
  parts_.back() = n - j + 1;
  done_ = false;
}

Compositions::iterator& Compositions::iterator::operator++() {
  if (done_) return *this;
  const std::size_t j = parts_.size();
  if (j <= 1) {
    done_ = true;
    return *this;
  }
  // Rightmost position (excluding the last) that can grow while every later part stays >= 1.
  unsigned suffix = parts_.back();
  for (std::size_t i = j - 1; i-- > 0;) {
    const unsigned later_parts = static_cast<unsigned>(j - 1 - i);
    if (suffix > later_parts) {
      ++parts_[i];
      unsigned prefix = 0;
      for (std::size_t p = 0; p <= i; ++p) prefix += parts_[p];
      for (std::size_t p = i + 1; p + 1 < j; ++p) parts_[p] = 1;
      parts_.back() = n_ - prefix - static_cast<unsigned>(j - 2 - i);
      return *this;
    }
    suffix += parts_[i];
  }
  done_ = true;
  return *this;
}

std::vector<RatioBoundViolation> boltzmann_ratio_bound_violations(unsigned n_max) {
  std::vector<RatioBoundViolation> out;
  for (unsigned n = 2; n <= n_max; ++n) {
    for (unsigned k = 1; k < n; ++k) {
      const BigRational ratio(boltzmann(n, k + 1), boltzmann(n, k));
      BigRational bound = pow(BigRational(k + 1, k), n) / BigRational((k + 1) * (k + 1));
      bound.canonicalize();
      BigRational r = ratio;
      r.canonicalize();
      if (r > bound) out.push_back({n, k, r, bound});
    }
  }
  return out;
}

}  // namespace momentlab::combinatorics
