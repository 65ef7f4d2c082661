#pragma once

// Brute-force reference implementations. Slow on purpose: enumeration instead of recursion,
// so they share no code path with the library.

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "momentlab/numeric.hpp"
#include "momentlab/polynomial.hpp"

namespace oracle {

using momentlab::BigInt;
using momentlab::BigRational;

// Calls visit(f) for every function f: {0..n-1} -> {0..k-1}.
inline void for_each_function(unsigned n, unsigned k, const std::function<void(const std::vector<unsigned>&)>& visit) {
  std::vector<unsigned> f(n, 0);
  if (n == 0) {
    visit(f);
    return;
  }
  if (k == 0) return;
  while (true) {
    visit(f);
    std::size_t i = 0;
    while (i < n && ++f[i] == k) f[i++] = 0;
    if (i == n) return;
  }
}

inline BigInt surjections(unsigned n, unsigned k) {
  BigInt count = 0;
  for_each_function(n, k, [&](const std::vector<unsigned>& f) {
    std::vector<bool> hit(k, false);
    for (auto v : f) hit[v] = true;
    bool all = true;
    for (bool h : hit) all = all && h;
    if (all) ++count;
  });
  return count;
}

// Set partitions of {0..n-1} as restricted growth strings.
inline std::vector<std::vector<unsigned>> set_partitions(unsigned n) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> a(n, 0);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned blocks) {
    if (i == n) {
      out.push_back(a);
      return;
    }
    for (unsigned b = 0; b <= blocks; ++b) {
      a[i] = b;
      rec(i + 1, b == blocks ? blocks + 1 : blocks);
    }
  };
  if (n == 0) {
    out.push_back({});
    return out;
  }
  rec(0, 0);
  return out;
}

inline unsigned block_count(const std::vector<unsigned>& rgs) {
  unsigned m = 0;
  for (auto v : rgs) m = std::max(m, v + 1);
  return m;
}

inline BigInt stirling_by_partitions(unsigned n, unsigned k) {
  BigInt c = 0;
  for (const auto& p : set_partitions(n)) {
    if (block_count(p) == k) ++c;
  }
  return c;
}

// Laplace expansion along the first row.
template <class T>
T cofactor_det(const std::vector<std::vector<T>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return T(1);
  if (n == 1) return m[0][0];
  T acc(0);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<T>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<T> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != c) row.push_back(m[r][j]);
      }
      minor.push_back(row);
    }
    T term = m[0][c] * cofactor_det(minor);
    if (c % 2) acc -= term;
    else acc += term;
  }
  return acc;
}

template <class T>
std::vector<std::vector<T>> hankel(const std::vector<T>& a, std::size_t shift, std::size_t size) {
  std::vector<std::vector<T>> h(size + 1, std::vector<T>(size + 1));
  for (std::size_t i = 0; i <= size; ++i)
    for (std::size_t j = 0; j <= size; ++j) h[i][j] = a[shift + i + j];
  return h;
}

// E[(X_1 + ... + X_k)^n] for i.i.d. X_i with moments mu: the sum over all assignments of the n
// factors to the k summands of the product of the moments of the occupation counts.
template <class T>
T mb_integer(const std::vector<T>& mu, unsigned k, unsigned n) {
  T acc(0);
  for_each_function(n, k, [&](const std::vector<unsigned>& f) {
    std::vector<unsigned> occ(k, 0);
    for (auto v : f) ++occ[v];
    T prod(1);
    for (auto o : occ) prod *= mu[o];
    acc += prod;
  });
  return acc;
}

// Coefficients (ascending) of the polynomial through (x_i, y_i).
inline std::vector<BigRational> interpolate(const std::vector<BigRational>& x, const std::vector<BigRational>& y) {
  const std::size_t n = x.size();
  std::vector<BigRational> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<BigRational> basis{1};
    BigRational denom = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<BigRational> next(basis.size() + 1, 0);
      for (std::size_t d = 0; d < basis.size(); ++d) {
        next[d + 1] += basis[d];
        next[d] -= basis[d] * x[j];
      }
      basis = next;
      denom *= x[i] - x[j];
    }
    for (std::size_t d = 0; d < basis.size(); ++d) out[d] += basis[d] * y[i] / denom;
  }
  return out;
}

// mu^{o t}_n as a polynomial in t: interpolate the brute-force integer compositions at k = 0..n.
inline momentlab::TPolynomial mb_t(const std::vector<BigRational>& mu, unsigned n) {
  std::vector<BigRational> xs, ys;
  for (unsigned k = 0; k <= n; ++k) {
    xs.emplace_back(k);
    ys.push_back(mb_integer(mu, k, n));
  }
  return momentlab::TPolynomial(interpolate(xs, ys));
}

// Truncated power series helpers, degree <= deg.
using Series = std::vector<BigRational>;

inline Series mul(const Series& a, const Series& b, std::size_t deg) {
  Series c(deg + 1, 0);
  for (std::size_t i = 0; i < a.size() && i <= deg; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= deg; ++j) c[i + j] += a[i] * b[j];
  return c;
}

// log(1 + u) for u with zero constant term, by the alternating power series.
inline Series log1p(const Series& u, std::size_t deg) {
  Series out(deg + 1, 0), power{1};
  for (std::size_t m = 1; m <= deg; ++m) {
    power = mul(power, u, deg);
    const BigRational c = BigRational((m % 2) ? 1 : -1, m);
    for (std::size_t i = 0; i <= deg; ++i) out[i] += c * power[i];
  }
  return out;
}

// exp(q) for q with zero constant term.
inline Series exp(const Series& q, std::size_t deg) {
  Series out(deg + 1, 0), power{1};
  BigRational fact = 1;
  out[0] = 1;
  for (std::size_t m = 1; m <= deg; ++m) {
    power = mul(power, q, deg);
    fact *= m;
    for (std::size_t i = 0; i <= deg; ++i) out[i] += power[i] / fact;
  }
  return out;
}

// r_k = (k+1) [s^{k+1}] log(P(s)/p_0): the compound-Poisson rates from the pgf logarithm.
inline std::vector<BigRational> katti_rates(const std::vector<BigRational>& p, std::size_t kmax) {
  Series u(kmax + 2, 0);
  for (std::size_t i = 1; i <= kmax + 1; ++i) u[i] = p[i] / p[0];
  const auto l = log1p(u, kmax + 1);
  std::vector<BigRational> r;
  for (std::size_t k = 0; k <= kmax; ++k) r.push_back(BigRational(k + 1) * l[k + 1]);
  return r;
}

// Unnormalised pmf with pgf exp(sum_k r_k (s^{k+1} - 1)/(k+1)) up to the constant factor.
inline std::vector<BigRational> compound_poisson_pmf(const std::vector<BigRational>& r, std::size_t kmax) {
  Series q(kmax + 1, 0);
  for (std::size_t k = 0; k < r.size() && k + 1 <= kmax; ++k) q[k + 1] = r[k] / BigRational(k + 1);
  return exp(q, kmax);
}

// Poisson(lambda) moments as polynomials in lambda: coefficient j counts partitions into j blocks.
inline std::vector<BigInt> touchard_coefficients(unsigned n) {
  std::vector<BigInt> c(n + 1, 0);
  for (const auto& p : set_partitions(n)) ++c[block_count(p)];
  return c;
}

inline BigRational random_rational(std::mt19937_64& rng, long num_lo, long num_hi, long den_hi) {
  std::uniform_int_distribution<long> num(num_lo, num_hi), den(1, den_hi);
  const long a = num(rng);
  const long b = den(rng);
  BigRational q(a, b);
  q.canonicalize();
  return q;
}

// Random prefix (1, mu_1, ..., mu_len-1) with positive rational entries.
inline std::vector<BigRational> random_prefix(std::mt19937_64& rng, std::size_t len) {
  std::vector<BigRational> v{1};
  for (std::size_t i = 1; i < len; ++i) {
    v.push_back(random_rational(rng, 1, 40, 9));
  }
  return v;
}

}  // namespace oracle
