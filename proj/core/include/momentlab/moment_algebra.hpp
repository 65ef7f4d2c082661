#pragma once

// Moment-sequence arithmetic: classical (binomial) convolution, the Maxwell-Boltzmann
// t-composition, classical and Boolean cumulant transforms, Boolean convolution.
//
// The recursions in `kernels` only use ring operations and multiplication by rational
// constants, so they run unchanged over exact rationals, MPFR reals, and symbolic
// polynomials (the last is how the symbolic identities are verified).

#include <cstddef>
#include <span>
#include <vector>

#include "momentlab/combinatorics.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/moment_sequence.hpp"
#include "momentlab/numeric.hpp"
#include "momentlab/polynomial.hpp"

namespace momentlab::algebra {

namespace kernels {

template <class T>
void require_length(std::span<const T> s, std::size_t upto, const char* what) {
  if (s.size() <= upto) throw InputError(std::string(what) + ": sequence shorter than requested index");
}

/// result_n = sum_j C(n,j) a_j b_{n-j}
template <class T>
std::vector<T> classical_convolve(std::span<const T> a, std::span<const T> b, std::size_t upto) {
  require_length(a, upto, "classical_convolve");
  require_length(b, upto, "classical_convolve");
  std::vector<T> out(upto + 1, ring_from<T>(0));
  for (std::size_t n = 0; n <= upto; ++n) {
    T acc = ring_from<T>(0);
    for (std::size_t j = 0; j <= n; ++j) {
      const T c = ring_from<T>(BigRational(combinatorics::binomial(static_cast<unsigned>(n), static_cast<unsigned>(j))));
      acc += c * a[j] * b[n - j];
    }
    out[n] = acc;
  }
  return out;
}

/// S[j] = sum over ordered compositions (n_1..n_j) of n of n!/(n_1!...n_j!) * prod mu_{n_i},
/// for j = 0..n. Uses S(n,j) = sum_m C(n,m) mu_m S(n-m, j-1).
template <class T>
std::vector<std::vector<T>> composition_sum_table(std::span<const T> mu, std::size_t upto) {
  require_length(mu, upto, "composition sums");
  std::vector<std::vector<T>> s(upto + 1);
  for (std::size_t n = 0; n <= upto; ++n) s[n].assign(n + 1, ring_from<T>(0));
  s[0][0] = ring_from<T>(1);
  for (std::size_t n = 1; n <= upto; ++n) {
    for (std::size_t j = 1; j <= n; ++j) {
      T acc = ring_from<T>(0);
      for (std::size_t m = 1; m + (j - 1) <= n; ++m) {
        const std::size_t rest = n - m;
        if (j - 1 > rest) continue;
        const T c = ring_from<T>(BigRational(combinatorics::binomial(static_cast<unsigned>(n), static_cast<unsigned>(m))));
        acc += c * mu[m] * s[rest][j - 1];
      }
      s[n][j] = acc;
    }
  }
  return s;
}

/// k-fold Maxwell-Boltzmann composition: sum_j C(k,j) S(n,j).
template <class T>
std::vector<T> mb_compose_integer(std::span<const T> mu, unsigned k, std::size_t upto) {
  if (k < 1) throw InputError("mb_compose_integer: k must be >= 1");
  const auto s = composition_sum_table(mu, upto);
  std::vector<T> out(upto + 1, ring_from<T>(0));
  out[0] = ring_from<T>(1);
  for (std::size_t n = 1; n <= upto; ++n) {
    T acc = ring_from<T>(0);
    for (std::size_t j = 1; j <= n && j <= k; ++j) {
      acc += ring_from<T>(BigRational(combinatorics::binomial(k, static_cast<unsigned>(j)))) * s[n][j];
    }
    out[n] = acc;
  }
  return out;
}

/// Maxwell-Boltzmann composition evaluated at a fixed rational t: sum_j C^t_j S(n,j).
template <class T>
std::vector<T> mb_compose_at(std::span<const T> mu, const BigRational& t, std::size_t upto) {
  const auto s = composition_sum_table(mu, upto);
  std::vector<T> out(upto + 1, ring_from<T>(0));
  out[0] = ring_from<T>(1);
  for (std::size_t n = 1; n <= upto; ++n) {
    T acc = ring_from<T>(0);
    for (std::size_t j = 1; j <= n; ++j) {
      acc += ring_from<T>(combinatorics::binom_general(t, static_cast<unsigned>(j))) * s[n][j];
    }
    out[n] = acc;
  }
  return out;
}

/// kappa from m_n = sum_{k<n} C(n-1,k) kappa_{k+1} m_{n-1-k}. Slot 0 of the result is zero.
template <class T>
std::vector<T> cumulants_from_moments(std::span<const T> m) {
  std::vector<T> kappa(m.size(), ring_from<T>(0));
  for (std::size_t n = 1; n < m.size(); ++n) {
    T acc = m[n];
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const T c = ring_from<T>(BigRational(combinatorics::binomial(static_cast<unsigned>(n - 1), static_cast<unsigned>(k))));
      acc -= c * kappa[k + 1] * m[n - 1 - k];
    }
    kappa[n] = acc;
  }
  return kappa;
}

/// Inverse of cumulants_from_moments; slot 0 of the input is ignored and m_0 = 1.
template <class T>
std::vector<T> moments_from_cumulants(std::span<const T> kappa) {
  std::vector<T> m(kappa.size(), ring_from<T>(0));
  if (m.empty()) return m;
  m[0] = ring_from<T>(1);
  for (std::size_t n = 1; n < kappa.size(); ++n) {
    T acc = ring_from<T>(0);
    for (std::size_t k = 0; k < n; ++k) {
      const T c = ring_from<T>(BigRational(combinatorics::binomial(static_cast<unsigned>(n - 1), static_cast<unsigned>(k))));
      acc += c * kappa[k + 1] * m[n - 1 - k];
    }
    m[n] = acc;
  }
  return m;
}

/// b from m_n = sum_{k=1}^n b_k m_{n-k}. Slot 0 of the result is zero.
template <class T>
std::vector<T> boolean_cumulants_from_moments(std::span<const T> m) {
  std::vector<T> b(m.size(), ring_from<T>(0));
  for (std::size_t n = 1; n < m.size(); ++n) {
    T acc = m[n];
    for (std::size_t k = 1; k < n; ++k) acc -= b[k] * m[n - k];
    b[n] = acc;
  }
  return b;
}

template <class T>
std::vector<T> moments_from_boolean_cumulants(std::span<const T> b) {
  std::vector<T> m(b.size(), ring_from<T>(0));
  if (m.empty()) return m;
  m[0] = ring_from<T>(1);
  for (std::size_t n = 1; n < b.size(); ++n) {
    T acc = ring_from<T>(0);
    for (std::size_t k = 1; k <= n; ++k) acc += b[k] * m[n - k];
    m[n] = acc;
  }
  return m;
}

/// Boolean cumulants add under Boolean convolution.
template <class T>
std::vector<T> boolean_convolve(std::span<const T> a, std::span<const T> b, std::size_t upto) {
  require_length(a, upto, "boolean_convolve");
  require_length(b, upto, "boolean_convolve");
  const auto ba = boolean_cumulants_from_moments(a.first(upto + 1));
  const auto bb = boolean_cumulants_from_moments(b.first(upto + 1));
  std::vector<T> sum(upto + 1, ring_from<T>(0));
  for (std::size_t n = 1; n <= upto; ++n) sum[n] = ba[n] + bb[n];
  return moments_from_boolean_cumulants(std::span<const T>(sum));
}

/// Boolean convolution power: Boolean cumulants scaled by t (any scalar in the ring).
template <class T>
std::vector<T> boolean_power(std::span<const T> m, const T& t, std::size_t upto) {
  require_length(m, upto, "boolean_power");
  auto b = boolean_cumulants_from_moments(m.first(upto + 1));
  for (std::size_t n = 1; n <= upto; ++n) b[n] = t * b[n];
  return moments_from_boolean_cumulants(std::span<const T>(b));
}

/// Moments of the Levy process at time t: moments_from_cumulants(t * kappa).
template <class T>
std::vector<T> levy_moments(std::span<const T> kappa, const T& t) {
  std::vector<T> scaled(kappa.begin(), kappa.end());
  for (std::size_t n = 1; n < scaled.size(); ++n) scaled[n] = t * scaled[n];
  return moments_from_cumulants(std::span<const T>(scaled));
}

}  // namespace kernels

MomentSequence classical_convolve(const MomentSequence& a, const MomentSequence& b, std::size_t upto);

/// k-fold self-convolution through the Maxwell-Boltzmann composition sum.
MomentSequence mb_compose_integer(const MomentSequence& m, unsigned k, std::size_t upto);

/// mu^{o t}_n as exact polynomials in t for n = 0..upto. Rejects approximate input.
std::vector<TPolynomial> mb_compose_t(const MomentSequence& m, std::size_t upto);

/// Evaluates polynomials in t at a rational point.
MomentSequence evaluate_at(const std::vector<TPolynomial>& polys, const BigRational& t);

CumulantSequence cumulants_from_moments(const MomentSequence& m);
MomentSequence moments_from_cumulants(const CumulantSequence& k);
MomentSequence levy_moments_at_t(const CumulantSequence& k, const BigRational& t);

BooleanCumulantSequence boolean_cumulants_from_moments(const MomentSequence& m);
MomentSequence moments_from_boolean_cumulants(const BooleanCumulantSequence& b);
MomentSequence boolean_convolve(const MomentSequence& a, const MomentSequence& b, std::size_t upto);
/// Requires t >= 0.
MomentSequence boolean_power_t(const MomentSequence& m, const BigRational& t, std::size_t upto);

}  // namespace momentlab::algebra
