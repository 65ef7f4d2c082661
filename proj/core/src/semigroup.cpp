#include "momentlab/semigroup.hpp"

#include <algorithm>
#include <span>

#include "momentlab/combinatorics.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/moment_algebra.hpp"
#include "momentlab/parallel.hpp"
#include "momentlab/polynomial.hpp"

namespace momentlab::semigroup {

namespace {

BigRational abs_value(const BigRational& q) { return q < 0 ? BigRational(-q) : q; }

bool is_perfect_square(const BigInt& z, BigInt& root) {
  if (z < 0) return false;
  mpz_sqrt(root.get_mpz_t(), z.get_mpz_t());
  return root * root == z;
}

}  // namespace

SemigroupIdentityResult mb_semigroup_identity(const MomentSequence& m, std::size_t depth) {
  const auto polys = algebra::mb_compose_t(m, depth);
  const MultiPolynomial s = MultiPolynomial::variable(0);
  const MultiPolynomial t = MultiPolynomial::variable(1);
  const MultiPolynomial sum = s + t;
  std::vector<MultiPolynomial> at_s;
  std::vector<MultiPolynomial> at_t;
  for (const auto& p : polys) {
    at_s.push_back(substitute(p, s));
    at_t.push_back(substitute(p, t));
  }
  const auto lhs = algebra::kernels::classical_convolve(std::span<const MultiPolynomial>(at_s), std::span<const MultiPolynomial>(at_t), depth);
  SemigroupIdentityResult out;
  out.depth = depth;
  for (std::size_t n = 0; n <= depth; ++n) {
    if (!(lhs[n] == substitute(polys[n], sum))) {
      out.holds = false;
      out.first_failure = n;
      break;
    }
  }
  return out;
}

AlternationResult l45_alternation_check(const MomentSequence& m, const BigRational& t, std::size_t n) {
  const auto& mu = m.exact_values();
  if (n < 1 || n >= mu.size()) throw InputError("l45_alternation_check: n out of range");
  AlternationResult out;
  if (!(t > 0 && t < 1)) {
    out.precondition_ok = false;
    out.precondition_notes.push_back("t is not in (0,1)");
  }
  if (mu.size() >= 3 && m.all_positive()) {
    const auto report = stieltjes::log_convexity_report(std::span<const BigRational>(mu));
    if (report.verdict != stieltjes::LogConvexity::strictly_log_convex) {
      out.precondition_ok = false;
      out.precondition_notes.push_back("sequence is not strictly log-convex");
    }
  } else {
    out.precondition_ok = false;
    out.precondition_notes.push_back("log-convexity cannot be established (non-positive entries or fewer than 3 moments)");
  }

  const auto table = algebra::kernels::composition_sum_table(std::span<const BigRational>(mu), n);
  for (std::size_t j = 1; j <= n; ++j) out.terms.push_back(combinatorics::binom_general(t, static_cast<unsigned>(j)) * table[n][j]);

  out.leading_term_ok = out.terms[0] == t * mu[n];
  for (std::size_t j = 1; j <= n; ++j) {
    const int expected = (j % 2 == 1) ? 1 : -1;
    if (sign(out.terms[j - 1]) != expected) out.alternates = false;
    if (j >= 2 && !(abs_value(out.terms[j - 1]) < abs_value(out.terms[j - 2]))) out.decreasing = false;
  }
  for (std::size_t j = 1; j < n; ++j) {
    BigRational tail = 0;
    for (std::size_t i = j + 1; i <= n; ++i) tail += out.terms[i - 1];
    if (!(abs_value(tail) < abs_value(out.terms[j - 1]))) out.tails_dominated = false;
  }
  return out;
}

BoundsResult c420_bounds_check(const MomentSequence& m, const BigRational& theta, const BigRational& t, std::size_t depth) {
  const auto& mu = m.exact_values();
  if (depth < 1 || depth >= mu.size()) throw InputError("c420_bounds_check: depth out of range");
  BoundsResult out;
  if (!(t > 0 && t < 1) || !m.all_positive() || mu.size() < 3) {
    out.precondition_ok = false;
  } else {
    const auto report = stieltjes::log_convexity_report(std::span<const BigRational>(mu));
    for (std::size_t n = 1; n <= report.theta.size(); ++n) {
      if (report.theta[n - 1] > theta) {
        out.precondition_ok = false;
        out.precondition_index = n;
        break;
      }
    }
  }
  const auto values = algebra::kernels::mb_compose_at(std::span<const BigRational>(mu), t, depth);
  for (std::size_t n = 1; n <= depth; ++n) {
    BoundsRow row;
    row.n = n;
    row.upper = t * mu[n];
    row.value = values[n];
    row.lower = (1 - theta) * t * mu[n];
    row.ok = row.upper >= row.value && row.value > row.lower;
    if (!row.ok && !out.first_violation) out.first_violation = n;
    out.rows.push_back(std::move(row));
  }
  out.holds = !out.first_violation.has_value();
  return out;
}

MomentSequence canonical_log_convex_family(const BigRational& q, std::size_t upto) {
  if (!(q > 1)) throw InputError("canonical family needs q > 1");
  std::vector<BigRational> values;
  values.reserve(upto + 1);
  for (std::size_t n = 0; n <= upto; ++n) values.push_back(pow(q, static_cast<unsigned long>(n * n)));
  return MomentSequence::exact(std::move(values));
}

BigRational q_for_theta(const BigRational& theta) {
  if (!(theta > 0 && theta < 1)) throw InputError("theta must lie in (0,1)");
  BigInt num_root;
  BigInt den_root;
  if (!is_perfect_square(theta.get_num(), num_root) || !is_perfect_square(theta.get_den(), den_root)) {
    throw InputError("theta = " + to_string(theta) + " is not of the form 1/q^2 with rational q");
  }
  BigRational q(den_root, num_root);
  q.canonicalize();
  return q;
}

ThresholdScanResult theta_threshold_scan(const std::vector<BigRational>& theta_grid, const std::vector<BigRational>& t_grid,
                                         std::size_t depth, std::optional<BigRational> delta) {
  if (theta_grid.empty() || t_grid.empty()) throw InputError("theta_threshold_scan: empty grid");
  if (depth < 1) throw InputError("theta_threshold_scan: depth must be >= 1");
  for (const auto& t : t_grid) {
    if (!(t > 0 && t < 1)) throw InputError("theta_threshold_scan: t values must lie in (0,1)");
  }
  std::vector<BigRational> qs;
  for (const auto& theta : theta_grid) qs.push_back(q_for_theta(theta));

  ThresholdScanResult out;
  out.theta_grid = theta_grid;
  out.t_grid = t_grid;
  out.depth = depth;
  out.delta = delta;
  out.pass_matrix.assign(theta_grid.size(), std::vector<ScanCell>(t_grid.size()));
  const std::size_t upto = 2 * depth + 1;

  parallel_for(theta_grid.size() * t_grid.size(), [&](std::size_t cell) {
    const std::size_t i = cell / t_grid.size();
    const std::size_t j = cell % t_grid.size();
    const auto family = canonical_log_convex_family(qs[i], upto);
    const auto values = algebra::kernels::mb_compose_at(std::span<const BigRational>(family.exact_values()), t_grid[j], upto);
    const auto verdict = stieltjes::stieltjes_verdict(std::span<const BigRational>(values), depth);
    ScanCell& c = out.pass_matrix[i][j];
    c.kind = verdict.kind;
    c.stieltjes_ok = verdict.kind == stieltjes::Definiteness::strictly_positive;
    if (verdict.witness) c.witness = verdict.witness->query;
  });

  for (const auto& theta : theta_grid) out.sufficiency_ratio.push_back(theta / ((1 - theta) * (1 - theta)));

  std::vector<std::size_t> order(theta_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return theta_grid[a] < theta_grid[b]; });
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    bool seen_failure = false;
    bool monotone = true;
    for (std::size_t i : order) {
      if (!out.pass_matrix[i][j].stieltjes_ok) {
        seen_failure = true;
      } else if (seen_failure) {
        monotone = false;
      }
    }
    out.monotone_in_theta.push_back(monotone);
  }
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    const bool row_ok = std::all_of(out.pass_matrix[i].begin(), out.pass_matrix[i].end(), [](const ScanCell& c) { return c.stieltjes_ok; });
    if (row_ok && (!out.empirical_theta_max || theta_grid[i] > *out.empirical_theta_max)) out.empirical_theta_max = theta_grid[i];
  }
  return out;
}

}  // namespace momentlab::semigroup
