#pragma once

// Dense brute-force cohomology counts, enumerating monomials from a box and the closed-form
// gauge instead of the graded pieces.

#include <algorithm>
#include <map>

#include "gkz/derham.hpp"
#include "test_support.hpp"

namespace gkz::testing {

/// dim R_d / sum_i g_i R_{d-M}, by brute force: monomials from the closed-form gauge, graded
/// products from additivity of rho, dense elimination.
inline std::int64_t brute_force_top_dim(const PolytopeAtInfinity& p, const std::vector<Rational>& a, std::int64_t max_degree) {
  const std::int64_t m = p.gauge_denominator();
  std::map<std::int64_t, std::vector<LatticeVector>> by_degree;
  for (const auto& w : p.box_points(ratio(max_degree, m)))
    if (p.in_cone(w)) {
      Rational d = p.gauge(w) * m;
      if (d <= max_degree) by_degree[integer_value(d)].push_back(w);
    }
  std::vector<std::pair<LatticeVector, std::vector<Rational>>> g_terms;  // boundary columns
  for (std::size_t j = 0; j < p.matrix().N(); ++j)
    if (p.gauge(p.matrix().column(j)) == 1) {
      std::vector<Rational> coeffs;
      for (std::size_t i = 0; i < p.n(); ++i) coeffs.push_back(a[j] * p.matrix().entry(i, j));
      g_terms.push_back({p.matrix().column(j), coeffs});
    }
  std::int64_t total = 0;
  for (std::int64_t d = 0; d <= max_degree; ++d) {
    const auto& target = by_degree[d];
    RationalMatrix cols;
    for (std::size_t i = 0; i < p.n(); ++i)
      for (const auto& u : by_degree[d - m]) {
        RationalVector v(target.size());
        for (const auto& [w, c] : g_terms)
          if (p.gauge(w + u) == p.gauge(w) + p.gauge(u)) {
            auto pos = std::find(target.begin(), target.end(), w + u) - target.begin();
            v[pos] += c[i];
          }
        cols.push_back(v);
      }
    total += static_cast<std::int64_t>(target.size() - dense_rank(cols));
  }
  return total;
}

/// Cokernel dimension of the truncated d: C^{n-1} -> C^n by dense elimination, with the monomials
/// enumerated from a box rather than from the graded pieces.
inline std::size_t dense_top_cohomology(const RationalVector& gamma, const std::vector<Rational>& a, const PolytopeAtInfinity& p,
                                 std::int64_t truncation) {
  const std::size_t n = p.n();
  const std::int64_t m = p.gauge_denominator();
  std::vector<LatticeVector> pts;
  for (const auto& w : p.box_points(ratio(truncation, m))) {
    if (!p.in_cone(w)) continue;
    if (p.gauge(w) * m <= truncation) pts.push_back(w);
  }
  std::map<LatticeVector, std::size_t> row;
  for (const auto& w : pts) row.emplace(w, row.size());
  RationalMatrix dense;
  for (const auto& w : pts) {
    if (p.gauge(w) * m + m > truncation) continue;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t mask = LogForm::full_mask(n) & ~(std::uint64_t{1} << i);
      RationalVector col(row.size(), Rational(0));
      const LogForm image = twisted_differential(gamma, a, LogForm::monomial(static_cast<int>(n) - 1, mask, w), p);
      for (const auto& [key, c] : image.terms()) col[row.at(key.second)] += c;
      dense.push_back(col);
    }
  }
  return row.size() - (dense.empty() ? 0 : dense_rank(dense));
}

}  // namespace gkz::testing
