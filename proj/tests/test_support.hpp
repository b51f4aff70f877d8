#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing here calls the
// algorithms it is used to check.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "gkz/lattice.hpp"
#include "gkz/polytope.hpp"
#include "gkz/rational.hpp"

namespace gkz::testing {

using Rows = std::vector<std::vector<std::int64_t>>;

inline const Rows kGauss = {{1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}};

inline RationalVector rv(std::initializer_list<const char*> items) {
  RationalVector out;
  for (auto s : items) out.push_back(parse_rational(s));
  return out;
}

/// Solves the square system m x = b over Q; nullopt if singular.
inline std::optional<RationalVector> solve_dense(RationalMatrix m, RationalVector b) {
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      b[r] -= f * b[c];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
  return x;
}

/// Plain dense Gaussian elimination, kept separate from the library's sparse routines.
inline std::size_t dense_rank(RationalMatrix m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

template <class F>
void for_each_subset(std::size_t total, std::size_t size, F&& f) {
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  if (size > total) return;
  while (true) {
    f(idx);
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == total - size + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Caratheodory: x is a convex combination of some n+1 of the points.
inline bool in_hull_bruteforce(const std::vector<LatticeVector>& pts, const RationalVector& x) {
  const std::size_t n = x.size();
  bool found = false;
  for_each_subset(pts.size(), n + 1, [&](const std::vector<std::size_t>& idx) {
    if (found) return;
    RationalMatrix m(n + 1, RationalVector(n + 1));
    RationalVector b(n + 1);
    for (std::size_t c = 0; c <= n; ++c) {
      for (std::size_t r = 0; r < n; ++r) m[r][c] = pts[idx[c]][r];
      m[n][c] = 1;
    }
    for (std::size_t r = 0; r < n; ++r) b[r] = x[r];
    b[n] = 1;
    auto sol = solve_dense(m, b);
    if (sol && std::all_of(sol->begin(), sol->end(), [](const Rational& v) { return v >= 0; })) found = true;
  });
  return found;
}

/// Caratheodory for cones: w is a nonnegative combination of some n independent columns.
inline bool in_cone_bruteforce(const std::vector<LatticeVector>& gens, const LatticeVector& w) {
  const std::size_t n = w.size();
  if (is_zero(w)) return true;
  bool found = false;
  for_each_subset(gens.size(), n, [&](const std::vector<std::size_t>& idx) {
    if (found) return;
    RationalMatrix m(n, RationalVector(n));
    RationalVector b(n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) m[r][c] = gens[idx[c]][r];
    for (std::size_t r = 0; r < n; ++r) b[r] = w[r];
    auto sol = solve_dense(m, b);
    if (sol && std::all_of(sol->begin(), sol->end(), [](const Rational& v) { return v >= 0; })) found = true;
  });
  return found;
}

/// n! vol(conv(0, columns)) as the n-th finite difference of the lattice-point count of k * hull.
inline std::int64_t normalized_volume_ehrhart(const std::vector<LatticeVector>& columns) {
  const std::size_t n = columns.front().size();
  std::vector<LatticeVector> pts(columns);
  pts.push_back(LatticeVector(n, 0));
  std::vector<std::int64_t> counts;
  for (std::int64_t k = 0; k <= static_cast<std::int64_t>(n); ++k) {
    std::vector<LatticeVector> scaled_pts;
    std::vector<std::int64_t> lo(n, 0), hi(n, 0);
    for (const auto& p : pts) {
      scaled_pts.push_back(scaled(p, k));
      for (std::size_t i = 0; i < n; ++i) {
        lo[i] = std::min(lo[i], k * p[i]);
        hi[i] = std::max(hi[i], k * p[i]);
      }
    }
    std::int64_t count = 0;
    LatticeVector cur(lo);
    while (true) {
      RationalVector x(cur.begin(), cur.end());
      if (k == 0 ? is_zero(cur) : in_hull_bruteforce(scaled_pts, x)) ++count;
      std::size_t i = 0;
      for (; i < n; ++i) {
        if (cur[i] < hi[i]) {
          ++cur[i];
          break;
        }
        cur[i] = lo[i];
      }
      if (i == n) break;
    }
    counts.push_back(count);
  }
  // Delta^n L(0) = sum (-1)^(n-k) C(n,k) L(k) = n! * leading coefficient.
  std::int64_t acc = 0, binom = 1;
  for (std::int64_t k = 0; k <= static_cast<std::int64_t>(n); ++k) {
    std::int64_t sign = ((n - k) % 2 == 0) ? 1 : -1;
    acc += sign * binom * counts[k];
    binom = binom * (static_cast<std::int64_t>(n) - k) / (k + 1);
  }
  return acc;
}

inline std::shared_ptr<const PolytopeAtInfinity> polytope_of(const Rows& rows) {
  return std::make_shared<const PolytopeAtInfinity>(newton_polytope(validate_matrix(rows)));
}

/// Small instances used across suites: intervals, an interior-origin triangle, the Gauss pyramid.
inline const std::vector<Rows>& fixture_matrices() {
  static const std::vector<Rows> all = {
      {{1}}, {{2}}, {{1, 2}}, {{-1, 1}}, kGauss,
      {{1, 0, -1}, {0, 1, -1}}, {{1, 2, 0}, {0, 1, 1}}, {{2, 0, 1}, {0, 2, 1}}, {{1, 1, -1}, {0, 2, 1}},
  };
  return all;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20261018);
  return gen;
}

inline std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng());
}

inline Rational random_rational(std::int64_t span = 5, std::int64_t max_den = 3) {
  return ratio(uniform(-span, span), uniform(1, max_den));
}

}  // namespace gkz::testing
