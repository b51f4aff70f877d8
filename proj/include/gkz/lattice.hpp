#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gkz/errors.hpp"
#include "gkz/rational.hpp"

namespace gkz {

/// A point of Z^n. Comparison is lexicographic, which fixes every basis order in the library.
using LatticeVector = std::vector<std::int64_t>;

struct LatticeVectorHash {
  std::size_t operator()(const LatticeVector& v) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto x : v) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

inline LatticeVector operator+(const LatticeVector& a, const LatticeVector& b) {
  LatticeVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline LatticeVector operator-(const LatticeVector& a, const LatticeVector& b) {
  LatticeVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline LatticeVector scaled(const LatticeVector& a, std::int64_t k) {
  LatticeVector r(a);
  for (auto& x : r) x *= k;
  return r;
}

inline std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool is_zero(const LatticeVector& v) {
  return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
}

inline std::string to_string(const LatticeVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

/// Divides out the gcd of the entries; the zero vector is returned unchanged.
inline LatticeVector primitive(LatticeVector v) {
  std::int64_t g = 0;
  for (auto x : v) g = gcd64(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Rank over Q by fraction-carrying Gaussian elimination (dense; for small matrices).
inline int rational_rank(RationalMatrix m) {
  int rank = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

inline int integer_rank(const std::vector<LatticeVector>& rows) {
  RationalMatrix m;
  for (const auto& r : rows) {
    std::vector<Rational> row;
    for (auto x : r) row.emplace_back(x);
    m.push_back(std::move(row));
  }
  return rational_rank(std::move(m));
}

/// Exact determinant of a square integer matrix (Bareiss).
inline BigInt determinant(const std::vector<LatticeVector>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = rows[i][j];
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Integer normal to the span of n-1 vectors in Z^n (signed maximal minors).
/// Zero iff the vectors are linearly dependent. For n = 1 the normal is (1).
inline LatticeVector cofactor_normal(const std::vector<LatticeVector>& vectors, std::size_t n) {
  LatticeVector normal(n);
  for (std::size_t skip = 0; skip < n; ++skip) {
    std::vector<LatticeVector> minor;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == skip) continue;
      LatticeVector row;
      for (const auto& v : vectors) row.push_back(v[r]);
      minor.push_back(std::move(row));
    }
    BigInt d = determinant(minor);
    normal[skip] = to_int64((skip % 2 == 0) ? d : BigInt(-d));
  }
  return normal;
}

/// The n x N integer matrix A; columns are the exponent vectors w_j.
class ExponentMatrix {
 public:
  ExponentMatrix() = default;

  std::size_t n() const noexcept { return n_; }
  std::size_t N() const noexcept { return columns_.size(); }
  const std::vector<LatticeVector>& columns() const noexcept { return columns_; }
  const LatticeVector& column(std::size_t j) const { return columns_.at(j); }
  std::int64_t entry(std::size_t i, std::size_t j) const { return columns_.at(j).at(i); }

  LatticeVector row(std::size_t i) const {
    LatticeVector r;
    for (const auto& c : columns_) r.push_back(c.at(i));
    return r;
  }

  std::vector<LatticeVector> rows() const {
    std::vector<LatticeVector> out;
    for (std::size_t i = 0; i < n_; ++i) out.push_back(row(i));
    return out;
  }

  friend ExponentMatrix validate_matrix(const std::vector<std::vector<std::int64_t>>& rows);

 private:
  std::size_t n_ = 0;
  std::vector<LatticeVector> columns_;
};

/// Accepts the row list of A; requires rectangular shape and rank equal to the number of rows.
inline ExponentMatrix validate_matrix(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) throw ShapeMismatch("matrix has no rows");
  const std::size_t N = rows.front().size();
  if (N == 0) throw ShapeMismatch("matrix has no columns");
  for (const auto& r : rows)
    if (r.size() != N) throw ShapeMismatch("ragged matrix rows");
  int rank = integer_rank(rows);
  if (rank < static_cast<int>(rows.size())) throw RankDeficient(rank, static_cast<int>(rows.size()));
  ExponentMatrix a;
  a.n_ = rows.size();
  for (std::size_t j = 0; j < N; ++j) {
    LatticeVector c;
    for (const auto& r : rows) c.push_back(r[j]);
    a.columns_.push_back(std::move(c));
  }
  return a;
}

/// Rational vector (used for the parameter gamma and fibers a).
using RationalVector = std::vector<Rational>;

inline Rational dot(std::span<const std::int64_t> a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
  return s;
}

}  // namespace gkz
