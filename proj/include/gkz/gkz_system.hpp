#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gkz/errors.hpp"
#include "gkz/lattice.hpp"
#include "gkz/rational.hpp"

namespace gkz {

struct EulerOperator {
  LatticeVector row_weights;  // row i of A
  Rational gamma_shift;
};

struct BoxOperator {
  LatticeVector lambda;  // A lambda = 0
};

namespace detail {

using BigRow = std::vector<BigInt>;

/// Row Hermite normal form in place: pivots positive, entries above a pivot reduced into [0, pivot).
/// Returns the number of nonzero rows, which come first.
inline std::size_t hermite_rows(std::vector<BigRow>& m, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    // Euclid on column c among rows r..end
    while (true) {
      std::size_t best = m.size();
      for (std::size_t i = r; i < m.size(); ++i)
        if (m[i][c] != 0 && (best == m.size() || abs(m[i][c]) < abs(m[best][c]))) best = i;
      if (best == m.size()) break;
      std::swap(m[r], m[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < m.size(); ++i) {
        if (m[i][c] == 0) continue;
        BigInt f = m[i][c] / m[r][c];
        for (std::size_t k = c; k < m[i].size(); ++k) m[i][k] -= f * m[r][k];
        if (m[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (m[r][c] == 0) continue;
    if (m[r][c] < 0)
      for (auto& x : m[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      BigInt f;
      mpz_fdiv_q(f.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
      if (f != 0)
        for (std::size_t k = c; k < m[i].size(); ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

inline std::string subscript(std::size_t k) {
  static const char* digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
  std::string s;
  for (char ch : std::to_string(k)) s += digits[ch - '0'];
  return s;
}

}  // namespace detail

/// Z-basis of {lambda in Z^N : A lambda = 0} in Hermite normal form.
inline std::vector<BoxOperator> lattice_kernel(const ExponentMatrix& a) {
  const std::size_t n = a.n(), N = a.N();
  // rows [w_j | e_j]; unimodular row operations keep the right block a basis of Z^N
  std::vector<detail::BigRow> m(N, detail::BigRow(n + N, 0));
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t i = 0; i < n; ++i) m[j][i] = static_cast<long>(a.entry(i, j));
    m[j][n + j] = 1;
  }
  const std::size_t rank = detail::hermite_rows(m, n);
  std::vector<detail::BigRow> kernel;
  for (std::size_t j = rank; j < N; ++j) kernel.emplace_back(m[j].begin() + static_cast<std::ptrdiff_t>(n), m[j].end());
  const std::size_t k = detail::hermite_rows(kernel, N);
  std::vector<BoxOperator> out;
  for (std::size_t r = 0; r < k; ++r) {
    LatticeVector v;
    for (const auto& x : kernel[r]) v.push_back(to_int64(x));
    out.push_back({std::move(v)});
  }
  return out;
}

inline bool is_relation(const ExponentMatrix& a, const LatticeVector& lambda) {
  if (lambda.size() != a.N()) return false;
  for (std::size_t i = 0; i < a.n(); ++i) {
    BigInt s = 0;
    for (std::size_t j = 0; j < a.N(); ++j) s += BigInt(static_cast<long>(a.entry(i, j))) * static_cast<long>(lambda[j]);
    if (s != 0) return false;
  }
  return true;
}

/// Validated generator: a nonzero integer relation among the columns.
inline BoxOperator box_operator(const ExponentMatrix& a, LatticeVector lambda) {
  if (lambda.size() != a.N()) throw NotARelation("relation has " + std::to_string(lambda.size()) + " entries, expected " + std::to_string(a.N()));
  if (is_zero(lambda)) throw NotARelation("zero vector is not a generator");
  if (!is_relation(a, lambda)) throw NotARelation("A * (" + to_string(lambda) + ") != 0");
  return {std::move(lambda)};
}

/// lambda+ and lambda- have the same A-degree, so the two sides of the box operator move a monomial
/// family x^u to the same graded piece.
inline bool box_degrees_agree(const ExponentMatrix& a, const LatticeVector& lambda) {
  LatticeVector plus(a.n(), 0), minus(a.n(), 0);
  for (std::size_t j = 0; j < a.N(); ++j) {
    if (lambda[j] > 0) plus = plus + scaled(a.column(j), lambda[j]);
    if (lambda[j] < 0) minus = minus + scaled(a.column(j), -lambda[j]);
  }
  return plus == minus;
}

inline std::string render_box(const LatticeVector& lambda) {
  if (is_zero(lambda)) return "0";
  auto side = [&](int sign) {
    std::string s;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      const std::int64_t e = lambda[j] * sign;
      if (e <= 0) continue;
      s += "∂" + detail::subscript(j + 1);
      if (e > 1) s += "^" + std::to_string(e);
    }
    return s.empty() ? std::string("1") : s;
  };
  return side(1) + " − " + side(-1);
}

inline std::string render_box(const BoxOperator& b) { return render_box(b.lambda); }

inline std::vector<EulerOperator> euler_operators(const ExponentMatrix& a, const RationalVector& gamma) {
  if (gamma.size() != a.n()) throw ShapeMismatch("gamma has " + std::to_string(gamma.size()) + " entries, expected " + std::to_string(a.n()));
  std::vector<EulerOperator> out;
  for (std::size_t i = 0; i < a.n(); ++i) out.push_back({a.row(i), gamma[i]});
  return out;
}

/// Reassembles A and gamma from the operators.
inline std::pair<std::vector<LatticeVector>, RationalVector> transcribe_back(const std::vector<EulerOperator>& ops) {
  std::pair<std::vector<LatticeVector>, RationalVector> out;
  for (const auto& op : ops) {
    out.first.push_back(op.row_weights);
    out.second.push_back(op.gamma_shift);
  }
  return out;
}

inline std::string render_euler(const EulerOperator& op) {
  std::string s;
  auto term = [&](bool negative, const std::string& body) {
    if (s.empty()) s = negative ? "−" + body : body;
    else s += (negative ? " − " : " + ") + body;
  };
  for (std::size_t j = 0; j < op.row_weights.size(); ++j) {
    const std::int64_t w = op.row_weights[j];
    if (w == 0) continue;
    const std::int64_t mag = w < 0 ? -w : w;
    term(w < 0, (mag == 1 ? std::string() : std::to_string(mag)) + "x" + detail::subscript(j + 1) + "∂" + detail::subscript(j + 1));
  }
  if (op.gamma_shift != 0) term(op.gamma_shift < 0, to_string(Rational(abs(op.gamma_shift))));
  return s.empty() ? "0" : s;
}

}  // namespace gkz
