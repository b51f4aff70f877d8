#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "gkz/errors.hpp"
#include "gkz/rational.hpp"

namespace gkz {

/// Sparse vector over Q: index -> nonzero value, ordered by index.
using SparseVector = std::map<std::size_t, Rational>;

inline void axpy(SparseVector& y, const Rational& alpha, const SparseVector& x) {
  for (const auto& [i, v] : x) {
    auto [it, inserted] = y.try_emplace(i, 0);
    it->second += alpha * v;
    if (it->second == 0) y.erase(it);
  }
}

class SparseRationalMatrix {
 public:
  SparseRationalMatrix() = default;
  SparseRationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  void add(std::size_t r, std::size_t c, const Rational& v) {
    if (r >= rows_ || c >= cols_) throw ShapeMismatch("matrix index out of range");
    if (v == 0) return;
    auto [it, inserted] = data_[r].try_emplace(c, 0);
    it->second += v;
    if (it->second == 0) data_[r].erase(it);
  }

  Rational at(std::size_t r, std::size_t c) const {
    auto it = data_.at(r).find(c);
    return it == data_[r].end() ? Rational(0) : it->second;
  }

  const SparseVector& row(std::size_t r) const { return data_.at(r); }

  std::size_t nonzeros() const {
    std::size_t k = 0;
    for (const auto& r : data_) k += r.size();
    return k;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const auto& r) { return r.empty(); });
  }

  SparseRationalMatrix transposed() const {
    SparseRationalMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (const auto& [c, v] : data_[r]) t.data_[c].emplace(r, v);
    return t;
  }

  /// Triplets (row, col, value) in row-major order.
  std::vector<std::tuple<std::size_t, std::size_t, Rational>> triplets() const {
    std::vector<std::tuple<std::size_t, std::size_t, Rational>> out;
    for (std::size_t r = 0; r < rows_; ++r)
      for (const auto& [c, v] : data_[r]) out.emplace_back(r, c, v);
    return out;
  }

  friend SparseRationalMatrix operator*(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
    if (a.cols_ != b.rows_) throw ShapeMismatch("incompatible matrix product");
    SparseRationalMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (const auto& [k, v] : a.data_[r]) axpy(out.data_[r], v, b.data_[k]);
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<SparseVector> data_;
};

struct RankKernel {
  std::size_t rank = 0;
  std::size_t kernel_dim = 0;
};

/// Exact rank by sparse elimination. The pivot is chosen Markowitz-style: the sparsest remaining
/// row, and within it the column touching the fewest rows.
inline RankKernel rank_and_kernel(const SparseRationalMatrix& m) {
  std::vector<SparseVector> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!m.row(r).empty()) rows.push_back(m.row(r));
  std::vector<std::set<std::size_t>> col_rows(m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r]) col_rows[c].insert(r);
  std::set<std::pair<std::size_t, std::size_t>> by_size;  // (nonzeros, row)
  for (std::size_t r = 0; r < rows.size(); ++r) by_size.emplace(rows[r].size(), r);

  std::size_t rank = 0;
  while (!by_size.empty()) {
    auto [size, pr] = *by_size.begin();
    by_size.erase(by_size.begin());
    if (size == 0) continue;
    std::size_t pc = rows[pr].begin()->first;
    for (const auto& [c, v] : rows[pr])
      if (col_rows[c].size() < col_rows[pc].size()) pc = c;
    const SparseVector pivot = rows[pr];
    const Rational pv = pivot.at(pc);
    for (const auto& [c, v] : pivot) col_rows[c].erase(pr);
    std::vector<std::size_t> targets(col_rows[pc].begin(), col_rows[pc].end());
    for (auto r : targets) {
      by_size.erase({rows[r].size(), r});
      for (const auto& [c, v] : rows[r]) col_rows[c].erase(r);
      axpy(rows[r], -rows[r].at(pc) / pv, pivot);
      for (const auto& [c, v] : rows[r]) col_rows[c].insert(r);
      by_size.emplace(rows[r].size(), r);
    }
    rows[pr].clear();
    ++rank;
  }
  return {rank, m.cols() - rank};
}

/// Row echelon form built incrementally, pivoting on the least column index of each reduced row.
/// Optionally records each stored row as a combination of the inserted vectors, so membership
/// queries can return coefficients.
class EchelonBasis {
 public:
  explicit EchelonBasis(bool track_provenance = false) : track_(track_provenance) {}

  /// Inserts v; returns true if it enlarged the span.
  bool insert(SparseVector v) {
    SparseVector combo;
    if (track_) combo.emplace(inserted_, 1);
    ++inserted_;
    reduce_in_place(v, combo);
    if (v.empty()) return false;
    std::size_t p = v.begin()->first;
    Rational lead = v.begin()->second;
    for (auto& [c, x] : v) x /= lead;
    for (auto& [c, x] : combo) x /= lead;
    pivots_.emplace(p, Row{std::move(v), std::move(combo)});
    return true;
  }

  std::size_t rank() const noexcept { return pivots_.size(); }
  std::size_t inserted() const noexcept { return inserted_; }
  bool is_pivot(std::size_t col) const { return pivots_.count(col) != 0; }

  /// Reduces v modulo the span. The remainder has no entries on pivot columns; `combo`
  /// receives the coefficients (over inserted vectors) of the subtracted span element.
  SparseVector reduce(SparseVector v, SparseVector* combo = nullptr) const {
    SparseVector c;
    reduce_in_place(v, c);
    if (combo) {
      combo->clear();
      for (auto& [k, x] : c) (*combo)[k] = -x;
    }
    return v;
  }

  bool contains(const SparseVector& v) const { return reduce(v).empty(); }

 private:
  struct Row {
    SparseVector vec;
    SparseVector combo;
  };

  void reduce_in_place(SparseVector& v, SparseVector& combo) const {
    auto it = v.begin();
    while (it != v.end()) {
      auto pit = pivots_.find(it->first);
      if (pit == pivots_.end()) {
        ++it;
        continue;
      }
      std::size_t col = it->first;
      Rational f = it->second;
      axpy(v, -f, pit->second.vec);
      if (track_) axpy(combo, -f, pit->second.combo);
      it = v.upper_bound(col);
    }
  }

  bool track_;
  std::size_t inserted_ = 0;
  std::map<std::size_t, Row> pivots_;
};

}  // namespace gkz
