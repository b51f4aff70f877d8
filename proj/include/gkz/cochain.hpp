#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gkz/errors.hpp"
#include "gkz/sparse_matrix.hpp"

namespace gkz {

/// A finite cochain complex of Q-vector spaces C^{q_min} -> ... -> C^{q_max}.
/// differentials[k] maps degree q_min + k to q_min + k + 1.
struct CochainComplexQ {
  int q_min = 0;
  std::vector<std::vector<std::string>> labels;
  std::vector<SparseRationalMatrix> differentials;

  int q_max() const { return q_min + static_cast<int>(labels.size()) - 1; }

  std::size_t dim(int q) const {
    if (q < q_min || q > q_max()) return 0;
    return labels[q - q_min].size();
  }

  /// Differential out of degree q; an empty matrix of the right shape outside the range.
  SparseRationalMatrix d(int q) const {
    if (q >= q_min && q < q_max()) return differentials[q - q_min];
    return SparseRationalMatrix(dim(q + 1), dim(q));
  }

  void validate() const {
    if (labels.empty() ? !differentials.empty() : differentials.size() + 1 != labels.size())
      throw ShapeMismatch("complex needs one differential between consecutive degrees");
    for (std::size_t k = 0; k < differentials.size(); ++k)
      if (differentials[k].cols() != labels[k].size() || differentials[k].rows() != labels[k + 1].size())
        throw ShapeMismatch("differential " + std::to_string(k) + " has the wrong shape");
  }

  /// d_{q+1} o d_q == 0 for all q, checked by exact matrix products.
  bool is_complex() const {
    for (std::size_t k = 0; k + 1 < differentials.size(); ++k)
      if (!(differentials[k + 1] * differentials[k]).is_zero()) return false;
    return true;
  }

  /// dim H^q = dim C^q - rank d_q - rank d_{q-1}.
  std::map<int, std::size_t> cohomology_dims() const {
    std::vector<std::size_t> ranks;
    for (const auto& m : differentials) ranks.push_back(rank_and_kernel(m).rank);
    std::map<int, std::size_t> out;
    for (int q = q_min; q <= q_max(); ++q) {
      std::size_t k = q - q_min;
      std::size_t r_out = k < ranks.size() ? ranks[k] : 0;
      std::size_t r_in = k > 0 ? ranks[k - 1] : 0;
      out[q] = dim(q) - r_out - r_in;
    }
    return out;
  }

  /// Sum of (-1)^q dim C^q.
  std::int64_t euler_characteristic() const {
    std::int64_t chi = 0;
    for (int q = q_min; q <= q_max(); ++q)
      chi += ((q % 2 == 0) ? 1 : -1) * static_cast<std::int64_t>(dim(q));
    return chi;
  }
};

/// A complex split into finite pieces by an internal degree, with cohomology per piece.
struct GradedComplex {
  std::map<std::int64_t, CochainComplexQ> by_degree;

  std::map<std::int64_t, std::map<int, std::size_t>> cohomology_by_degree() const {
    std::map<std::int64_t, std::map<int, std::size_t>> out;
    for (const auto& [d, c] : by_degree) out[d] = c.cohomology_dims();
    return out;
  }

  std::map<int, std::size_t> total_cohomology() const {
    std::map<int, std::size_t> out;
    for (const auto& [d, dims] : cohomology_by_degree())
      for (const auto& [q, h] : dims) out[q] += h;
    return out;
  }
};

}  // namespace gkz
