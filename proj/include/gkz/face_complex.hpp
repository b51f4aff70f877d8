#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gkz/cochain.hpp"
#include "gkz/polytope.hpp"

namespace gkz {

/// Weight-independent shape of the resolution A: A^q = sum of R_Gamma over Gamma in I_{n-1-q},
/// followed by the constant ring in degree n when the origin is interior.
struct FaceComplex {
  std::vector<std::vector<std::size_t>> faces_by_degree;  // index q -> face ids of I_{n-1-q}
  bool augmented = false;
};

inline FaceComplex build_face_complex(const PolytopeAtInfinity& p) {
  FaceComplex fc;
  const int n = static_cast<int>(p.n());
  for (int q = 0; q < n; ++q) fc.faces_by_degree.push_back(p.resolution_faces(n - 1 - q));
  fc.augmented = p.origin_interior();
  return fc;
}

/// The finite complex A(w): one copy of Q for each summand whose cone contains w, with the
/// signed face projections (and the augmentation 1 on every vertex when w = 0).
inline CochainComplexQ face_complex_at(const PolytopeAtInfinity& p, const FaceComplex& fc, const LatticeVector& w) {
  CochainComplexQ c;
  std::vector<std::vector<std::size_t>> present;
  for (const auto& ids : fc.faces_by_degree) {
    std::vector<std::size_t> keep;
    std::vector<std::string> labels;
    for (auto id : ids)
      if (p.in_face_cone(w, p.face(id))) {
        keep.push_back(id);
        labels.push_back("face " + std::to_string(id));
      }
    present.push_back(std::move(keep));
    c.labels.push_back(std::move(labels));
  }
  const bool augment = fc.augmented && is_zero(w);
  if (fc.augmented) c.labels.push_back(augment ? std::vector<std::string>{"constants"} : std::vector<std::string>{});

  for (std::size_t q = 0; q + 1 < present.size(); ++q) {
    std::map<std::size_t, std::size_t> row_of;
    for (std::size_t r = 0; r < present[q + 1].size(); ++r) row_of[present[q + 1][r]] = r;
    SparseRationalMatrix m(present[q + 1].size(), present[q].size());
    for (std::size_t col = 0; col < present[q].size(); ++col)
      for (const auto& [sub, sign] : p.face(present[q][col]).boundary)
        if (auto it = row_of.find(sub); it != row_of.end()) m.add(it->second, col, sign);
    c.differentials.push_back(std::move(m));
  }
  if (fc.augmented) {
    SparseRationalMatrix eps(augment ? 1 : 0, present.back().size());
    if (augment)
      for (std::size_t col = 0; col < present.back().size(); ++col) eps.add(0, col, 1);
    c.differentials.push_back(std::move(eps));
  }
  return c;
}

struct FaceComplexWeightResult {
  LatticeVector weight;
  std::int64_t degree = 0;
  std::map<int, std::size_t> cohomology;
  bool passed = false;
};

struct FaceComplexVerdict {
  bool exact = true;
  std::size_t weights_checked = 0;
  std::int64_t weight_bound = 0;
  std::optional<FaceComplexWeightResult> first_failure;
  std::vector<FaceComplexWeightResult> results;
};

/// For every w in delta with M rho(w) <= bound: H^0(A(w)) is one-dimensional and H^q(A(w)) = 0
/// for q != 0. Weights with the same set of containing cones share one computation.
inline FaceComplexVerdict check_face_complex_exactness(const PolytopeAtInfinity& p, std::int64_t weight_bound) {
  FaceComplexVerdict v;
  v.weight_bound = weight_bound;
  FaceComplex fc = build_face_complex(p);
  std::map<std::pair<std::vector<bool>, bool>, std::map<int, std::size_t>> memo;
  for (std::int64_t d = 0; d <= weight_bound; ++d) {
    for (const auto& w : p.degree_slice(d)) {
      std::vector<bool> signature;
      for (const auto& ids : fc.faces_by_degree)
        for (auto id : ids) signature.push_back(p.in_face_cone(w, p.face(id)));
      auto key = std::make_pair(signature, is_zero(w));
      auto it = memo.find(key);
      if (it == memo.end()) {
        auto c = face_complex_at(p, fc, w);
        if (!c.is_complex()) throw Error("InternalError", "face complex differential does not square to zero");
        it = memo.emplace(key, c.cohomology_dims()).first;
      }
      FaceComplexWeightResult r{w, d, it->second, true};
      for (const auto& [q, h] : r.cohomology)
        if (h != (q == 0 ? 1u : 0u)) r.passed = false;
      ++v.weights_checked;
      if (!r.passed && v.exact) {
        v.exact = false;
        v.first_failure = r;
      }
      v.results.push_back(std::move(r));
    }
  }
  return v;
}

}  // namespace gkz
