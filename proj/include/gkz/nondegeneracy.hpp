#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "gkz/errors.hpp"
#include "gkz/koszul.hpp"
#include "gkz/semigroup.hpp"
#include "gkz/sparse_matrix.hpp"

namespace gkz {

/// f_Gamma = sum of a_j t^{w_j} over the columns on Gamma; repeated columns add up.
inline RingElement face_polynomial(const std::vector<Rational>& a, const Face& face, const PolytopeAtInfinity& p) {
  if (face.contains_origin) throw FaceContainsOrigin("face " + std::to_string(face.id) + " contains the origin");
  if (a.size() != p.matrix().N()) throw ShapeMismatch("fiber length differs from the number of columns");
  RingElement f;
  for (auto j : face.columns) f.add(p.matrix().column(j), a[j]);
  return f;
}

/// Greedy choice of dim Gamma + 1 row indices (0-based) whose log-derivatives on Gamma span the
/// same space as all n of them; nullopt when the span is smaller (the Deficient case).
inline std::optional<std::vector<std::size_t>> choose_spanning_subset(const std::vector<Rational>& a, const Face& face,
                                                                      const PolytopeAtInfinity& p) {
  auto g = log_derivative_classes(a, p, face.id);
  std::map<LatticeVector, std::size_t> position;
  for (auto j : face.columns) position.emplace(p.matrix().column(j), position.size());
  EchelonBasis span;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < g.size(); ++i) {
    SparseVector v;
    for (const auto& [w, c] : g[i].terms()) v[position.at(w)] = c;
    if (span.insert(std::move(v))) chosen.push_back(i);
  }
  if (chosen.size() < static_cast<std::size_t>(face.dimension + 1)) return std::nullopt;
  return chosen;
}

struct FaceCertificate {
  std::size_t face_id = 0;
  int dimension = 0;
  bool deficient = false;
  std::vector<std::size_t> spanning_indices;
  std::vector<std::size_t> quotient_dims;  // degree d -> dim of R_Gamma / (g_i) in degree d
  PolynomialQ expected;                    // P_{R_Gamma}(t) (1 - t^M)^{dim Gamma + 1}
  std::int64_t bound_used = 0;
  bool finite = false;
};

struct NondegeneracyReport {
  bool overall = true;
  std::vector<FaceCertificate> per_face;

  std::vector<std::size_t> offending_faces() const {
    std::vector<std::size_t> out;
    for (const auto& c : per_face)
      if (!c.finite) out.push_back(c.face_id);
    return out;
  }
};

/// Decides whether R_Gamma / (g_{i_1}, ..., g_{i_k}) is finite-dimensional. A finite quotient by
/// k = dim Gamma + 1 homogeneous elements in the Cohen-Macaulay ring R_Gamma is a regular-sequence
/// quotient, so its series is the expected polynomial; conversely vanishing on a window of length
/// G past that degree forces vanishing everywhere above.
inline FaceCertificate certify_face(const std::vector<Rational>& a, const Face& face,
                                    std::shared_ptr<const PolytopeAtInfinity> p) {
  FaceCertificate cert;
  cert.face_id = face.id;
  cert.dimension = face.dimension;
  auto ring = GradedRingHandle::facial(p, face.id);
  cert.expected = expected_top_polynomial(ring);
  auto chosen = choose_spanning_subset(a, face, *p);
  if (!chosen) {
    cert.deficient = true;
    return cert;
  }
  cert.spanning_indices = *chosen;
  auto all = log_derivative_classes(a, *p, face.id);
  std::vector<RingElement> seq;
  for (auto i : *chosen) seq.push_back(all[i]);
  const std::int64_t m = p->gauge_denominator();
  TopQuotient<GradedRingHandle> quotient(ring, seq, std::vector<std::int64_t>(seq.size(), m));
  const std::int64_t e = cert.expected.degree();
  cert.bound_used = e + ring.generator_degree_bound();
  cert.finite = true;
  for (std::int64_t d = 0; d <= cert.bound_used; ++d) {
    const std::size_t dim = quotient.dimension(d);
    cert.quotient_dims.push_back(dim);
    if (cert.expected[static_cast<std::size_t>(d)] != static_cast<long>(dim)) cert.finite = false;
  }
  return cert;
}

/// Certificates for every proper face of Delta avoiding the origin, ordered by face id.
inline NondegeneracyReport is_nondegenerate(std::shared_ptr<const PolytopeAtInfinity> p, const std::vector<Rational>& a) {
  if (a.size() != p->matrix().N())
    throw ShapeMismatch("fiber has " + std::to_string(a.size()) + " entries, expected " + std::to_string(p->matrix().N()));
  NondegeneracyReport report;
  for (const auto& f : p->faces()) {
    if (f.contains_origin) continue;
    report.per_face.push_back(certify_face(a, f, p));
    if (!report.per_face.back().finite) report.overall = false;
  }
  return report;
}

}  // namespace gkz
