#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gkz/errors.hpp"
#include "gkz/lattice.hpp"
#include "gkz/polytope.hpp"
#include "gkz/rational.hpp"
#include "gkz/series.hpp"

namespace gkz {

/// Finite Q-linear combination of monomials t^w.
class RingElement {
 public:
  RingElement() = default;
  static RingElement monomial(const LatticeVector& w, const Rational& c = 1) {
    RingElement r;
    r.add(w, c);
    return r;
  }

  const std::map<LatticeVector, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Rational coefficient(const LatticeVector& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(const LatticeVector& w, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, 0);
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  friend RingElement operator+(RingElement a, const RingElement& b) {
    for (const auto& [w, c] : b.terms_) a.add(w, c);
    return a;
  }
  friend RingElement operator-(RingElement a, const RingElement& b) {
    for (const auto& [w, c] : b.terms_) a.add(w, -c);
    return a;
  }
  friend RingElement operator*(const Rational& s, const RingElement& a) {
    RingElement r;
    for (const auto& [w, c] : a.terms_) r.add(w, s * c);
    return r;
  }
  friend bool operator==(const RingElement&, const RingElement&) = default;

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [w, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += gkz::to_string(c) + "*t^(" + gkz::to_string(w) + ")";
    }
    return s;
  }

 private:
  std::map<LatticeVector, Rational> terms_;
};

/// Associated graded product of monomials: w1 + w2 if both lie in the cone over one face that
/// avoids the origin, otherwise zero.
inline std::optional<LatticeVector> gr_multiply(const LatticeVector& w1, const LatticeVector& w2,
                                                const PolytopeAtInfinity& p) {
  Rational r1 = p.gauge(w1), r2 = p.gauge(w2);
  // Every face avoiding 0 lies in a facet avoiding 0, so facets suffice.
  for (const auto& f : p.facets()) {
    if (f.level == 0) continue;
    if (Rational(dot(f.normal, w1)) == r1 * f.level && Rational(dot(f.normal, w2)) == r2 * f.level)
      return w1 + w2;
  }
  return std::nullopt;
}

/// Lattice points of the half-open parallelepiped sum lambda_i g_i, lambda in (0,1]^k, for
/// linearly independent generators. Each point comes with its lambda.
struct ParallelepipedPoint {
  LatticeVector point;
  std::vector<Rational> lambda;
};

inline std::vector<ParallelepipedPoint> half_open_parallelepiped(const std::vector<LatticeVector>& gens) {
  const std::size_t k = gens.size();
  const std::size_t n = gens.front().size();
  // Pick k rows on which the generators are independent, and invert that block.
  std::vector<std::size_t> rows;
  {
    RationalMatrix acc;
    for (std::size_t i = 0; i < n && rows.size() < k; ++i) {
      RationalMatrix trial = acc;
      RationalVector row(k);
      for (std::size_t c = 0; c < k; ++c) row[c] = gens[c][i];
      trial.push_back(row);
      if (rational_rank(trial) == static_cast<int>(trial.size())) {
        acc = std::move(trial);
        rows.push_back(i);
      }
    }
    if (rows.size() != k) throw RankDeficient(static_cast<int>(rows.size()), static_cast<int>(k));
  }
  RationalMatrix inv(k, RationalVector(k));
  {
    RationalMatrix m(k, RationalVector(2 * k));
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) m[r][c] = gens[c][rows[r]];
      m[r][k + r] = 1;
    }
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t piv = c;
      while (m[piv][c] == 0) ++piv;
      std::swap(m[piv], m[c]);
      Rational s = m[c][c];
      for (auto& x : m[c]) x /= s;
      for (std::size_t r = 0; r < k; ++r) {
        if (r == c || m[r][c] == 0) continue;
        Rational f = m[r][c];
        for (std::size_t j = 0; j < 2 * k; ++j) m[r][j] -= f * m[c][j];
      }
    }
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) inv[r][c] = m[r][k + c];
  }
  std::vector<std::int64_t> lo(n, 0), hi(n, 0);
  for (const auto& g : gens)
    for (std::size_t i = 0; i < n; ++i) (g[i] < 0 ? lo[i] : hi[i]) += g[i];

  std::vector<ParallelepipedPoint> out;
  LatticeVector cur(lo);
  while (true) {
    std::vector<Rational> lambda(k, Rational(0));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) lambda[r] += inv[r][c] * cur[rows[c]];
    bool ok = std::all_of(lambda.begin(), lambda.end(), [](const Rational& x) { return x > 0 && x <= 1; });
    for (std::size_t i = 0; ok && i < n; ++i) {
      Rational s = 0;
      for (std::size_t c = 0; c < k; ++c) s += lambda[c] * gens[c][i];
      if (s != cur[i]) ok = false;
    }
    if (ok) out.push_back({cur, lambda});
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
  return out;
}

/// The semigroup ring K[delta cap Z^n] (full) or K[R>=0 Gamma cap Z^n] (facial), graded by
/// M * rho and multiplied in the associated graded sense. Copies share the degree cache.
class GradedRingHandle {
 public:
  static GradedRingHandle full(std::shared_ptr<const PolytopeAtInfinity> p) {
    return GradedRingHandle(std::move(p), std::nullopt);
  }

  static GradedRingHandle facial(std::shared_ptr<const PolytopeAtInfinity> p, std::size_t face_id) {
    if (p->face(face_id).contains_origin)
      throw FaceContainsOrigin("face " + std::to_string(face_id) + " contains the origin");
    return GradedRingHandle(std::move(p), face_id);
  }

  const PolytopeAtInfinity& polytope() const noexcept { return *p_; }
  std::shared_ptr<const PolytopeAtInfinity> polytope_ptr() const noexcept { return p_; }
  bool is_facial() const noexcept { return face_.has_value(); }
  std::optional<std::size_t> face_id() const noexcept { return face_; }
  std::int64_t gauge_denominator() const noexcept { return p_->gauge_denominator(); }

  /// Krull dimension: n for the full ring, dim Gamma + 1 for a facial ring.
  std::size_t cone_dimension() const {
    return face_ ? static_cast<std::size_t>(p_->face(*face_).dimension + 1) : p_->n();
  }

  bool contains(const LatticeVector& w) const {
    return face_ ? p_->in_face_cone(w, p_->face(*face_)) : p_->in_cone(w);
  }

  std::int64_t degree(const LatticeVector& w) const {
    if (!contains(w)) throw NotInCone("monomial " + to_string(w) + " is outside the ring");
    return p_->degree(w);
  }

  /// Monomials of degree exactly d, lexicographically sorted. Filled once per degree.
  const std::vector<LatticeVector>& graded_piece(std::int64_t d) const {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->pieces.find(d);
    if (it != cache_->pieces.end()) return it->second;
    std::vector<LatticeVector> piece;
    if (d >= 0) {
      for (auto& w : p_->degree_slice(d))
        if (!face_ || p_->in_face_cone(w, p_->face(*face_))) piece.push_back(std::move(w));
    }
    return cache_->pieces.emplace(d, std::move(piece)).first->second;
  }

  std::size_t piece_dimension(std::int64_t d) const { return graded_piece(d).size(); }

  std::optional<LatticeVector> multiply(const LatticeVector& u, const LatticeVector& v) const {
    return gr_multiply(u, v, *p_);
  }

  RingElement multiply(const RingElement& x, const RingElement& y) const {
    RingElement out;
    for (const auto& [u, a] : x.terms())
      for (const auto& [v, b] : y.terms())
        if (auto w = multiply(u, v)) out.add(*w, a * b);
    return out;
  }

  /// Maximal faces whose cones tile the ring's cone (facets avoiding 0, or Gamma itself).
  std::vector<std::size_t> maximal_faces() const {
    if (face_) return {*face_};
    std::vector<std::size_t> out;
    for (const auto& f : p_->faces())
      if (f.dimension == static_cast<int>(p_->n()) - 1 && !f.contains_origin) out.push_back(f.id);
    return out;
  }

  /// All simplices (as sorted vertex-index sets) of the triangulated boundary complex whose open
  /// cones partition the ring's cone minus the origin.
  std::set<std::vector<std::size_t>> open_simplices(const std::vector<std::size_t>& priority = {}) const {
    std::set<std::vector<std::size_t>> out;
    for (auto fid : maximal_faces()) {
      for (auto simplex : p_->triangulation(fid, priority)) {
        std::sort(simplex.begin(), simplex.end());
        const std::size_t k = simplex.size();
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
          std::vector<std::size_t> sub;
          for (std::size_t i = 0; i < k; ++i)
            if (mask & (std::uint64_t{1} << i)) sub.push_back(simplex[i]);
          out.insert(std::move(sub));
        }
      }
    }
    return out;
  }

  /// Upper bound on the degrees of semigroup generators: every monomial of larger degree is a
  /// graded multiple of one of degree in (d - G, d].
  std::int64_t generator_degree_bound() const {
    const std::int64_t m = gauge_denominator();
    std::int64_t g = m;
    for (auto fid : maximal_faces()) {
      for (const auto& simplex : p_->triangulation(fid)) {
        std::vector<LatticeVector> gens;
        for (auto v : simplex) gens.push_back(p_->vertices()[v]);
        for (const auto& pt : half_open_parallelepiped(gens)) {
          Rational s = 0;
          for (const auto& l : pt.lambda) s += (l == 1) ? Rational(0) : l;
          g = std::max(g, integer_value(s * m));
        }
      }
    }
    return g;
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::int64_t, std::vector<LatticeVector>> pieces;
  };

  GradedRingHandle(std::shared_ptr<const PolytopeAtInfinity> p, std::optional<std::size_t> face)
      : p_(std::move(p)), face_(face), cache_(std::make_shared<Cache>()) {}

  std::shared_ptr<const PolytopeAtInfinity> p_;
  std::optional<std::size_t> face_;
  std::shared_ptr<Cache> cache_;
};

inline GradedRingHandle facial_ring(const Face& face, std::shared_ptr<const PolytopeAtInfinity> p) {
  return GradedRingHandle::facial(std::move(p), face.id);
}

/// p_{Gamma Gamma'}: keep the terms supported on the cone over the codimension-1 face Gamma'.
inline RingElement face_projection(const RingElement& x, const Face& gamma, const Face& sub,
                                   const PolytopeAtInfinity& p) {
  if (gamma.contains_origin) throw FaceContainsOrigin("face " + std::to_string(gamma.id) + " contains the origin");
  bool incident = std::any_of(gamma.boundary.begin(), gamma.boundary.end(),
                              [&](const auto& b) { return b.first == sub.id; });
  if (!incident)
    throw NotAFacePair("face " + std::to_string(sub.id) + " is not a facet of face " + std::to_string(gamma.id));
  RingElement out;
  for (const auto& [w, c] : x.terms())
    if (p.in_face_cone(w, sub)) out.add(w, c);
  return out;
}

/// Exact Poincare series sum_d dim R_d t^d, from the open simplicial cones of a triangulation.
inline RationalFunctionQ poincare_series(const GradedRingHandle& ring, const std::vector<std::size_t>& priority = {}) {
  const auto& p = ring.polytope();
  const std::size_t m = static_cast<std::size_t>(ring.gauge_denominator());
  const std::size_t dim = ring.cone_dimension();
  // Common denominator (1 - t^M)^dim.
  PolynomialQ numerator = PolynomialQ::one_minus_power(m, dim);
  for (const auto& simplex : ring.open_simplices(priority)) {
    std::vector<LatticeVector> gens;
    for (auto v : simplex) gens.push_back(p.vertices()[v]);
    PolynomialQ box;
    for (const auto& pt : half_open_parallelepiped(gens)) {
      Rational s = 0;
      for (const auto& l : pt.lambda) s += l;
      box = box + PolynomialQ::monomial(static_cast<std::size_t>(integer_value(s * static_cast<long>(m))));
    }
    numerator = numerator + box * PolynomialQ::one_minus_power(m, dim - simplex.size());
  }
  return RationalFunctionQ(numerator, PolynomialQ::one_minus_power(m, dim));
}

/// g_i = sum a_j w_ij t^{w_j} over the columns on faces avoiding 0 (on `face` when given).
inline std::vector<RingElement> log_derivative_classes(const std::vector<Rational>& a, const PolytopeAtInfinity& p,
                                                       std::optional<std::size_t> face = std::nullopt) {
  const auto& mat = p.matrix();
  if (a.size() != mat.N()) throw ShapeMismatch("fiber has " + std::to_string(a.size()) + " entries, expected " +
                                               std::to_string(mat.N()));
  std::vector<std::size_t> cols;
  if (face) {
    const Face& f = p.face(*face);
    if (f.contains_origin) throw FaceContainsOrigin("face " + std::to_string(*face) + " contains the origin");
    cols = f.columns;
  } else {
    for (std::size_t j = 0; j < mat.N(); ++j)
      if (p.degree(mat.column(j)) == p.gauge_denominator()) cols.push_back(j);
  }
  std::vector<RingElement> g(p.n());
  for (std::size_t i = 0; i < p.n(); ++i)
    for (auto j : cols) g[i].add(mat.column(j), a[j] * mat.entry(i, j));
  return g;
}

/// Toy graded polynomial ring Q[u_1..u_k] with deg u_i = weights[i], for Koszul experiments.
class PolynomialRing {
 public:
  explicit PolynomialRing(std::vector<std::int64_t> weights) : weights_(std::move(weights)) {}
  static PolynomialRing standard(std::size_t k) { return PolynomialRing(std::vector<std::int64_t>(k, 1)); }

  std::size_t variables() const noexcept { return weights_.size(); }

  bool contains(const LatticeVector& w) const {
    return w.size() == weights_.size() && std::all_of(w.begin(), w.end(), [](auto x) { return x >= 0; });
  }

  std::int64_t degree(const LatticeVector& w) const {
    if (!contains(w)) throw NotInCone("exponent " + to_string(w) + " is not in N^k");
    return dot(weights_, w);
  }

  const std::vector<LatticeVector>& graded_piece(std::int64_t d) const {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->pieces.find(d);
    if (it != cache_->pieces.end()) return it->second;
    std::vector<LatticeVector> piece;
    LatticeVector cur(weights_.size(), 0);
    if (d >= 0) fill(0, d, cur, piece);
    std::sort(piece.begin(), piece.end());
    return cache_->pieces.emplace(d, std::move(piece)).first->second;
  }

  std::optional<LatticeVector> multiply(const LatticeVector& u, const LatticeVector& v) const { return u + v; }

  RingElement multiply(const RingElement& x, const RingElement& y) const {
    RingElement out;
    for (const auto& [u, a] : x.terms())
      for (const auto& [v, b] : y.terms()) out.add(u + v, a * b);
    return out;
  }

 private:
  void fill(std::size_t i, std::int64_t rest, LatticeVector& cur, std::vector<LatticeVector>& out) const {
    if (i == weights_.size()) {
      if (rest == 0) out.push_back(cur);
      return;
    }
    for (std::int64_t e = 0; e * weights_[i] <= rest; ++e) {
      cur[i] = e;
      fill(i + 1, rest - e * weights_[i], cur, out);
      if (weights_[i] == 0) break;
    }
    cur[i] = 0;
  }

  struct Cache {
    std::mutex mutex;
    std::map<std::int64_t, std::vector<LatticeVector>> pieces;
  };
  std::vector<std::int64_t> weights_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace gkz
