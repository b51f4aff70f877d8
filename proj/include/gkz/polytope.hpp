#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gkz/errors.hpp"
#include "gkz/lattice.hpp"
#include "gkz/rational.hpp"

namespace gkz {

/// Facet inequality normal(w) <= level, with normal primitive and level >= 0.
struct FacetDescription {
  LatticeVector normal;
  std::int64_t level = 0;

  bool contains_origin() const noexcept { return level == 0; }
  auto operator<=>(const FacetDescription&) const = default;
};

/// A nonempty face of the polytope at infinity. The polytope itself is the last face.
struct Face {
  std::size_t id = 0;
  int dimension = 0;
  std::uint64_t vertex_mask = 0;           // bit i set iff vertex i of the polytope lies on the face
  std::vector<std::size_t> vertices;       // ascending; vertex order is lexicographic
  std::vector<std::size_t> facets;         // facets containing the face (empty for the polytope)
  std::vector<std::size_t> columns;        // column indices j with w_j on the face
  bool contains_origin = false;
  bool in_resolution = false;              // member of some I_p
  std::vector<std::size_t> orientation;    // dimension+1 affinely independent vertices
  // Codimension-1 subfaces with incidence sign relative to the chosen orientations.
  std::vector<std::pair<std::size_t, int>> boundary;
};

/// Delta_infinity = conv(0, w_1, ..., w_N) with its facets, faces and gauge data.
class PolytopeAtInfinity {
 public:
  const ExponentMatrix& matrix() const noexcept { return matrix_; }
  std::size_t n() const noexcept { return matrix_.n(); }
  const std::vector<LatticeVector>& vertices() const noexcept { return vertices_; }
  const std::vector<FacetDescription>& facets() const noexcept { return facets_; }
  const std::vector<Face>& faces() const noexcept { return faces_; }
  const Face& face(std::size_t id) const { return faces_.at(id); }
  const Face& whole() const { return faces_.back(); }
  std::int64_t gauge_denominator() const noexcept { return gauge_denominator_; }
  std::int64_t normalized_volume() const noexcept { return normalized_volume_; }
  bool origin_interior() const noexcept { return origin_interior_; }

  /// f_0, ..., f_{n-1}: numbers of nonempty proper faces by dimension.
  std::vector<std::size_t> f_vector() const {
    std::vector<std::size_t> f(n(), 0);
    for (const auto& face : faces_)
      if (face.dimension < static_cast<int>(n())) ++f[face.dimension];
    return f;
  }

  /// I_p: p-dimensional faces not lying on any origin-containing facet.
  std::vector<std::size_t> resolution_faces(int p) const {
    std::vector<std::size_t> out;
    for (const auto& face : faces_)
      if (face.in_resolution && face.dimension == p) out.push_back(face.id);
    return out;
  }

  bool in_cone(const LatticeVector& w) const {
    for (const auto& f : facets_)
      if (f.level == 0 && dot(f.normal, w) > 0) return false;
    return true;
  }

  /// rho(w) = inf{r >= 0 : w in r * Delta}; requires w in the cone delta.
  Rational gauge(const LatticeVector& w) const {
    if (w.size() != n()) throw ShapeMismatch("vector length differs from n");
    if (!in_cone(w)) throw NotInCone("vector " + to_string(w) + " is outside the cone delta");
    Rational best = 0;
    for (const auto& f : facets_) {
      if (f.level == 0) continue;
      Rational v = ratio(dot(f.normal, w), f.level);
      if (v > best) best = v;
    }
    return best;
  }

  /// M * rho(w), which is an integer on lattice points of delta.
  std::int64_t degree(const LatticeVector& w) const {
    Rational r = gauge(w) * gauge_denominator_;
    if (!is_integer(r)) throw Error("InternalError", "M*rho is not integral at " + to_string(w));
    return to_int64(r.get_num());
  }

  /// w lies in the cone R>=0 * face (the face must avoid the origin).
  bool in_face_cone(const LatticeVector& w, const Face& face) const {
    if (!in_cone(w)) return false;
    Rational r = gauge(w);
    for (auto fi : face.facets) {
      const auto& f = facets_[fi];
      if (Rational(dot(f.normal, w)) != r * f.level) return false;
    }
    return true;
  }

  /// Lattice points of k * Delta within the coordinate bounding box (k may be rational).
  std::vector<LatticeVector> box_points(const Rational& scale) const {
    std::vector<std::int64_t> lo(n()), hi(n());
    for (std::size_t i = 0; i < n(); ++i) {
      std::int64_t mn = 0, mx = 0;
      for (const auto& v : vertices_) {
        mn = std::min(mn, v[i]);
        mx = std::max(mx, v[i]);
      }
      lo[i] = to_int64(floor_of(scale * mn));
      hi[i] = to_int64(ceil_of(scale * mx));
    }
    std::vector<LatticeVector> out;
    LatticeVector cur(lo);
    while (true) {
      out.push_back(cur);
      std::size_t i = 0;
      for (; i < n(); ++i) {
        if (cur[i] < hi[i]) {
          ++cur[i];
          break;
        }
        cur[i] = lo[i];
      }
      if (i == n()) break;
    }
    return out;
  }

  /// Lattice points w of delta with M * rho(w) == d, in lexicographic order.
  std::vector<LatticeVector> degree_slice(std::int64_t d) const {
    std::vector<LatticeVector> out;
    for (auto& w : box_points(ratio(d, gauge_denominator_)))
      if (in_cone(w) && degree(w) == d) out.push_back(std::move(w));
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Pulling triangulation of a face. At every level the apex is the vertex of least priority;
  /// by default the priority is the lexicographic vertex order.
  std::vector<std::vector<std::size_t>> triangulation(std::size_t face_id,
                                                      const std::vector<std::size_t>& priority = {}) const {
    const Face& face = faces_.at(face_id);
    if (face.dimension == 0) return {face.vertices};
    std::size_t apex = face.vertices.front();
    if (!priority.empty())
      for (auto v : face.vertices)
        if (priority.at(v) < priority.at(apex)) apex = v;
    std::vector<std::vector<std::size_t>> out;
    for (const auto& [sub, sign] : face.boundary) {
      (void)sign;
      const Face& g = faces_[sub];
      if (g.vertex_mask & (std::uint64_t{1} << apex)) continue;
      for (auto simplex : triangulation(sub, priority)) {
        simplex.insert(simplex.begin(), apex);
        out.push_back(std::move(simplex));
      }
    }
    return out;
  }

  std::optional<std::size_t> find_face(std::uint64_t vertex_mask) const {
    for (const auto& f : faces_)
      if (f.vertex_mask == vertex_mask) return f.id;
    return std::nullopt;
  }

  friend PolytopeAtInfinity newton_polytope(const ExponentMatrix& a);

 private:
  ExponentMatrix matrix_;
  std::vector<LatticeVector> vertices_;
  std::vector<FacetDescription> facets_;
  std::vector<Face> faces_;
  std::int64_t gauge_denominator_ = 1;
  std::int64_t normalized_volume_ = 0;
  bool origin_interior_ = false;
};

namespace detail {

inline int affine_rank(const std::vector<LatticeVector>& pts) {
  if (pts.empty()) return -1;
  std::vector<LatticeVector> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(pts[i] - pts[0]);
  return diffs.empty() ? 0 : integer_rank(diffs);
}

// Sign of the orientation of tuple `a` relative to tuple `b`; both are affinely independent
// tuples of k+1 points spanning the same affine space.
inline int relative_orientation(const std::vector<LatticeVector>& a, const std::vector<LatticeVector>& b) {
  const std::size_t k = a.size() - 1;
  if (k == 0) return 1;
  const std::size_t n = a[0].size();
  std::vector<LatticeVector> va, vb;
  for (std::size_t i = 1; i <= k; ++i) {
    va.push_back(a[i] - a[0]);
    vb.push_back(b[i] - b[0]);
  }
  // Choose k coordinates on which the common span projects isomorphically.
  std::vector<std::size_t> coords(k);
  std::vector<bool> select(n, false);
  std::fill(select.begin(), select.begin() + k, true);
  std::sort(select.begin(), select.end(), std::greater<>());
  do {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (select[i]) coords[c++] = i;
    std::vector<LatticeVector> mb, ma;
    for (const auto& v : vb) {
      LatticeVector r;
      for (auto i : coords) r.push_back(v[i]);
      mb.push_back(std::move(r));
    }
    BigInt db = determinant(mb);
    if (db == 0) continue;
    for (const auto& v : va) {
      LatticeVector r;
      for (auto i : coords) r.push_back(v[i]);
      ma.push_back(std::move(r));
    }
    BigInt da = determinant(ma);
    return sgn(da) * sgn(db);
  } while (std::prev_permutation(select.begin(), select.end()));
  throw Error("InternalError", "degenerate orientation tuple");
}

}  // namespace detail

/// Builds Delta_infinity: brute-force facet enumeration over n-subsets of {0, w_1..w_N}.
inline PolytopeAtInfinity newton_polytope(const ExponentMatrix& a) {
  PolytopeAtInfinity p;
  p.matrix_ = a;
  const std::size_t n = a.n();

  std::set<LatticeVector> point_set(a.columns().begin(), a.columns().end());
  point_set.insert(LatticeVector(n, 0));
  std::vector<LatticeVector> points(point_set.begin(), point_set.end());

  std::set<FacetDescription> facet_set;
  std::vector<std::size_t> idx(n);
  std::vector<bool> select(points.size(), false);
  if (points.size() < n) throw Error("InternalError", "too few points for a full-dimensional hull");
  std::fill(select.begin(), select.begin() + n, true);
  do {
    std::size_t c = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (select[i]) idx[c++] = i;
    std::vector<LatticeVector> diffs;
    for (std::size_t i = 1; i < n; ++i) diffs.push_back(points[idx[i]] - points[idx[0]]);
    LatticeVector normal = primitive(cofactor_normal(diffs, n));
    if (is_zero(normal)) continue;
    std::int64_t level = dot(normal, points[idx[0]]);
    bool below = true, above = true;
    for (const auto& q : points) {
      auto v = dot(normal, q);
      below = below && v <= level;
      above = above && v >= level;
    }
    if (below) facet_set.insert({normal, level});
    if (above) facet_set.insert({scaled(normal, -1), -level});
  } while (std::prev_permutation(select.begin(), select.end()));
  p.facets_.assign(facet_set.begin(), facet_set.end());

  for (const auto& q : points) {
    std::vector<LatticeVector> tight;
    for (const auto& f : p.facets_)
      if (dot(f.normal, q) == f.level) tight.push_back(f.normal);
    if (!tight.empty() && integer_rank(tight) == static_cast<int>(n)) p.vertices_.push_back(q);
  }
  if (p.vertices_.size() > 63) throw Error("InternalError", "too many vertices for the face encoding");

  std::vector<std::uint64_t> facet_masks;
  for (const auto& f : p.facets_) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < p.vertices_.size(); ++i)
      if (dot(f.normal, p.vertices_[i]) == f.level) m |= std::uint64_t{1} << i;
    facet_masks.push_back(m);
  }
  std::set<std::uint64_t> masks(facet_masks.begin(), facet_masks.end());
  std::vector<std::uint64_t> frontier(masks.begin(), masks.end());
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next;
    for (auto m : frontier)
      for (auto fm : facet_masks) {
        auto x = m & fm;
        if (x != 0 && masks.insert(x).second) next.push_back(x);
      }
    frontier = std::move(next);
  }
  const std::uint64_t all = (p.vertices_.size() == 64) ? ~std::uint64_t{0}
                                                        : (std::uint64_t{1} << p.vertices_.size()) - 1;

  std::vector<Face> faces;
  auto make_face = [&](std::uint64_t mask) {
    Face f;
    f.vertex_mask = mask;
    std::vector<LatticeVector> pts;
    for (std::size_t i = 0; i < p.vertices_.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) {
        f.vertices.push_back(i);
        pts.push_back(p.vertices_[i]);
      }
    f.dimension = detail::affine_rank(pts);
    for (std::size_t fi = 0; fi < facet_masks.size(); ++fi)
        if ((facet_masks[fi] & mask) == mask) f.facets.push_back(fi);
    f.contains_origin = std::all_of(f.facets.begin(), f.facets.end(),
                                    [&](auto fi) { return p.facets_[fi].level == 0; });
    f.in_resolution = !f.facets.empty() &&
                      std::none_of(f.facets.begin(), f.facets.end(),
                                   [&](auto fi) { return p.facets_[fi].level == 0; });
    for (std::size_t j = 0; j < a.N(); ++j) {
      bool on = std::all_of(f.facets.begin(), f.facets.end(), [&](auto fi) {
        return dot(p.facets_[fi].normal, a.column(j)) == p.facets_[fi].level;
      });
      if (on) f.columns.push_back(j);
    }
    std::vector<LatticeVector> chosen;
    for (auto vi : f.vertices) {
      auto trial = chosen;
      trial.push_back(p.vertices_[vi]);
      if (detail::affine_rank(trial) == static_cast<int>(trial.size()) - 1) {
        chosen = std::move(trial);
        f.orientation.push_back(vi);
      }
      if (static_cast<int>(chosen.size()) == f.dimension + 1) break;
    }
    return f;
  };
  for (auto m : masks) faces.push_back(make_face(m));
  faces.push_back(make_face(all));
  faces.back().facets.clear();
  faces.back().contains_origin = true;
  faces.back().in_resolution = false;
  faces.back().columns.resize(a.N());
  for (std::size_t j = 0; j < a.N(); ++j) faces.back().columns[j] = j;
  // A proper face equal to the whole polytope cannot occur: the polytope is full-dimensional.
  std::stable_sort(faces.begin(), faces.end() - 1, [](const Face& x, const Face& y) {
    if (x.dimension != y.dimension) return x.dimension < y.dimension;
    return x.vertices < y.vertices;
  });
  for (std::size_t i = 0; i < faces.size(); ++i) faces[i].id = i;

  auto points_of = [&](const std::vector<std::size_t>& ids) {
    std::vector<LatticeVector> out;
    for (auto i : ids) out.push_back(p.vertices_[i]);
    return out;
  };
  for (auto& f : faces) {
    if (f.dimension == 0) continue;
    for (const auto& g : faces) {
      if (g.dimension != f.dimension - 1 || (g.vertex_mask & f.vertex_mask) != g.vertex_mask) continue;
      std::size_t outside = 0;
      for (auto vi : f.vertices)
        if (!(g.vertex_mask & (std::uint64_t{1} << vi))) {
          outside = vi;
          break;
        }
      auto induced = points_of(g.orientation);
      induced.insert(induced.begin(), p.vertices_[outside]);
      f.boundary.emplace_back(g.id, detail::relative_orientation(induced, points_of(f.orientation)));
    }
  }
  p.faces_ = std::move(faces);

  p.origin_interior_ = std::none_of(p.facets_.begin(), p.facets_.end(),
                                    [](const auto& f) { return f.level == 0; });

  std::int64_t lcm = 1;
  for (const auto& f : p.facets_)
    if (f.level > 0) lcm = lcm64(lcm, f.level);
  // Semigroup generators of delta have rho <= n, so the gcd over n * Delta is the gcd over delta.
  p.gauge_denominator_ = lcm;
  std::int64_t g = 0;
  for (const auto& w : p.box_points(Rational(static_cast<long>(n))))
    if (p.in_cone(w)) {
      Rational v = p.gauge(w) * lcm;
      if (v <= Rational(static_cast<long>(n) * lcm)) g = gcd64(g, to_int64(v.get_num()));
    }
  if (g > 0) p.gauge_denominator_ = lcm / g;

  // n! vol = sum over facets avoiding 0 of the simplicial pyramids with apex 0.
  std::int64_t volume = 0;
  for (const auto& f : p.faces_) {
    if (f.dimension != static_cast<int>(n) - 1 || f.contains_origin) continue;
    for (const auto& simplex : p.triangulation(f.id)) {
      std::vector<LatticeVector> rows;
      for (auto vi : simplex) rows.push_back(p.vertices_[vi]);
      BigInt d = determinant(rows);
      volume += to_int64(abs(d));
    }
  }
  p.normalized_volume_ = volume;
  return p;
}

/// The cone generated by the columns, described by primitive inequalities m(w) >= 0.
struct ConeDelta {
  std::vector<LatticeVector> generators;
  std::vector<LatticeVector> facet_normals;

  bool contains(const LatticeVector& w) const {
    return std::all_of(facet_normals.begin(), facet_normals.end(),
                       [&](const auto& m) { return dot(m, w) >= 0; });
  }
  bool contains_negated(const RationalVector& g) const {
    return std::all_of(facet_normals.begin(), facet_normals.end(),
                       [&](const auto& m) { return dot(m, g) <= 0; });
  }
};

/// delta is the tangent cone of Delta at the origin: its facets are the facets through 0.
inline ConeDelta cone_delta(const PolytopeAtInfinity& p) {
  ConeDelta c;
  c.generators = p.matrix().columns();
  for (const auto& f : p.facets())
    if (f.level == 0) c.facet_normals.push_back(scaled(f.normal, -1));
  return c;
}

inline ConeDelta cone_delta(const ExponentMatrix& a) { return cone_delta(newton_polytope(a)); }

/// Shifts gamma by an integer vector into -delta; the shift of least l1 norm wins,
/// ties broken lexicographically.
inline RationalVector normalize_gamma(const RationalVector& gamma, const ConeDelta& cone) {
  const std::size_t n = gamma.size();
  if (cone.contains_negated(gamma)) return gamma;
  for (std::int64_t radius = 1;; ++radius) {
    std::vector<LatticeVector> shell;
    LatticeVector cur(n, -radius);
    while (true) {
      std::int64_t l1 = 0;
      for (auto x : cur) l1 += x < 0 ? -x : x;
      if (l1 == radius) shell.push_back(cur);
      std::size_t i = 0;
      for (; i < n; ++i) {
        if (cur[i] < radius) {
          ++cur[i];
          break;
        }
        cur[i] = -radius;
      }
      if (i == n) break;
    }
    std::sort(shell.begin(), shell.end());
    for (const auto& k : shell) {
      RationalVector shifted(n);
      for (std::size_t i = 0; i < n; ++i) shifted[i] = gamma[i] - k[i];
      if (cone.contains_negated(shifted)) return shifted;
    }
  }
}

}  // namespace gkz
