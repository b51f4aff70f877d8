#include <gtest/gtest.h>

#include "gkz/nondegeneracy.hpp"
#include "test_support.hpp"

using namespace gkz;
using namespace gkz::testing;

namespace {

std::vector<Rational> fiber(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (auto x : v) out.emplace_back(x);
  return out;
}

const FaceCertificate& cert_for(const NondegeneracyReport& r, std::size_t id) {
  for (const auto& c : r.per_face)
    if (c.face_id == id) return c;
  throw std::runtime_error("no certificate");
}

std::size_t square_of_gauss(const PolytopeAtInfinity& p) {
  for (const auto& f : p.faces())
    if (f.dimension == 2 && !f.contains_origin) return f.id;
  throw std::runtime_error("no square");
}

/// Independent verdict for n <= 2 straight from the critical systems. A vertex face needs a
/// nonzero coefficient. On an edge from v0 in primitive direction e, f = t^{v0} h(t^e) and, since
/// v0 and e are independent, a critical point is exactly a repeated nonzero root of h.
bool nondegenerate_low_dim_oracle(const Rows& rows, const std::vector<Rational>& a) {
  const std::size_t n = rows.size(), N = rows.front().size();
  std::vector<LatticeVector> cols(N, LatticeVector(n));
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t i = 0; i < n; ++i) cols[j][i] = rows[i][j];
  auto p = newton_polytope(validate_matrix(rows));
  for (const auto& f : p.faces()) {
    if (f.contains_origin) continue;
    if (f.dimension == 0) {
      Rational s = 0;
      for (std::size_t j = 0; j < N; ++j)
        if (cols[j] == p.vertices()[f.vertices[0]]) s += a[j];
      if (s == 0) return false;
    } else if (f.dimension == 1) {
      const auto& v0 = p.vertices()[f.vertices[0]];
      auto e = primitive(p.vertices()[f.vertices[1]] - v0);
      std::vector<Rational> h;
      for (std::size_t j = 0; j < N; ++j) {
        auto d = cols[j] - v0;
        std::int64_t k = -1;
        for (std::int64_t t = 0; t <= 20 && k < 0; ++t)
          if (scaled(e, t) == d) k = t;
        if (k < 0) continue;
        if (static_cast<std::size_t>(k) >= h.size()) h.resize(k + 1, Rational(0));
        h[k] += a[j];
      }
      PolynomialQ hp(h);
      std::vector<Rational> deriv;
      for (std::size_t k = 1; k < h.size(); ++k) deriv.push_back(h[k] * static_cast<long>(k));
      auto g = PolynomialQ::gcd(hp, PolynomialQ(deriv));
      // strip roots at s = 0
      while (g.degree() > 0 && g[0] == 0) g = PolynomialQ::divmod(g, PolynomialQ::monomial(1)).first;
      if (g.degree() > 0) return false;
    }
  }
  return true;
}

Rows random_rows(std::size_t n) {
  while (true) {
    std::size_t N = static_cast<std::size_t>(uniform(static_cast<std::int64_t>(n), static_cast<std::int64_t>(n) + 2));
    Rows r(n, std::vector<std::int64_t>(N));
    for (auto& row : r)
      for (auto& x : row) x = uniform(-2, 2);
    try {
      validate_matrix(r);
      return r;
    } catch (const Error&) {
    }
  }
}

Rows unimodular_image(const Rows& rows) {
  const std::size_t n = rows.size();
  Rows out = rows;
  for (int step = 0; step < 4; ++step) {
    std::size_t i = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1));
    std::size_t k = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1));
    if (i == k) {
      if (uniform(0, 1))
        for (auto& x : out[i]) x = -x;
      continue;
    }
    std::int64_t c = uniform(-1, 1);
    for (std::size_t j = 0; j < out[i].size(); ++j) out[i][j] += c * out[k][j];
  }
  return out;
}

}  // namespace

TEST(Nondegeneracy, FacePolynomialExamples) {
  auto p12 = polytope_of({{1, 2}});
  const Face* vtx = nullptr;
  for (const auto& f : p12->faces())
    if (!f.contains_origin && f.dimension == 0) vtx = &f;
  ASSERT_TRUE(vtx);
  EXPECT_EQ(face_polynomial(fiber({5, 7}), *vtx, *p12), RingElement::monomial({2}, 7));
  EXPECT_TRUE(face_polynomial(fiber({1, 0}), *vtx, *p12).is_zero());

  auto gauss = polytope_of(kGauss);
  const Face& sq = gauss->face(square_of_gauss(*gauss));
  auto f = face_polynomial(fiber({1, 2, 3, 4}), sq, *gauss);
  RingElement expect = RingElement::monomial({1, 0, 0}) + RingElement::monomial({1, 1, 0}, 2) +
                       RingElement::monomial({1, 0, 1}, 3) + RingElement::monomial({1, 1, 1}, 4);
  EXPECT_EQ(f, expect);
  for (const auto& face : gauss->faces())
    if (face.contains_origin) {
      EXPECT_THROW(face_polynomial(fiber({1, 2, 3, 4}), face, *gauss), FaceContainsOrigin);
    }
}

TEST(Nondegeneracy, DuplicateColumnsAddUp) {
  auto p = polytope_of({{2, 2, 1}});
  const Face* vtx = nullptr;
  for (const auto& f : p->faces())
    if (!f.contains_origin && f.dimension == 0) vtx = &f;
  ASSERT_TRUE(vtx);
  EXPECT_EQ(face_polynomial(fiber({3, 4, 9}), *vtx, *p), RingElement::monomial({2}, 7));
  EXPECT_FALSE(is_nondegenerate(p, fiber({3, -3, 1})).overall);
  EXPECT_TRUE(is_nondegenerate(p, fiber({3, -2, 0})).overall);
}

TEST(Nondegeneracy, SpanningSubsetExamples) {
  auto p2 = polytope_of({{2}});
  const Face& v2 = p2->face(p2->faces().front().contains_origin ? 1 : 0);
  EXPECT_EQ(choose_spanning_subset(fiber({1}), v2, *p2), (std::vector<std::size_t>{0}));

  auto gauss = polytope_of(kGauss);
  const Face& sq = gauss->face(square_of_gauss(*gauss));
  EXPECT_EQ(choose_spanning_subset(fiber({1, 1, 1, 1}), sq, *gauss), (std::vector<std::size_t>{0, 1, 2}));

  auto p12 = polytope_of({{1, 2}});
  for (const auto& f : p12->faces())
    if (!f.contains_origin) {
      EXPECT_FALSE(choose_spanning_subset(fiber({1, 0}), f, *p12).has_value());
    }
}

TEST(Nondegeneracy, VerdictExamples) {
  auto p12 = polytope_of({{1, 2}});
  EXPECT_TRUE(is_nondegenerate(p12, fiber({0, 1})).overall);
  auto r = is_nondegenerate(p12, fiber({1, 0}));
  EXPECT_FALSE(r.overall);
  ASSERT_EQ(r.offending_faces().size(), 1u);
  EXPECT_TRUE(cert_for(r, r.offending_faces()[0]).deficient);

  auto gauss = polytope_of(kGauss);
  auto bad = is_nondegenerate(gauss, fiber({1, 1, 1, 1}));
  EXPECT_FALSE(bad.overall);
  EXPECT_EQ(bad.offending_faces(), (std::vector<std::size_t>{square_of_gauss(*gauss)}));
  auto good = is_nondegenerate(gauss, fiber({1, 2, 3, 4}));
  EXPECT_TRUE(good.overall);
  const auto& c = cert_for(good, square_of_gauss(*gauss));
  EXPECT_EQ(c.quotient_dims, (std::vector<std::size_t>{1, 1, 0}));
  EXPECT_EQ(c.expected, PolynomialQ(std::vector<Rational>{1, 1}));
}

TEST(Nondegeneracy, AgreesWithCriticalPointOracleInLowDimension) {
  for (int it = 0; it < 200; ++it) {
    auto rows = random_rows(static_cast<std::size_t>(uniform(1, 2)));
    std::vector<Rational> a;
    for (std::size_t j = 0; j < rows.front().size(); ++j) a.emplace_back(uniform(-1, 2));
    auto verdict = is_nondegenerate(polytope_of(rows), a).overall;
    EXPECT_EQ(verdict, nondegenerate_low_dim_oracle(rows, a)) << "case " << it;
  }
  // A planted double root on a lattice-length-2 edge: h(s) = (1 + s)^2.
  Rows edge = {{2, 1, 0}, {0, 1, 2}};
  EXPECT_FALSE(is_nondegenerate(polytope_of(edge), fiber({1, 2, 1})).overall);
  EXPECT_FALSE(nondegenerate_low_dim_oracle(edge, fiber({1, 2, 1})));
  EXPECT_TRUE(is_nondegenerate(polytope_of(edge), fiber({1, 3, 1})).overall);
}

TEST(Nondegeneracy, ScalingAndUnimodularInvariance) {
  std::size_t cases = 0;
  for (int it = 0; it < 200; ++it, ++cases) {
    auto rows = uniform(0, 3) == 0 ? kGauss : random_rows(static_cast<std::size_t>(uniform(1, 2)));
    std::vector<Rational> a;
    for (std::size_t j = 0; j < rows.front().size(); ++j) a.emplace_back(uniform(-1, 2));
    auto p = polytope_of(rows);
    bool verdict = is_nondegenerate(p, a).overall;
    Rational c = random_rational();
    if (c == 0) c = 3;
    std::vector<Rational> scaled_a;
    for (const auto& x : a) scaled_a.push_back(c * x);
    EXPECT_EQ(is_nondegenerate(p, scaled_a).overall, verdict);
    auto moved = polytope_of(unimodular_image(rows));
    EXPECT_EQ(moved->normalized_volume(), p->normalized_volume());
    EXPECT_EQ(is_nondegenerate(moved, a).overall, verdict) << "case " << it;
  }
  EXPECT_GE(cases, 200u);
}

TEST(Nondegeneracy, ConsistentWithKouchnirenko) {
  for (int it = 0; it < 40; ++it) {
    auto rows = uniform(0, 3) == 0 ? kGauss : random_rows(static_cast<std::size_t>(uniform(1, 2)));
    std::vector<Rational> a;
    for (std::size_t j = 0; j < rows.front().size(); ++j) a.emplace_back(uniform(-1, 2));
    auto p = polytope_of(rows);
    bool verdict = is_nondegenerate(p, a).overall;
    auto k = verify_kouchnirenko(p, a);
    EXPECT_EQ(k.ok(), verdict) << "case " << it;
  }
}

TEST(Nondegeneracy, ZeroVertexCoefficientIsDegenerate) {
  for (const auto& rows : fixture_matrices()) {
    auto p = polytope_of(rows);
    for (const auto& f : p->faces()) {
      if (f.contains_origin || f.dimension != 0) continue;
      std::vector<Rational> a(p->matrix().N(), Rational(1));
      for (auto j : f.columns) a[j] = 0;
      EXPECT_FALSE(is_nondegenerate(p, a).overall);
    }
  }
}
