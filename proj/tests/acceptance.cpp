// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gkz/gkz.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gkz;
using namespace gkz::testing;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why << what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Rational> q(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (auto x : v) out.emplace_back(x);
  return out;
}

struct Fixture {
  std::string name;
  Rows rows;
  std::vector<Rational> fiber;
  std::int64_t rank;
};

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> f = {
      {"[[1]]", {{1}}, q({1}), 1},
      {"[[2]]", {{2}}, q({1}), 2},
      {"[[1,2]]", {{1, 2}}, q({1, 1}), 2},
      {"[[-1,1]]", {{-1, 1}}, q({1, 1}), 2},
      {"Gauss", kGauss, q({1, 2, 3, 4}), 2},
  };
  return f;
}

// 1. volume = Koszul top dim = de Rham top dim, each matched against a brute-force oracle
void rank_triple(Check& c) {
  for (const auto& f : fixtures()) {
    auto t0 = std::chrono::steady_clock::now();
    auto p = polytope_of(f.rows);
    auto k = verify_kouchnirenko(p, f.fiber);
    RationalVector gamma(p->n(), Rational(0));
    auto d = h_top_dimension(gamma, f.fiber, p);
    const std::int64_t vol_oracle = normalized_volume_ehrhart(p->matrix().columns());
    const std::int64_t generous = k.truncation + 2 * p->gauge_denominator();
    const std::int64_t koszul_oracle = brute_force_top_dim(*p, f.fiber, generous);
    const std::int64_t derham_oracle = static_cast<std::int64_t>(dense_top_cohomology(gamma, f.fiber, *p, generous));
    std::ostringstream got;
    got << f.name << ": vol " << p->normalized_volume() << " (oracle " << vol_oracle << "), koszul " << k.top_dim
        << " (oracle " << koszul_oracle << "), de Rham " << d.dimension << " (oracle " << derham_oracle << "), want " << f.rank;
    c.require(p->normalized_volume() == f.rank && vol_oracle == f.rank, got.str());
    c.require(k.top_dim == f.rank && koszul_oracle == f.rank, got.str());
    c.require(static_cast<std::int64_t>(d.dimension) == f.rank && derham_oracle == f.rank, got.str());
    c.require(seconds_since(t0) < 10.0, f.name + " took longer than 10 s");
  }
}

// 2. H^i(K) = 0 for i != n within the certified truncation
void kouchnirenko_vanishing(Check& c) {
  for (const auto& f : fixtures()) {
    auto k = verify_kouchnirenko(polytope_of(f.rows), f.fiber);
    c.require(k.vanishing, f.name + ": lower Koszul cohomology is nonzero");
    c.require(k.support_ok, f.name + ": top cohomology beyond the expected degree");
  }
}

// 3. per-degree dims of H^n are the coefficients of P_R(t)(1 - t^M)^n
void poincare_identity(Check& c) {
  const PolynomialQ one_plus_t(std::vector<Rational>{1, 1});
  for (const auto& f : fixtures()) {
    auto p = polytope_of(f.rows);
    auto k = verify_kouchnirenko(p, f.fiber);
    auto v = poincare_identity_check(k, *p);
    c.require(v.ok, f.name + ": H^n dims disagree with " + v.polynomial.to_string());
    if (f.name == "[[2]]" || f.name == "[[-1,1]]" || f.name == "Gauss")
      c.require(v.polynomial == one_plus_t, f.name + ": polynomial is " + v.polynomial.to_string() + ", want 1 + t");
  }
}

// 4. face complex A(w) exact off degree 0 for every w with M rho(w) <= 6
void face_complex_exactness(Check& c) {
  for (const auto& f : fixtures()) {
    auto v = check_face_complex_exactness(*polytope_of(f.rows), 6);
    std::string w = v.first_failure ? to_string(v.first_failure->weight) : "";
    c.require(v.exact, f.name + ": fails at w = (" + w + ")");
    c.require(v.weights_checked > 0, f.name + ": no weights checked");
  }
}

// 5. degenerate fibers are caught, with the right face, and analyze exits 2
void degeneracy_detection(Check& c) {
  ProblemSpec gauss;
  gauss.matrix = kGauss;
  gauss.fiber = q({1, 1, 1, 1});
  auto r = run_analyze(gauss);
  c.require(r.exit_code() == 2, "Gauss a=(1,1,1,1): exit code " + std::to_string(r.exit_code()));
  auto bad = r.nondegeneracy->offending_faces();
  c.require(bad.size() == 1, "Gauss: expected one offending face");
  if (!bad.empty()) {
    const Face& sq = r.polytope->face(bad[0]);
    c.require(sq.dimension == 2 && !sq.contains_origin && sq.vertices.size() == 4, "Gauss: offending face is not the square");
  }

  ProblemSpec seg;
  seg.matrix = {{1, 2}};
  seg.fiber = q({1, 0});
  auto s = run_analyze(seg);
  c.require(s.exit_code() == 2, "[[1,2]] a=(1,0): exit code " + std::to_string(s.exit_code()));
  auto sb = s.nondegeneracy->offending_faces();
  c.require(sb.size() == 1, "[[1,2]]: expected one offending face");
  if (!sb.empty()) {
    const Face& v = s.polytope->face(sb[0]);
    c.require(v.dimension == 0 && s.polytope->vertices()[v.vertices[0]] == LatticeVector{2}, "[[1,2]]: offending face is not the vertex 2");
  }
}

// 6. connection matrices in closed form
void connection_closed_form(Check& c) {
  auto r1 = h_top_dimension({ratio(1, 3)}, q({2}), polytope_of({{1}}));
  auto b1 = connection_matrices(*r1.basis);
  c.require(b1 == std::vector<RationalMatrix>{{{ratio(-1, 6)}}}, "[[1]], gamma 1/3, a 2: B != [-1/6]");
  auto r2 = h_top_dimension({0}, q({1}), polytope_of({{2}}));
  auto b2 = connection_matrices(*r2.basis);
  c.require(b2 == std::vector<RationalMatrix>{{{0, 0}, {0, ratio(-1, 2)}}}, "[[2]], gamma 0, a 1: B != diag(0, -1/2)");
}

// 7. property suites, 200+ random cases each
const Rows& random_fixture() {
  const auto& all = fixture_matrices();
  return all[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(all.size()) - 1))];
}

LatticeVector random_point(const PolytopeAtInfinity& p, std::int64_t max_degree) {
  while (true) {
    const auto& slice = p.degree_slice(uniform(0, max_degree));
    if (!slice.empty()) return slice[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(slice.size()) - 1))];
  }
}

LogForm random_form(const PolytopeAtInfinity& p, int deg, std::int64_t max_degree) {
  LogForm f(deg);
  auto masks = subsets_of_size(p.n(), static_cast<std::size_t>(deg));
  for (int t = 0; t < 3; ++t)
    f.add(masks[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(masks.size()) - 1))], random_point(p, max_degree),
          random_rational());
  return f;
}

std::vector<Rational> random_fiber(std::size_t N) {
  std::vector<Rational> a;
  for (std::size_t j = 0; j < N; ++j) a.emplace_back(uniform(-3, 3));
  return a;
}

RationalVector random_gamma(std::size_t n) {
  RationalVector g;
  for (std::size_t i = 0; i < n; ++i) g.push_back(random_rational(2, 3));
  return g;
}

void property_suites(Check& c) {
  constexpr int kCases = 200;
  int failures = 0;

  for (int it = 0; it < kCases; ++it) {  // d o d = 0, twisted
    auto p = polytope_of(random_fixture());
    auto g = random_gamma(p->n());
    auto a = random_fiber(p->matrix().N());
    auto w = random_form(*p, static_cast<int>(uniform(0, static_cast<std::int64_t>(p->n()) - 1)), 2 * p->gauge_denominator());
    if (!twisted_differential(g, a, twisted_differential(g, a, w, *p), *p).is_zero()) ++failures;
  }
  c.require(failures == 0, "twisted d o d != 0");

  for (int it = 0; it < kCases; ++it) {  // d o d = 0, Koszul
    auto p = polytope_of(random_fixture());
    auto g = log_derivative_classes(random_fiber(p->matrix().N()), *p);
    KoszulComplex<GradedRingHandle> kc(GradedRingHandle::full(p), g, std::vector<std::int64_t>(g.size(), p->gauge_denominator()));
    if (!kc.piece(uniform(0, 3 * p->gauge_denominator())).is_complex()) ++failures;
  }
  c.require(failures == 0, "Koszul d o d != 0");

  for (int it = 0; it < kCases; ++it) {  // filtration preserved
    auto p = polytope_of(random_fixture());
    auto w = random_form(*p, static_cast<int>(uniform(0, static_cast<std::int64_t>(p->n()) - 1)), 3 * p->gauge_denominator());
    auto dw = twisted_differential(random_gamma(p->n()), random_fiber(p->matrix().N()), w, *p);
    auto lw = filtration_level(w, *p), ld = filtration_level(dw, *p);
    if (lw && ld && *ld > *lw) ++failures;
  }
  c.require(failures == 0, "d raises the filtration level");

  {  // Gr(d) = Koszul d on homogeneous monomial samples
    std::size_t samples = 0;
    for (int it = 0; samples < kCases; ++it) {
      auto p = polytope_of(random_fixture());
      std::vector<LogForm> forms;
      for (int k = 0; k < 20; ++k) {
        const int deg = static_cast<int>(uniform(0, static_cast<std::int64_t>(p->n()) - 1));
        auto masks = subsets_of_size(p->n(), static_cast<std::size_t>(deg));
        forms.push_back(LogForm::monomial(deg, masks[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(masks.size()) - 1))],
                                          random_point(*p, 2 * p->gauge_denominator()), random_rational()));
      }
      auto v = check_gr_equals_koszul(random_gamma(p->n()), random_fiber(p->matrix().N()), p, forms);
      if (!v.ok) ++failures;
      samples += v.samples_checked;
    }
  }
  c.require(failures == 0, "Gr(d) differs from the Koszul differential");

  for (int it = 0; it < kCases; ++it) {  // rho homogeneity and subadditivity
    auto p = polytope_of(random_fixture());
    auto u = random_point(*p, 3 * p->gauge_denominator()), v = random_point(*p, 3 * p->gauge_denominator());
    const std::int64_t k = uniform(0, 4);
    if (p->gauge(scaled(u, k)) != p->gauge(u) * Rational(static_cast<long>(k))) ++failures;
    if (p->gauge(u + v) > p->gauge(u) + p->gauge(v)) ++failures;
  }
  c.require(failures == 0, "rho is not homogeneous or not subadditive");

  for (int it = 0; it < kCases; ++it) {  // gr_multiply grading and associativity
    auto p = polytope_of(random_fixture());
    const std::int64_t top = 2 * p->gauge_denominator();
    auto u = random_point(*p, top), v = random_point(*p, top), w = random_point(*p, top);
    auto uv = gr_multiply(u, v, *p);
    if (uv && p->degree(*uv) != p->degree(u) + p->degree(v)) ++failures;
    if (!uv && p->degree(u + v) >= p->degree(u) + p->degree(v)) ++failures;
    auto left = uv ? gr_multiply(*uv, w, *p) : std::nullopt;
    auto vw = gr_multiply(v, w, *p);
    auto right = vw ? gr_multiply(u, *vw, *p) : std::nullopt;
    if (left != right) ++failures;
  }
  c.require(failures == 0, "gr_multiply is not graded or not associative");

  {  // reduce_to_basis linearity and invariance under exact forms
    int cases = 0;
    while (cases < kCases) {
      auto p = polytope_of(random_fixture());
      auto a = random_fiber(p->matrix().N());
      if (!is_nondegenerate(p, a).overall) continue;
      auto g = random_gamma(p->n());
      auto r = h_top_dimension(g, a, p);
      const int n = static_cast<int>(p->n());
      for (int k = 0; k < 20; ++k, ++cases) {
        auto w1 = random_form(*p, n, 2 * p->gauge_denominator()), w2 = random_form(*p, n, 2 * p->gauge_denominator());
        auto eta = random_form(*p, n - 1, 2 * p->gauge_denominator());
        Rational al = random_rational(), be = random_rational();
        auto lhs = reduce_to_basis(al * w1 + be * w2, *r.basis);
        auto c1 = reduce_to_basis(w1, *r.basis), c2 = reduce_to_basis(w2, *r.basis);
        for (std::size_t i = 0; i < lhs.size(); ++i)
          if (lhs[i] != al * c1[i] + be * c2[i]) ++failures;
        if (reduce_to_basis(w1 + twisted_differential(g, a, eta, *p), *r.basis) != c1) ++failures;
      }
    }
  }
  c.require(failures == 0, "reduce_to_basis is not linear or sees exact forms");

  for (int it = 0; it < kCases; ++it) {  // vanishing below d for toy regular sequences
    const std::size_t vars = static_cast<std::size_t>(uniform(1, 3));
    auto ring = PolynomialRing::standard(vars);
    std::vector<RingElement> seq;
    std::vector<std::int64_t> degs;
    for (std::size_t i = 0; i < vars; ++i) {
      LatticeVector e(vars, 0);
      e[i] = uniform(1, 2);
      seq.push_back(RingElement::monomial(e, random_rational() + 7));
      degs.push_back(e[i]);
    }
    if (uniform(0, 1)) {
      seq.push_back(RingElement::monomial(LatticeVector(vars, 1), random_rational()));
      degs.push_back(static_cast<std::int64_t>(vars));
    }
    if (!koszul_regular_sequence_check(ring, seq, degs, vars, 5).ok()) ++failures;
  }
  c.require(failures == 0, "Koszul complex of a regular sequence has lower cohomology");

  for (int it = 0; it < kCases; ++it) {  // unimodular change of coordinates keeps the verdict
    Rows rows = random_fixture();
    auto p = polytope_of(rows);
    auto a = random_fiber(p->matrix().N());
    const std::size_t n = rows.size();
    Rows moved = rows;
    for (int step = 0; step < 3 && n > 1; ++step) {
      std::size_t i = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1));
      std::size_t k = (i + 1) % n;
      std::int64_t f = uniform(-1, 1);
      for (std::size_t j = 0; j < moved[i].size(); ++j) moved[i][j] += f * moved[k][j];
    }
    if (uniform(0, 1))
      for (auto& x : moved[0]) x = -x;
    if (is_nondegenerate(p, a).overall != is_nondegenerate(polytope_of(moved), a).overall) ++failures;
  }
  c.require(failures == 0, "nondegeneracy verdict changes under a unimodular map");
}

// 8. operator emission for the Gauss matrix
void gkz_emission(Check& c) {
  auto a = validate_matrix(kGauss);
  auto box = lattice_kernel(a);
  c.require(box.size() == 1 && render_box(box[0]) == "∂₁∂₄ − ∂₂∂₃",
            "box operators: " + (box.empty() ? std::string("none") : render_box(box[0])));
  auto euler = euler_operators(a, {0, 0, 0});
  c.require(euler.size() == 3, "expected three Euler operators");
  const std::vector<std::string> want = {"x₁∂₁ + x₂∂₂ + x₃∂₃ + x₄∂₄", "x₂∂₂ + x₄∂₄", "x₃∂₃ + x₄∂₄"};
  for (std::size_t i = 0; i < euler.size() && i < want.size(); ++i) {
    c.require(render_euler(euler[i]) == want[i], "Euler operator " + std::to_string(i) + ": " + render_euler(euler[i]));
    c.require(euler[i].row_weights == a.row(i), "Euler operator does not transcribe row " + std::to_string(i));
  }
  // every relation with entries in [-3, 3] is an integer multiple of the basis vector
  for (const auto& b : box) {
    c.require(is_relation(a, b.lambda) && box_degrees_agree(a, b.lambda), "basis vector is not a relation");
  }
  LatticeVector v(4, -3);
  while (true) {
    if (is_relation(a, v) && !box.empty()) {
      const auto& l = box[0].lambda;
      bool multiple = true;
      const std::int64_t f = v[0] / l[0];
      for (std::size_t j = 0; j < 4; ++j) multiple = multiple && v[j] == f * l[j];
      c.require(multiple, "relation (" + to_string(v) + ") not in the span of the basis");
    }
    std::size_t i = 0;
    for (; i < 4; ++i) {
      if (v[i] < 3) {
        ++v[i];
        break;
      }
      v[i] = -3;
    }
    if (i == 4) break;
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "rank triple agreement", 50.0, rank_triple},
      {2, "Koszul vanishing below the top", 30.0, kouchnirenko_vanishing},
      {3, "Poincare identity", 30.0, poincare_identity},
      {4, "face-complex exactness for M rho(w) <= 6", 60.0, face_complex_exactness},
      {5, "degeneracy detection", 30.0, degeneracy_detection},
      {6, "connection matrix closed forms", 30.0, connection_closed_form},
      {7, "property suites", 300.0, property_suites},
      {8, "GKZ operator emission", 30.0, gkz_emission},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    c.require(secs < cr.limit_seconds, "over the time limit");
    std::printf("%s  %d  %-42s %8.3f s%s%s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, secs, c.ok ? "" : "  ",
                c.ok ? "" : c.why.str().c_str());
    if (!c.ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
