#pragma once

#include <chrono>
#include <cstdint>
#include <algorithm>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gkz/derham.hpp"
#include "gkz/errors.hpp"
#include "gkz/face_complex.hpp"
#include "gkz/gkz_system.hpp"
#include "gkz/json_io.hpp"
#include "gkz/koszul.hpp"
#include "gkz/nondegeneracy.hpp"
#include "gkz/polytope.hpp"

namespace gkz {

/// An Error tagged with the pipeline stage it came out of.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause) : Error(cause.kind(), cause.what()), stage_(std::move(stage)) {}
  StageError(std::string stage, std::string kind, const std::string& what) : Error(std::move(kind), what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct RankReport {
  ProblemSpec spec;
  std::vector<Rational> fiber;
  bool fiber_drawn = false;
  std::shared_ptr<const PolytopeAtInfinity> polytope;
  RationalVector gamma_input;
  RationalVector gamma_used;
  bool gamma_normalized = true;  // was the input already in -delta
  std::optional<NondegeneracyReport> nondegeneracy;
  std::optional<KouchnirenkoResult> koszul;
  std::optional<PoincareIdentityVerdict> poincare;
  std::optional<DeRhamTop> derham;
  std::vector<RationalMatrix> connection;
  std::vector<EulerOperator> euler;
  std::vector<BoxOperator> box;
  std::vector<std::pair<std::string, double>> timings;  // stage -> milliseconds
  std::vector<std::string> warnings;
  bool degenerate = false;

  int exit_code() const { return degenerate ? 2 : 0; }

  /// normalized volume = Koszul top dimension = de Rham dimension, when all three were computed
  bool ranks_agree() const {
    if (!koszul || !derham) return false;
    return koszul->top_dim == polytope->normalized_volume() &&
           static_cast<std::int64_t>(derham->dimension) == polytope->normalized_volume();
  }
};

namespace detail {

template <class F>
auto staged(RankReport* report, const std::string& stage, F&& f) {
  auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    if (report)
      report->timings.emplace_back(stage, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  };
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record();
    } else {
      auto r = f();
      record();
      return r;
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  } catch (const std::exception& e) {
    throw StageError(stage, "InternalError", e.what());
  }
}

/// Nonzero integers in [-50, 50]; generic enough that a degenerate draw is very unlikely.
inline std::vector<Rational> draw_fiber(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<long> dist(1, 50);
  std::bernoulli_distribution sign(0.5);
  std::vector<Rational> a;
  for (std::size_t j = 0; j < count; ++j) a.emplace_back(sign(gen) ? -dist(gen) : dist(gen));
  return a;
}

}  // namespace detail

/// Validation, Newton polytope, gamma normalization and fiber, shared by every command.
inline RankReport prepare(const ProblemSpec& spec) {
  RankReport r;
  r.spec = spec;
  auto matrix = detail::staged(&r, "validate", [&] {
    auto m = validate_matrix(spec.matrix);
    if (!spec.gamma.empty() && spec.gamma.size() != m.n())
      throw ShapeMismatch("gamma has " + std::to_string(spec.gamma.size()) + " entries, expected " + std::to_string(m.n()));
    if (spec.fiber && spec.fiber->size() != m.N())
      throw ShapeMismatch("fiber has " + std::to_string(spec.fiber->size()) + " entries, expected " + std::to_string(m.N()));
    return m;
  });
  r.polytope = detail::staged(&r, "polytope", [&] { return std::make_shared<const PolytopeAtInfinity>(newton_polytope(matrix)); });
  detail::staged(&r, "gamma", [&] {
    r.gamma_input = spec.gamma.empty() ? RationalVector(matrix.n(), Rational(0)) : spec.gamma;
    auto cone = cone_delta(*r.polytope);
    r.gamma_normalized = cone.contains_negated(r.gamma_input);
    if (r.gamma_normalized || !spec.options.normalize_gamma) {
      r.gamma_used = r.gamma_input;
      if (!r.gamma_normalized) r.warnings.push_back("GammaNotNormalized: gamma is not in -delta; rank guarantees do not apply");
    } else {
      r.gamma_used = normalize_gamma(r.gamma_input, cone);
    }
  });
  if (spec.fiber) {
    r.fiber = *spec.fiber;
  } else {
    r.fiber = detail::draw_fiber(matrix.N(), spec.options.seed);
    r.fiber_drawn = true;
  }
  return r;
}

inline void run_nondegeneracy(RankReport& r) {
  r.nondegeneracy = detail::staged(&r, "nondegeneracy", [&] { return is_nondegenerate(r.polytope, r.fiber); });
  r.degenerate = !r.nondegeneracy->overall;
}

inline void run_koszul(RankReport& r) {
  r.koszul = detail::staged(&r, "koszul", [&] { return verify_kouchnirenko(r.polytope, r.fiber, r.spec.options.truncation); });
  r.poincare = detail::staged(&r, "poincare", [&] { return poincare_identity_check(*r.koszul, *r.polytope); });
}

inline void run_derham(RankReport& r) {
  r.derham = detail::staged(&r, "derham", [&] { return h_top_dimension(r.gamma_used, r.fiber, r.polytope, r.spec.options.truncation); });
  r.connection = detail::staged(&r, "connection", [&] { return connection_matrices(*r.derham->basis); });
}

inline void run_operators(RankReport& r) {
  detail::staged(&r, "operators", [&] {
    r.euler = euler_operators(r.polytope->matrix(), r.gamma_input);
    r.box = lattice_kernel(r.polytope->matrix());
  });
}

/// validate -> polytope -> gamma -> nondegeneracy -> Koszul -> Poincare -> de Rham -> operators.
/// A degenerate fiber stops before the Koszul stage; the report is still complete otherwise.
inline RankReport run_analyze(const ProblemSpec& spec) {
  RankReport r = prepare(spec);
  run_nondegeneracy(r);
  if (!r.degenerate) {
    run_koszul(r);
    run_derham(r);
    if (!r.ranks_agree()) r.warnings.push_back("RankMismatch: volume, Koszul and de Rham dimensions differ");
  }
  run_operators(r);
  return r;
}

// ---- JSON rendering ----

inline Json polytope_json(const PolytopeAtInfinity& p) {
  Json j;
  j["dimension"] = num(p.n());
  j["columns"] = num(p.matrix().N());
  Json facets = Json::array();
  for (const auto& f : p.facets()) {
    Json fj;
    fj["normal"] = nums(f.normal);
    fj["level"] = num(f.level);
    facets.push_back(fj);
  }
  j["facets"] = facets;
  j["fVector"] = nums(p.f_vector());
  j["gaugeDenominator"] = num(p.gauge_denominator());
  j["normalizedVolume"] = num(p.normalized_volume());
  j["originInterior"] = p.origin_interior();
  return j;
}

inline Json faces_json(const PolytopeAtInfinity& p) {
  Json j = polytope_json(p);
  Json faces = Json::array();
  for (const auto& f : p.faces()) {
    Json fj;
    fj["id"] = f.id;
    fj["dimension"] = num(f.dimension);
    Json verts = Json::array();
    for (auto v : f.vertices) verts.push_back(nums(p.vertices()[v]));
    fj["vertices"] = verts;
    fj["columns"] = f.columns;
    fj["containsOrigin"] = f.contains_origin;
    fj["inResolution"] = f.in_resolution;
    faces.push_back(fj);
  }
  j["faces"] = faces;
  Json res;
  for (int q = 0; q < static_cast<int>(p.n()); ++q) res["I_" + std::to_string(q)] = p.resolution_faces(q);
  j["resolutionFaces"] = res;
  return j;
}

inline Json nondegeneracy_json(const NondegeneracyReport& rep) {
  Json j;
  j["nondegenerate"] = rep.overall;
  j["offendingFaces"] = rep.offending_faces();
  Json faces = Json::array();
  for (const auto& c : rep.per_face) {
    Json fj;
    fj["face"] = c.face_id;
    fj["dimension"] = num(c.dimension);
    fj["finite"] = c.finite;
    fj["deficient"] = c.deficient;
    fj["spanningIndices"] = c.spanning_indices;
    fj["quotientDims"] = nums(c.quotient_dims);
    fj["expected"] = nums(c.expected);
    fj["boundUsed"] = num(c.bound_used);
    faces.push_back(fj);
  }
  j["faces"] = faces;
  return j;
}

inline Json koszul_json(const KouchnirenkoResult& k) {
  Json j;
  j["vanishing"] = k.vanishing;
  j["topDim"] = num(k.top_dim);
  j["equalsVolume"] = k.equals_volume;
  j["supportOk"] = k.support_ok;
  j["truncation"] = num(k.truncation);
  Json dims;
  for (const auto& [d, h] : k.top_dims) dims[std::to_string(d)] = num(h);
  j["topDims"] = dims;
  Json lower;
  for (const auto& [d, qs] : k.lower_nonzero)
    for (const auto& [q, h] : qs) lower[std::to_string(d)][std::to_string(q)] = num(h);
  j["lowerNonzero"] = lower.is_null() ? Json::object() : lower;
  Json basis = Json::array();
  for (const auto& w : k.monomial_basis) basis.push_back(nums(w));
  j["monomialBasis"] = basis;
  return j;
}

inline Json poincare_json(const PoincareIdentityVerdict& v, std::shared_ptr<const PolytopeAtInfinity> p) {
  Json j;
  j["ok"] = v.ok;
  j["polynomial"] = v.polynomial.to_string();
  j["coefficients"] = nums(v.polynomial);
  j["nonnegative"] = v.polynomial_nonnegative;
  j["sumEqualsVolume"] = v.sum_equals_volume;
  j["mismatchDegree"] = v.mismatch_degree ? Json(num(*v.mismatch_degree)) : Json(nullptr);
  j["series"] = poincare_series(GradedRingHandle::full(std::move(p))).to_string();
  return j;
}

inline Json derham_json(const DeRhamTop& d, const std::vector<RationalMatrix>& connection) {
  Json j;
  j["dimension"] = num(d.dimension);
  j["truncation"] = num(d.truncation);
  j["topForms"] = num(d.top_forms);
  j["imageRank"] = num(d.image_rank);
  Json basis = Json::array();
  for (const auto& w : d.basis->exponents()) basis.push_back(nums(w));
  j["basis"] = basis;
  Json mats = Json::array();
  for (const auto& b : connection) mats.push_back(nums(b));
  j["connectionMatrices"] = mats;
  return j;
}

inline Json operators_json(const std::vector<EulerOperator>& euler, const std::vector<BoxOperator>& box) {
  Json j;
  Json e = Json::array();
  for (const auto& op : euler) {
    Json oj;
    oj["text"] = render_euler(op);
    oj["weights"] = nums(op.row_weights);
    oj["gamma"] = num(op.gamma_shift);
    e.push_back(oj);
  }
  j["euler"] = e;
  Json b = Json::array();
  for (const auto& op : box) {
    Json oj;
    oj["text"] = render_box(op);
    oj["lambda"] = nums(op.lambda);
    b.push_back(oj);
  }
  j["box"] = b;
  return j;
}

inline Json timings_json(const RankReport& r) {
  Json t;
  for (const auto& [stage, ms] : r.timings) t[stage] = ms;
  return t;
}

inline Json to_json(const RankReport& r, bool with_timings = true) {
  Json j;
  j["spec"] = to_json(r.spec);
  j["status"] = r.degenerate ? "degenerate" : "ok";
  j["fiber"] = nums(r.fiber);
  j["fiberDrawn"] = r.fiber_drawn;
  j["polytope"] = polytope_json(*r.polytope);
  j["gammaNormalized"] = r.gamma_normalized;
  j["gammaUsed"] = nums(r.gamma_used);
  j["nondegeneracy"] = r.nondegeneracy ? nondegeneracy_json(*r.nondegeneracy) : Json(nullptr);
  j["koszul"] = r.koszul ? koszul_json(*r.koszul) : Json(nullptr);
  j["poincare"] = r.poincare ? poincare_json(*r.poincare, r.polytope) : Json(nullptr);
  j["deRham"] = r.derham ? derham_json(*r.derham, r.connection) : Json(nullptr);
  if (r.degenerate) j["skipped"] = Json::array({"koszul", "poincare", "deRham"});
  j["ranksAgree"] = r.ranks_agree();
  j["gkz"] = operators_json(r.euler, r.box);
  j["warnings"] = r.warnings;
  if (with_timings) j["timings"] = timings_json(r);
  return j;
}

struct CommandResult {
  Json output;
  int exit_code = 0;
};

inline const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"analyze", "volume",  "faces",    "nondegenerate", "koszul",
                                                 "derham",  "gkz-ops", "poincare", "face-complex"};
  return names;
}

/// Runs only the prefix of the pipeline the command needs.
inline CommandResult run_subcommand(const std::string& name, const ProblemSpec& spec, bool with_timings = true) {
  if (name == "analyze") {
    auto r = run_analyze(spec);
    return {to_json(r, with_timings), r.exit_code()};
  }
  if (std::find(subcommand_names().begin(), subcommand_names().end(), name) == subcommand_names().end())
    throw StageError("dispatch", UnknownSubcommand("unknown subcommand '" + name + "'"));

  RankReport r = prepare(spec);
  Json j;
  j["subcommand"] = name;
  int code = 0;
  if (name == "volume") {
    j["normalizedVolume"] = num(r.polytope->normalized_volume());
  } else if (name == "faces") {
    j["polytope"] = faces_json(*r.polytope);
  } else if (name == "nondegenerate") {
    run_nondegeneracy(r);
    j["fiber"] = nums(r.fiber);
    j["nondegeneracy"] = nondegeneracy_json(*r.nondegeneracy);
    code = r.exit_code();
  } else if (name == "koszul" || name == "poincare") {
    j["fiber"] = nums(r.fiber);
    run_koszul(r);
    if (name == "koszul") j["koszul"] = koszul_json(*r.koszul);
    else j["poincare"] = poincare_json(*r.poincare, r.polytope);
    if (!r.koszul->ok()) code = 2;
  } else if (name == "derham") {
    run_nondegeneracy(r);
    j["fiber"] = nums(r.fiber);
    j["gammaNormalized"] = r.gamma_normalized;
    j["gammaUsed"] = nums(r.gamma_used);
    if (r.degenerate) {
      j["nondegeneracy"] = nondegeneracy_json(*r.nondegeneracy);
      j["deRham"] = nullptr;
      code = 2;
    } else {
      run_derham(r);
      j["deRham"] = derham_json(*r.derham, r.connection);
    }
  } else if (name == "gkz-ops") {
    run_operators(r);
    j["gkz"] = operators_json(r.euler, r.box);
  } else if (name == "face-complex") {
    auto v = detail::staged(&r, "face-complex", [&] { return check_face_complex_exactness(*r.polytope, spec.options.weight_bound); });
    Json fc;
    fc["exact"] = v.exact;
    fc["weightBound"] = num(v.weight_bound);
    fc["weightsChecked"] = num(v.weights_checked);
    if (v.first_failure) {
      Json f;
      f["weight"] = nums(v.first_failure->weight);
      f["degree"] = num(v.first_failure->degree);
      Json h;
      for (const auto& [q, dim] : v.first_failure->cohomology) h[std::to_string(q)] = num(dim);
      f["cohomology"] = h;
      fc["firstFailure"] = f;
    } else {
      fc["firstFailure"] = nullptr;
    }
    j["faceComplex"] = fc;
    if (!v.exact) code = 2;
  }
  j["warnings"] = r.warnings;
  if (with_timings) j["timings"] = timings_json(r);
  return {j, code};
}

}  // namespace gkz
