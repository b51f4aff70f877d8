#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkz/errors.hpp"
#include "gkz/koszul.hpp"
#include "gkz/polytope.hpp"
#include "gkz/semigroup.hpp"
#include "gkz/sparse_matrix.hpp"

namespace gkz {

/// A logarithmic q-form: sum of c * t^w dt_I/t_I over wedge masks I (bit i = index i) with |I| = q.
class LogForm {
 public:
  using Key = std::pair<std::uint64_t, LatticeVector>;

  LogForm() = default;
  explicit LogForm(int degree) : degree_(degree) {}

  static LogForm monomial(int degree, std::uint64_t wedge, LatticeVector w, Rational c = 1) {
    LogForm f(degree);
    f.add(wedge, std::move(w), c);
    return f;
  }
  /// t^w dt_1/t_1 ^ ... ^ dt_n/t_n
  static LogForm top(std::size_t n, LatticeVector w, Rational c = 1) {
    return monomial(static_cast<int>(n), full_mask(n), std::move(w), c);
  }
  static std::uint64_t full_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

  int degree() const noexcept { return degree_; }
  const std::map<Key, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  void add(std::uint64_t wedge, LatticeVector w, const Rational& c) {
    if (c == 0) return;
    if (std::popcount(wedge) != degree_) throw ShapeMismatch("wedge " + wedge_label(wedge) + " in a " + std::to_string(degree_) + "-form");
    auto [it, fresh] = terms_.try_emplace({wedge, std::move(w)}, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(std::uint64_t wedge, const LatticeVector& w) const {
    auto it = terms_.find({wedge, w});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  LogForm& operator+=(const LogForm& o) {
    check_degree(o);
    absorb_degree(o);
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
    return *this;
  }
  LogForm& operator-=(const LogForm& o) {
    check_degree(o);
    absorb_degree(o);
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, -c);
    return *this;
  }
  friend LogForm operator+(LogForm a, const LogForm& b) { return a += b; }
  friend LogForm operator-(LogForm a, const LogForm& b) { return a -= b; }
  friend LogForm operator*(const Rational& s, const LogForm& f) {
    LogForm out(f.degree_);
    if (s == 0) return out;
    for (const auto& [k, c] : f.terms_) out.terms_.emplace(k, s * c);
    return out;
  }
  friend bool operator==(const LogForm& a, const LogForm& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [k, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += gkz::to_string(c) + "*t^(" + gkz::to_string(k.second) + ")" + wedge_label(k.first);
    }
    return s;
  }

 private:
  void check_degree(const LogForm& o) const {
    if (!o.is_zero() && !is_zero() && o.degree_ != degree_) throw ShapeMismatch("adding forms of different degree");
  }
  void absorb_degree(const LogForm& o) {
    if (is_zero()) degree_ = o.degree_;
  }

  int degree_ = 0;
  std::map<Key, Rational> terms_;
};

/// d(h dt_I) = sum over i not in I of (t_i dh/dt_i + gamma_i h + sum_j a_j w_ij t^{w_j} h) dt_i/t_i ^ dt_I.
/// Every column contributes, interior ones included.
inline LogForm twisted_differential(const RationalVector& gamma, const std::vector<Rational>& a, const LogForm& omega,
                                    const PolytopeAtInfinity& p) {
  const auto& mat = p.matrix();
  const std::size_t n = mat.n();
  if (gamma.size() != n) throw ShapeMismatch("gamma has " + std::to_string(gamma.size()) + " entries, expected " + std::to_string(n));
  if (a.size() != mat.N()) throw ShapeMismatch("fiber has " + std::to_string(a.size()) + " entries, expected " + std::to_string(mat.N()));
  LogForm out(omega.degree() + 1);
  for (const auto& [key, c] : omega.terms()) {
    const auto& [mask, w] = key;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) continue;
      const std::uint64_t target = mask | (std::uint64_t{1} << i);
      const Rational sc = c * wedge_sign(i, mask);
      out.add(target, w, sc * (Rational(w[i]) + gamma[i]));
      for (std::size_t j = 0; j < mat.N(); ++j) {
        if (mat.entry(i, j) == 0 || a[j] == 0) continue;
        out.add(target, w + mat.column(j), sc * a[j] * mat.entry(i, j));
      }
    }
  }
  return out;
}

/// Least p with omega in F_p: the maximum over terms of M rho(w) - M q. Empty for the zero form.
inline std::optional<std::int64_t> filtration_level(const LogForm& omega, const PolytopeAtInfinity& p) {
  std::optional<std::int64_t> level;
  const std::int64_t shift = p.gauge_denominator() * omega.degree();
  for (const auto& [key, c] : omega.terms()) {
    const std::int64_t l = p.degree(key.second) - shift;
    if (!level || l > *level) level = l;
  }
  return level;
}

/// The terms of omega sitting exactly at filtration level p.
inline LogForm filtration_part(const LogForm& omega, std::int64_t level, const PolytopeAtInfinity& p) {
  LogForm out(omega.degree());
  const std::int64_t shift = p.gauge_denominator() * omega.degree();
  for (const auto& [key, c] : omega.terms())
    if (p.degree(key.second) - shift == level) out.add(key.first, key.second, c);
  return out;
}

struct GrVerdict {
  bool ok = true;
  std::size_t samples_checked = 0;
  std::optional<std::size_t> first_failure;  // index into the sample list
  std::string detail;
};

/// For each homogeneous sample (all terms on one filtration level p), the level-p part of the
/// twisted differential must equal the Koszul differential of the same element of Gr.
inline GrVerdict check_gr_equals_koszul(const RationalVector& gamma, const std::vector<Rational>& a,
                                        std::shared_ptr<const PolytopeAtInfinity> p, const std::vector<LogForm>& samples) {
  auto ring = GradedRingHandle::full(p);
  auto g = log_derivative_classes(a, *p);
  KoszulComplex<GradedRingHandle> kc(ring, g, std::vector<std::int64_t>(g.size(), p->gauge_denominator()));
  GrVerdict v;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const LogForm& omega = samples[s];
    ++v.samples_checked;
    auto level = filtration_level(omega, *p);
    if (!level) continue;
    if (filtration_part(omega, *level, *p) != omega) throw Error("InvalidSample", "sample " + std::to_string(s) + " is not homogeneous");
    LogForm top = filtration_part(twisted_differential(gamma, a, omega, *p), *level, *p);
    LogForm koszul(omega.degree() + 1);
    for (const auto& [key, c] : omega.terms())
      for (const auto& [target, k] : kc.apply(KoszulBasisElement{key.first, key.second}))
        koszul.add(target.wedge, target.monomial, c * k);
    if (top != koszul) {
      v.ok = false;
      v.first_failure = s;
      v.detail = "Gr(d) = " + top.to_string() + " but Koszul d = " + koszul.to_string();
      return v;
    }
  }
  return v;
}

/// Monomial basis of H^n of the twisted complex together with the rewriting machinery.
/// Coordinates of a top form are found by peeling off its highest filtration level: the
/// top-level part is split into basis monomials plus a combination of g_i t^u, the latter is
/// cancelled by d of sign * t^u dt_{[n] minus i}, and what remains sits strictly lower.
class ReductionBasis {
 public:
  ReductionBasis(std::shared_ptr<const PolytopeAtInfinity> p, RationalVector gamma, std::vector<Rational> a,
                 std::int64_t max_basis_degree)
      : p_(std::move(p)), gamma_(std::move(gamma)), a_(std::move(a)), ring_(GradedRingHandle::full(p_)),
        quotient_(ring_, log_derivative_classes(a_, *p_),
                  std::vector<std::int64_t>(p_->n(), p_->gauge_denominator())),
        cache_(std::make_shared<Cache>()) {
    if (gamma_.size() != p_->n()) throw ShapeMismatch("gamma has " + std::to_string(gamma_.size()) + " entries, expected " + std::to_string(p_->n()));
    for (std::int64_t d = 0; d <= max_basis_degree; ++d) {
      const auto& piece = quotient_.piece(d);
      for (auto k : piece.basis) {
        index_.emplace(piece.monomials[k], basis_.size());
        basis_.push_back(piece.monomials[k]);
      }
    }
    normalized_ = cone_delta(*p_).contains_negated(gamma_);
  }

  const std::vector<LatticeVector>& exponents() const noexcept { return basis_; }
  std::size_t size() const noexcept { return basis_.size(); }
  bool gamma_normalized() const noexcept { return normalized_; }
  const RationalVector& gamma() const noexcept { return gamma_; }
  const std::vector<Rational>& fiber() const noexcept { return a_; }
  const PolytopeAtInfinity& polytope() const noexcept { return *p_; }

  std::vector<LogForm> basis_forms() const {
    std::vector<LogForm> out;
    for (const auto& w : basis_) out.push_back(LogForm::top(p_->n(), w));
    return out;
  }

  /// Coordinates of the class of t^w dt/t.
  RationalVector reduce_monomial(const LatticeVector& w) const {
    {
      std::lock_guard lock(cache_->mutex);
      auto it = cache_->rewrite.find(w);
      if (it != cache_->rewrite.end()) return it->second;
    }
    RationalVector coords = peel(w);
    std::lock_guard lock(cache_->mutex);
    return cache_->rewrite.emplace(w, std::move(coords)).first->second;
  }

  RationalVector reduce(const LogForm& omega) const {
    RationalVector out(basis_.size(), Rational(0));
    if (omega.is_zero()) return out;
    if (omega.degree() != static_cast<int>(p_->n())) throw ShapeMismatch("only top-degree forms reduce to the basis");
    for (const auto& [key, c] : omega.terms()) {
      auto r = reduce_monomial(key.second);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * r[k];
    }
    return out;
  }

  std::size_t cache_size() const {
    std::lock_guard lock(cache_->mutex);
    return cache_->rewrite.size();
  }

 private:
  RationalVector peel(const LatticeVector& start) const {
    const std::size_t n = p_->n();
    const std::uint64_t full = LogForm::full_mask(n);
    RationalVector coords(basis_.size(), Rational(0));
    std::map<LatticeVector, Rational> omega{{start, Rational(1)}};
    while (!omega.empty()) {
      std::int64_t d = 0;
      for (const auto& [w, c] : omega) d = std::max(d, p_->degree(w));
      const auto& piece = quotient_.piece(d);
      SparseVector top;
      for (const auto& [w, c] : omega)
        if (p_->degree(w) == d) top[piece.position.at(w)] = c;
      SparseVector combo;
      SparseVector rest = piece.image.reduce(top, &combo);
      for (const auto& [k, c] : rest) {
        const auto& w = piece.monomials[k];
        auto it = index_.find(w);
        if (it == index_.end())
          throw DegenerateFiber("t^(" + to_string(w) + ") in degree " + std::to_string(d) + " does not reduce to the basis");
        coords[it->second] += c;
        take(omega, w, c);
      }
      for (const auto& [gi, x] : combo) {
        const auto& gen = piece.generators[gi];
        const std::uint64_t mask = full & ~(std::uint64_t{1} << gen.index);
        LogForm eta = LogForm::monomial(static_cast<int>(n) - 1, mask, gen.cofactor, x * wedge_sign(gen.index, mask));
        const LogForm d_eta = twisted_differential(gamma_, a_, eta, *p_);
        for (const auto& [key, c] : d_eta.terms()) take(omega, key.second, c);
      }
      for (const auto& [w, c] : omega)
        if (p_->degree(w) >= d) throw Error("InternalError", "reduction did not lower the filtration level");
    }
    return coords;
  }

  static void take(std::map<LatticeVector, Rational>& omega, const LatticeVector& w, const Rational& c) {
    Rational& slot = omega[w];
    slot -= c;
    if (slot == 0) omega.erase(w);
  }

  struct Cache {
    std::mutex mutex;
    std::map<LatticeVector, RationalVector> rewrite;
  };

  std::shared_ptr<const PolytopeAtInfinity> p_;
  RationalVector gamma_;
  std::vector<Rational> a_;
  GradedRingHandle ring_;
  TopQuotient<GradedRingHandle> quotient_;
  std::vector<LatticeVector> basis_;
  std::map<LatticeVector, std::size_t> index_;
  bool normalized_ = true;
  std::shared_ptr<Cache> cache_;
};

struct DeRhamTop {
  std::size_t dimension = 0;
  std::int64_t truncation = 0;
  std::size_t top_forms = 0;      // dim C^n truncated
  std::size_t lower_forms = 0;    // dim C^{n-1} truncated
  std::size_t image_rank = 0;
  bool gamma_normalized = true;
  std::shared_ptr<const ReductionBasis> basis;
};

/// Cokernel of d: C^{n-1} -> C^n truncated at M rho <= D (source at D - M), with D the certified
/// Koszul bound. Strictness of the filtration (Koszul exactness below the top) makes the
/// truncated cokernel the true one.
inline DeRhamTop h_top_dimension(const RationalVector& gamma, const std::vector<Rational>& a,
                                 std::shared_ptr<const PolytopeAtInfinity> p,
                                 std::optional<std::int64_t> truncation = std::nullopt) {
  auto kouch = verify_kouchnirenko(p, a, truncation);
  if (!kouch.ok()) throw DegenerateFiber("Koszul complex is not a resolution of a finite top quotient");
  const std::size_t n = p->n();
  const std::int64_t m = p->gauge_denominator();
  auto ring = GradedRingHandle::full(p);
  DeRhamTop out;
  out.truncation = kouch.truncation;

  std::map<LatticeVector, std::size_t> row;
  for (std::int64_t d = 0; d <= out.truncation; ++d)
    for (const auto& w : ring.graded_piece(d)) row.emplace(w, row.size());
  std::vector<std::pair<std::uint64_t, LatticeVector>> cols;
  const std::uint64_t full = LogForm::full_mask(n);
  for (std::int64_t d = 0; d + m <= out.truncation; ++d)
    for (const auto& w : ring.graded_piece(d))
      for (std::size_t i = 0; i < n; ++i) cols.emplace_back(full & ~(std::uint64_t{1} << i), w);
  SparseRationalMatrix dm(row.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    auto image = twisted_differential(gamma, a, LogForm::monomial(static_cast<int>(n) - 1, cols[c].first, cols[c].second), *p);
    for (const auto& [key, v] : image.terms()) dm.add(row.at(key.second), c, v);
  }
  out.top_forms = row.size();
  out.lower_forms = cols.size();
  out.image_rank = rank_and_kernel(dm).rank;
  out.dimension = out.top_forms - out.image_rank;
  out.basis = std::make_shared<ReductionBasis>(p, gamma, a, kouch.expected_degree);
  out.gamma_normalized = out.basis->gamma_normalized();
  return out;
}

inline RationalVector reduce_to_basis(const LogForm& omega, const ReductionBasis& basis) { return basis.reduce(omega); }

/// B_j column k holds the coordinates of t^{w_j} times the k-th basis form.
inline std::vector<RationalMatrix> connection_matrices(const ReductionBasis& basis) {
  const auto& mat = basis.polytope().matrix();
  const std::size_t r = basis.size();
  std::vector<RationalMatrix> out;
  for (std::size_t j = 0; j < mat.N(); ++j) {
    RationalMatrix b(r, RationalVector(r, Rational(0)));
    for (std::size_t k = 0; k < r; ++k) {
      auto col = basis.reduce_monomial(mat.column(j) + basis.exponents()[k]);
      for (std::size_t i = 0; i < r; ++i) b[i][k] = col[i];
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace gkz
