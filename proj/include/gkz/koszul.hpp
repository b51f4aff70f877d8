#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gkz/cochain.hpp"
#include "gkz/errors.hpp"
#include "gkz/semigroup.hpp"
#include "gkz/series.hpp"
#include "gkz/sparse_matrix.hpp"

namespace gkz {

/// Basis vector s * e_I of a Koszul cochain space; `wedge` is the bitmask of I.
struct KoszulBasisElement {
  std::uint64_t wedge = 0;
  LatticeVector monomial;
  auto operator<=>(const KoszulBasisElement&) const = default;
};

inline std::vector<std::uint64_t> subsets_of_size(std::size_t n, std::size_t q) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
    if (static_cast<std::size_t>(std::popcount(m)) == q) out.push_back(m);
  std::sort(out.begin(), out.end(), [](std::uint64_t a, std::uint64_t b) {
    // lexicographic order on the sorted index lists
    while (a && b) {
      auto ia = std::countr_zero(a), ib = std::countr_zero(b);
      if (ia != ib) return ia < ib;
      a &= a - 1;
      b &= b - 1;
    }
    return b != 0;
  });
  return out;
}

inline std::string wedge_label(std::uint64_t mask) {
  std::string s = "e[";
  bool first = true;
  for (std::size_t i = 0; mask >> i; ++i)
    if (mask & (std::uint64_t{1} << i)) {
      if (!first) s += ',';
      s += std::to_string(i);
      first = false;
    }
  return s + "]";
}

/// Sign of dt_i ^ dt_I against dt_{I + i}: (-1)^{#{k in I : k < i}}.
inline int wedge_sign(std::size_t i, std::uint64_t mask) {
  std::uint64_t below = mask & ((std::uint64_t{1} << i) - 1);
  return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

/// Koszul complex K(f_1..f_k; R) over a graded monomial ring (GradedRingHandle or PolynomialRing).
/// s e_I sits in internal degree deg(s) + sum_{i not in I} deg(f_i), so each internal degree is a
/// finite complex and K^k_d = R_d. d(s e_I) = sum_{i not in I} f_i s e_i ^ e_I.
template <class Ring>
class KoszulComplex {
 public:
  KoszulComplex(Ring ring, std::vector<RingElement> sequence, std::vector<std::int64_t> degrees)
      : ring_(std::move(ring)), seq_(std::move(sequence)), deg_(std::move(degrees)) {
    if (seq_.size() != deg_.size()) throw ShapeMismatch("one degree per sequence element required");
    if (seq_.size() > 63) throw ShapeMismatch("sequence too long");
    for (std::size_t i = 0; i < seq_.size(); ++i)
      for (const auto& [w, c] : seq_[i].terms())
        if (ring_.degree(w) != deg_[i])
          throw ShapeMismatch("sequence element " + std::to_string(i) + " is not homogeneous of its degree");
  }

  const Ring& ring() const noexcept { return ring_; }
  std::size_t length() const noexcept { return seq_.size(); }
  const std::vector<RingElement>& sequence() const noexcept { return seq_; }

  std::int64_t shift(std::uint64_t mask) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < seq_.size(); ++i)
      if (!(mask & (std::uint64_t{1} << i))) s += deg_[i];
    return s;
  }

  std::vector<KoszulBasisElement> basis(int q, std::int64_t d) const {
    std::vector<KoszulBasisElement> out;
    if (q < 0 || q > static_cast<int>(seq_.size())) return out;
    for (auto mask : subsets_of_size(seq_.size(), q))
      for (const auto& s : ring_.graded_piece(d - shift(mask))) out.push_back({mask, s});
    return out;
  }

  /// Image of one basis vector, as (target basis element, coefficient) pairs.
  std::vector<std::pair<KoszulBasisElement, Rational>> apply(const KoszulBasisElement& b) const {
    std::vector<std::pair<KoszulBasisElement, Rational>> out;
    for (std::size_t i = 0; i < seq_.size(); ++i) {
      if (b.wedge & (std::uint64_t{1} << i)) continue;
      const int sign = wedge_sign(i, b.wedge);
      const std::uint64_t target = b.wedge | (std::uint64_t{1} << i);
      for (const auto& [w, c] : seq_[i].terms())
        if (auto prod = ring_.multiply(w, b.monomial)) out.push_back({{target, *prod}, sign * c});
    }
    return out;
  }

  CochainComplexQ piece(std::int64_t d) const {
    CochainComplexQ c;
    const int k = static_cast<int>(seq_.size());
    std::vector<std::vector<KoszulBasisElement>> bases;
    for (int q = 0; q <= k; ++q) {
      bases.push_back(basis(q, d));
      std::vector<std::string> labels;
      for (const auto& b : bases.back()) labels.push_back("t^(" + to_string(b.monomial) + ") " + wedge_label(b.wedge));
      c.labels.push_back(std::move(labels));
    }
    for (int q = 0; q < k; ++q) {
      std::map<KoszulBasisElement, std::size_t> index;
      for (std::size_t r = 0; r < bases[q + 1].size(); ++r) index.emplace(bases[q + 1][r], r);
      SparseRationalMatrix m(bases[q + 1].size(), bases[q].size());
      for (std::size_t col = 0; col < bases[q].size(); ++col)
        for (const auto& [target, coeff] : apply(bases[q][col])) m.add(index.at(target), col, coeff);
      c.differentials.push_back(std::move(m));
    }
    return c;
  }

  GradedComplex truncated(std::int64_t max_degree) const {
    GradedComplex g;
    for (std::int64_t d = 0; d <= max_degree; ++d) g.by_degree.emplace(d, piece(d));
    return g;
  }

 private:
  Ring ring_;
  std::vector<RingElement> seq_;
  std::vector<std::int64_t> deg_;
};

template <class Ring>
struct KoszulDatum {
  Ring ring;
  std::vector<RingElement> sequence;
  std::vector<std::int64_t> degrees;
  std::int64_t truncation_degree = 0;
};

template <class Ring>
GradedComplex koszul_complex(const KoszulDatum<Ring>& datum) {
  return KoszulComplex<Ring>(datum.ring, datum.sequence, datum.degrees).truncated(datum.truncation_degree);
}

/// The top quotient R / (g_1..g_k) degree by degree, with a fixed monomial basis: in each degree
/// the basis is the set of non-pivot monomials of the reduced echelon form of the image (columns
/// ordered lexicographically). The echelon remembers how each image vector was produced, so
/// membership queries return a preimage.
template <class Ring>
class TopQuotient {
 public:
  struct Generator {
    std::size_t index;  // which g_i
    LatticeVector cofactor;
  };
  struct Piece {
    std::vector<LatticeVector> monomials;
    std::map<LatticeVector, std::size_t> position;
    std::vector<Generator> generators;
    EchelonBasis image{true};
    std::vector<std::size_t> basis;  // positions of the chosen monomials
  };

  TopQuotient(Ring ring, std::vector<RingElement> sequence, std::vector<std::int64_t> degrees)
      : ring_(std::move(ring)), seq_(std::move(sequence)), deg_(std::move(degrees)),
        cache_(std::make_shared<Cache>()) {}

  const Ring& ring() const noexcept { return ring_; }
  const std::vector<RingElement>& sequence() const noexcept { return seq_; }
  const std::vector<std::int64_t>& degrees() const noexcept { return deg_; }

  const Piece& piece(std::int64_t d) const {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->pieces.find(d);
    if (it != cache_->pieces.end()) return *it->second;
    auto p = std::make_unique<Piece>();
    p->monomials = ring_.graded_piece(d);
    for (std::size_t k = 0; k < p->monomials.size(); ++k) p->position.emplace(p->monomials[k], k);
    for (std::size_t i = 0; i < seq_.size(); ++i) {
      for (const auto& u : ring_.graded_piece(d - deg_[i])) {
        SparseVector v;
        for (const auto& [w, c] : seq_[i].terms())
          if (auto prod = ring_.multiply(w, u)) axpy(v, c, SparseVector{{p->position.at(*prod), Rational(1)}});
        p->generators.push_back({i, u});
        p->image.insert(std::move(v));
      }
    }
    for (std::size_t k = 0; k < p->monomials.size(); ++k)
      if (!p->image.is_pivot(k)) p->basis.push_back(k);
    return *cache_->pieces.emplace(d, std::move(p)).first->second;
  }

  std::size_t dimension(std::int64_t d) const { return piece(d).basis.size(); }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::int64_t, std::unique_ptr<Piece>> pieces;
  };
  Ring ring_;
  std::vector<RingElement> seq_;
  std::vector<std::int64_t> deg_;
  std::shared_ptr<Cache> cache_;
};

/// Reads GKZ_TRUNCATION_CAP; unset means no cap.
inline std::optional<std::int64_t> truncation_cap() {
  const char* v = std::getenv("GKZ_TRUNCATION_CAP");
  if (!v || !*v) return std::nullopt;
  try {
    return std::stoll(v);
  } catch (const std::exception&) {
    throw ParseError(std::string("GKZ_TRUNCATION_CAP is not an integer: ") + v);
  }
}

/// P_R(t) (1 - t^M)^n, the Poincare series of the top Koszul cohomology when the fiber is
/// nondegenerate. For the full ring and every facial ring this is a polynomial.
inline PolynomialQ expected_top_polynomial(const GradedRingHandle& ring) {
  auto series = poincare_series(ring) *
                PolynomialQ::one_minus_power(static_cast<std::size_t>(ring.gauge_denominator()), ring.cone_dimension());
  auto poly = series.as_polynomial();
  if (!poly) throw Error("InternalError", "Poincare series times (1-t^M)^dim is not a polynomial");
  return *poly;
}

struct KouchnirenkoResult {
  bool vanishing = false;             // H^i = 0 for i != n in every truncated degree
  std::int64_t top_dim = 0;           // sum over degrees of dim H^n
  bool equals_volume = false;
  bool support_ok = false;            // H^n vanishes above the expected degree
  std::vector<LatticeVector> monomial_basis;
  std::map<std::int64_t, std::size_t> top_dims;  // degree -> dim H^n_d
  std::map<std::int64_t, std::map<int, std::size_t>> lower_nonzero;  // degree -> q -> dim, q < n
  std::int64_t truncation = 0;
  std::int64_t expected_degree = 0;
  PolynomialQ expected;

  bool ok() const { return vanishing && support_ok && equals_volume; }
};

/// The truncation that certifies the Koszul computation: H^n can only live in degrees up to the
/// expected polynomial's degree e, and vanishing on (e, e + G] with G the generator degree bound
/// forces vanishing in all higher degrees.
inline std::int64_t certified_truncation(const GradedRingHandle& ring, std::optional<std::int64_t> override_degree = {}) {
  const std::int64_t e = expected_top_polynomial(ring).degree();
  const std::int64_t needed = e + ring.generator_degree_bound();
  std::int64_t d = needed;
  if (override_degree) {
    if (*override_degree < needed)
      throw TruncationTooSmall("truncation " + std::to_string(*override_degree) + " is below the certified bound " +
                               std::to_string(needed));
    d = *override_degree;
  }
  if (auto cap = truncation_cap(); cap && d > *cap)
    throw TruncationTooSmall("certified truncation " + std::to_string(d) + " exceeds GKZ_TRUNCATION_CAP=" +
                             std::to_string(*cap));
  return d;
}

/// Koszul complex of the graded log-derivative classes of the fiber on the full ring R.
inline KouchnirenkoResult verify_kouchnirenko(std::shared_ptr<const PolytopeAtInfinity> p, const std::vector<Rational>& a,
                                              std::optional<std::int64_t> truncation = {}) {
  auto ring = GradedRingHandle::full(p);
  const std::int64_t m = p->gauge_denominator();
  const int n = static_cast<int>(p->n());
  KouchnirenkoResult res;
  res.expected = expected_top_polynomial(ring);
  res.expected_degree = res.expected.degree();
  res.truncation = certified_truncation(ring, truncation);

  auto g = log_derivative_classes(a, *p);
  std::vector<std::int64_t> degs(g.size(), m);
  KoszulComplex<GradedRingHandle> kc(ring, g, degs);
  TopQuotient<GradedRingHandle> top(ring, g, degs);
  res.vanishing = true;
  res.support_ok = true;
  for (std::int64_t d = 0; d <= res.truncation; ++d) {
    auto dims = kc.piece(d).cohomology_dims();
    for (const auto& [q, h] : dims)
      if (q < n && h != 0) {
        res.vanishing = false;
        res.lower_nonzero[d][q] = h;
      }
    const std::size_t hn = dims[n];
    res.top_dims[d] = hn;
    res.top_dim += static_cast<std::int64_t>(hn);
    if (d > res.expected_degree && hn != 0) res.support_ok = false;
    const auto& piece = top.piece(d);
    if (piece.basis.size() != hn) throw Error("InternalError", "top quotient disagrees with Koszul cohomology");
    for (auto k : piece.basis) res.monomial_basis.push_back(piece.monomials[k]);
  }
  res.equals_volume = res.top_dim == p->normalized_volume();
  return res;
}

struct PoincareIdentityVerdict {
  bool ok = false;
  bool polynomial_nonnegative = false;
  bool sum_equals_volume = false;
  std::optional<std::int64_t> mismatch_degree;
  PolynomialQ polynomial;
};

/// Compares the per-degree dims of H^n with the coefficients of P_R(t) (1 - t^M)^n.
inline PoincareIdentityVerdict poincare_identity_check(const KouchnirenkoResult& res, const PolytopeAtInfinity& p) {
  PoincareIdentityVerdict v;
  v.polynomial = res.expected;
  v.polynomial_nonnegative = true;
  Rational sum = 0;
  for (const auto& c : res.expected.coeffs()) {
    if (c < 0) v.polynomial_nonnegative = false;
    sum += c;
  }
  v.sum_equals_volume = sum == p.normalized_volume();
  for (const auto& [d, h] : res.top_dims)
    if (res.expected[static_cast<std::size_t>(d)] != static_cast<long>(h)) {
      v.mismatch_degree = d;
      break;
    }
  v.ok = !v.mismatch_degree && v.polynomial_nonnegative && v.sum_equals_volume;
  return v;
}

struct RegularSequenceVerdict {
  bool lower_vanishing = true;   // H^q = 0 for q < d in every checked degree
  bool top_embeds = true;        // dim H^d_D <= dim (N / (f_1..f_d) N)_{D - shift}
  std::optional<std::int64_t> failing_degree;
  bool ok() const { return lower_vanishing && top_embeds; }
};

/// For f_1..f_d regular on the module: H^q(K(f_1..f_n)) = 0 for q < d, and H^d sits inside
/// N/(f_1..f_d)N, degree by degree up to max_degree.
template <class Ring>
RegularSequenceVerdict koszul_regular_sequence_check(const Ring& ring, const std::vector<RingElement>& seq,
                                                     const std::vector<std::int64_t>& degrees, std::size_t d,
                                                     std::int64_t max_degree) {
  RegularSequenceVerdict v;
  if (d == 0) return v;
  KoszulComplex<Ring> full(ring, seq, degrees);
  std::vector<RingElement> head(seq.begin(), seq.begin() + d);
  std::vector<std::int64_t> head_deg(degrees.begin(), degrees.begin() + d);
  TopQuotient<Ring> quotient(ring, head, head_deg);
  std::int64_t tail_shift = 0;
  for (std::size_t i = d; i < seq.size(); ++i) tail_shift += degrees[i];
  for (std::int64_t deg = 0; deg <= max_degree; ++deg) {
    auto dims = full.piece(deg).cohomology_dims();
    bool fail = false;
    for (int q = 0; q < static_cast<int>(d); ++q)
      if (dims[q] != 0) {
        v.lower_vanishing = false;
        fail = true;
      }
    const std::int64_t qdeg = deg - tail_shift;
    const std::size_t bound = qdeg >= 0 ? quotient.dimension(qdeg) : 0;
    if (dims[static_cast<int>(d)] > bound) {
      v.top_embeds = false;
      fail = true;
    }
    if (fail && !v.failing_degree) v.failing_degree = deg;
  }
  return v;
}

}  // namespace gkz
