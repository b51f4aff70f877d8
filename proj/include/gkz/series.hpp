#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkz/rational.hpp"

namespace gkz {

/// Univariate polynomial over Q; coeffs[k] is the coefficient of t^k, no trailing zeros.
class PolynomialQ {
 public:
  PolynomialQ() = default;
  PolynomialQ(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  static PolynomialQ constant(const Rational& v) { return PolynomialQ(std::vector<Rational>{v}); }
  static PolynomialQ monomial(std::size_t k, const Rational& v = 1) {
    std::vector<Rational> c(k + 1, Rational(0));
    c[k] = v;
    return PolynomialQ(std::move(c));
  }
  /// (1 - t^m)^e
  static PolynomialQ one_minus_power(std::size_t m, std::size_t e) {
    PolynomialQ base = constant(1) - monomial(m);
    PolynomialQ out = constant(1);
    for (std::size_t i = 0; i < e; ++i) out = out * base;
    return out;
  }

  const std::vector<Rational>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  Rational operator[](std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend PolynomialQ operator+(const PolynomialQ& a, const PolynomialQ& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return PolynomialQ(std::move(c));
  }
  friend PolynomialQ operator-(const PolynomialQ& a, const PolynomialQ& b) { return a + b * Rational(-1); }
  friend PolynomialQ operator*(const PolynomialQ& a, const Rational& s) {
    std::vector<Rational> c(a.c_);
    for (auto& x : c) x *= s;
    return PolynomialQ(std::move(c));
  }
  friend PolynomialQ operator*(const PolynomialQ& a, const PolynomialQ& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return PolynomialQ(std::move(c));
  }
  friend bool operator==(const PolynomialQ& a, const PolynomialQ& b) { return a.c_ == b.c_; }

  /// Quotient and remainder; divisor must be nonzero.
  static std::pair<PolynomialQ, PolynomialQ> divmod(const PolynomialQ& a, const PolynomialQ& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> r(a.c_);
    if (a.degree() < b.degree()) return {PolynomialQ(), a};
    std::vector<Rational> q(a.c_.size() - b.c_.size() + 1, Rational(0));
    for (long k = static_cast<long>(q.size()) - 1; k >= 0; --k) {
      Rational f = r[k + b.c_.size() - 1] / b.c_.back();
      q[k] = f;
      if (f == 0) continue;
      for (std::size_t i = 0; i < b.c_.size(); ++i) r[k + i] -= f * b.c_[i];
    }
    return {PolynomialQ(std::move(q)), PolynomialQ(std::move(r))};
  }

  /// Monic greatest common divisor (zero if both are zero).
  static PolynomialQ gcd(PolynomialQ a, PolynomialQ b) {
    while (!b.is_zero()) {
      auto r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a * (Rational(1) / a.leading());
  }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] == 0) continue;
      Rational v = c_[k];
      bool neg = v < 0;
      if (neg) v = -v;
      if (out.empty())
        out += neg ? "-" : "";
      else
        out += neg ? " - " : " + ";
      if (k == 0 || v != 1) out += gkz::to_string(v);
      if (k >= 1) out += (k == 0 || v != 1) ? "*t" : "t";
      if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// numerator / denominator in lowest terms, denominator normalized to constant term 1 when that
/// term is nonzero (otherwise to leading coefficient 1).
class RationalFunctionQ {
 public:
  RationalFunctionQ() : num_(), den_(PolynomialQ::constant(1)) {}
  RationalFunctionQ(PolynomialQ num, PolynomialQ den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  const PolynomialQ& numerator() const noexcept { return num_; }
  const PolynomialQ& denominator() const noexcept { return den_; }

  friend RationalFunctionQ operator+(const RationalFunctionQ& a, const RationalFunctionQ& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalFunctionQ operator-(const RationalFunctionQ& a, const RationalFunctionQ& b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalFunctionQ operator*(const RationalFunctionQ& a, const RationalFunctionQ& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend RationalFunctionQ operator*(const RationalFunctionQ& a, const PolynomialQ& p) {
    return {a.num_ * p, a.den_};
  }
  friend bool operator==(const RationalFunctionQ& a, const RationalFunctionQ& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

  /// The polynomial, when the denominator is constant.
  std::optional<PolynomialQ> as_polynomial() const {
    if (den_.degree() != 0) return std::nullopt;
    return num_ * (Rational(1) / den_[0]);
  }

  /// First `count` Taylor coefficients at t = 0; requires a nonzero constant term below.
  std::vector<Rational> taylor(std::size_t count) const {
    if (den_[0] == 0) throw std::domain_error("series has a pole at t = 0");
    std::vector<Rational> out(count, Rational(0));
    for (std::size_t k = 0; k < count; ++k) {
      Rational acc = num_[k];
      for (std::size_t i = 1; i <= k && i < den_.coeffs().size(); ++i) acc -= den_[i] * out[k - i];
      out[k] = acc / den_[0];
    }
    return out;
  }

  /// Order of the pole at t = 1 (negative for a zero).
  long pole_order_at_one() const {
    long order = 0;
    PolynomialQ root = PolynomialQ(std::vector<Rational>{Rational(-1), Rational(1)});
    PolynomialQ n = num_, d = den_;
    while (!d.is_zero() && d.eval(1) == 0) {
      d = PolynomialQ::divmod(d, root).first;
      ++order;
    }
    while (!n.is_zero() && n.eval(1) == 0) {
      n = PolynomialQ::divmod(n, root).first;
      --order;
    }
    return order;
  }

  std::string to_string() const { return "(" + num_.to_string() + ") / (" + den_.to_string() + ")"; }

 private:
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("zero denominator");
    PolynomialQ g = PolynomialQ::gcd(num_, den_);
    if (!g.is_zero() && g.degree() > 0) {
      num_ = PolynomialQ::divmod(num_, g).first;
      den_ = PolynomialQ::divmod(den_, g).first;
    }
    Rational s = den_[0] != 0 ? den_[0] : den_.leading();
    num_ = num_ * (Rational(1) / s);
    den_ = den_ * (Rational(1) / s);
  }

  PolynomialQ num_;
  PolynomialQ den_;
};

}  // namespace gkz
