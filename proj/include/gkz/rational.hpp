#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gkz {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", "-p/q" or a plain integer string into a canonical rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw std::invalid_argument("empty rational");
  s = s.substr(first, last - first + 1);
  if (s.front() == '+') s.erase(0, 1);
  auto slash = s.find('/');
  auto digits_ok = [](std::string_view part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && part[0] == '-') i = 1;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  BigInt d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r{BigInt(num), d};
  r.canonicalize();
  return r;
}

/// Canonical text: "p/q" with q > 1, or the bare integer.
inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

/// p/q in lowest terms; q must be nonzero.
inline Rational ratio(std::int64_t p, std::int64_t q) {
  Rational r{BigInt(static_cast<long>(p)), BigInt(static_cast<long>(q))};
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline std::int64_t to_int64(const BigInt& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return z.get_si();
}

/// The value of an integral rational as int64; throws if it is not an integer or too large.
inline std::int64_t integer_value(const Rational& r) {
  if (r.get_den() != 1) throw std::domain_error("rational " + r.get_str() + " is not an integer");
  return to_int64(r.get_num());
}

inline BigInt floor_of(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline BigInt ceil_of(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return (a / gcd64(a, b)) * (b < 0 ? -b : b);
}

}  // namespace gkz
