#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkz/errors.hpp"
#include "gkz/lattice.hpp"
#include "gkz/rational.hpp"
#include "gkz/series.hpp"

namespace gkz {

using Json = nlohmann::ordered_json;

struct ProblemOptions {
  std::optional<std::int64_t> truncation;  // override for the certified Koszul bound
  std::int64_t weight_bound = 6;           // face-complex check: all w with M rho(w) <= bound
  std::uint64_t seed = 1;                  // drawing a fiber when none is given
  bool normalize_gamma = true;
};

struct ProblemSpec {
  std::vector<std::vector<std::int64_t>> matrix;
  RationalVector gamma;  // empty means zero
  std::optional<std::vector<Rational>> fiber;
  ProblemOptions options;
};

inline bool operator==(const ProblemOptions& a, const ProblemOptions& b) {
  return a.truncation == b.truncation && a.weight_bound == b.weight_bound && a.seed == b.seed &&
         a.normalize_gamma == b.normalize_gamma;
}
inline bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  return a.matrix == b.matrix && a.gamma == b.gamma && a.fiber == b.fiber && a.options == b.options;
}

// exact numbers go out as strings
inline Json num(const Rational& r) { return to_string(r); }
inline Json num(std::int64_t x) { return std::to_string(x); }
inline Json num(std::size_t x) { return std::to_string(x); }
inline Json num(int x) { return std::to_string(x); }

inline Json nums(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(num(x));
  return a;
}
inline Json nums(const LatticeVector& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(num(x));
  return a;
}
inline Json nums(const std::vector<std::size_t>& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(num(x));
  return a;
}
inline Json nums(const RationalMatrix& m) {
  Json a = Json::array();
  for (const auto& row : m) a.push_back(nums(row));
  return a;
}
inline Json nums(const PolynomialQ& p) { return nums(p.coeffs()); }

inline Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  throw ParseError(where + ": expected an integer or a rational string");
}

inline std::int64_t integer_from_json(const Json& j, const std::string& where) {
  Rational r = rational_from_json(j, where);
  if (!is_integer(r)) throw ParseError(where + ": expected an integer, got " + to_string(r));
  return to_int64(integer_value(r));
}

inline RationalVector rationals_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  RationalVector out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(rational_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

/// Comma-separated rationals, as given to --fiber and --gamma.
inline RationalVector parse_rational_list(const std::string& text) {
  RationalVector out;
  std::string cur;
  auto flush = [&] {
    std::size_t b = cur.find_first_not_of(" \t"), e = cur.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError("empty entry in list '" + text + "'");
    try {
      out.push_back(parse_rational(cur.substr(b, e - b + 1)));
    } catch (const std::exception& ex) {
      throw ParseError(std::string("bad rational in list '") + text + "': " + ex.what());
    }
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') flush();
    else cur += c;
  }
  flush();
  return out;
}

inline ProblemSpec parse_problem(const Json& j) {
  if (!j.is_object()) throw ParseError("problem spec must be a JSON object");
  ProblemSpec spec;
  if (!j.contains("matrix")) throw ParseError("missing field 'matrix'");
  const Json& m = j.at("matrix");
  if (!m.is_array()) throw ParseError("'matrix' must be an array of rows");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i].is_array()) throw ParseError("matrix row " + std::to_string(i) + " is not an array");
    std::vector<std::int64_t> row;
    for (std::size_t k = 0; k < m[i].size(); ++k)
      row.push_back(integer_from_json(m[i][k], "matrix[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
    spec.matrix.push_back(std::move(row));
  }
  if (j.contains("gamma") && !j.at("gamma").is_null()) spec.gamma = rationals_from_json(j.at("gamma"), "gamma");
  if (j.contains("fiber") && !j.at("fiber").is_null()) spec.fiber = rationals_from_json(j.at("fiber"), "fiber");
  if (j.contains("options")) {
    const Json& o = j.at("options");
    if (!o.is_object()) throw ParseError("'options' must be an object");
    if (o.contains("truncation") && !o.at("truncation").is_null())
      spec.options.truncation = integer_from_json(o.at("truncation"), "options.truncation");
    if (o.contains("weightBound")) spec.options.weight_bound = integer_from_json(o.at("weightBound"), "options.weightBound");
    if (o.contains("seed")) {
      auto s = integer_from_json(o.at("seed"), "options.seed");
      if (s < 0) throw ParseError("options.seed must be nonnegative");
      spec.options.seed = static_cast<std::uint64_t>(s);
    }
    if (o.contains("normalizeGamma")) {
      if (!o.at("normalizeGamma").is_boolean()) throw ParseError("options.normalizeGamma must be a boolean");
      spec.options.normalize_gamma = o.at("normalizeGamma").get<bool>();
    }
  }
  return spec;
}

inline ProblemSpec parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(j);
}

inline Json to_json(const ProblemSpec& spec) {
  Json j;
  Json rows = Json::array();
  for (const auto& r : spec.matrix) rows.push_back(r);
  j["matrix"] = rows;
  j["gamma"] = nums(spec.gamma);
  j["fiber"] = spec.fiber ? nums(*spec.fiber) : Json(nullptr);
  Json o;
  o["truncation"] = spec.options.truncation ? Json(num(*spec.options.truncation)) : Json(nullptr);
  o["weightBound"] = num(spec.options.weight_bound);
  o["seed"] = std::to_string(spec.options.seed);
  o["normalizeGamma"] = spec.options.normalize_gamma;
  j["options"] = o;
  return j;
}

inline Json error_json(const std::string& kind, const std::string& stage, const std::string& message) {
  Json e;
  e["kind"] = kind;
  e["stage"] = stage;
  e["message"] = message;
  Json j;
  j["error"] = e;
  return j;
}

}  // namespace gkz
