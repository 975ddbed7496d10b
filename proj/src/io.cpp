#include "caplab/io.hpp"

#include <cmath>

#include "caplab/resultant.hpp"

namespace caplab {

namespace {

struct ParsedScalar {
  Rational exact;
  double value;
  bool is_exact;
};

ParsedScalar parse_part(const Json& j, bool force_exact, const std::string& where) {
  try {
    if (j.is_null()) return {Rational(0), 0.0, true};
    if (j.is_number_integer()) {
      const Rational q(Integer(j.dump()));
      return {q, q.convert_to<double>(), true};
    }
    if (j.is_number_float()) {
      const double v = j.get<double>();
      if (force_exact) return {parse_rational(j.dump()), v, true};
      return {Rational(0), v, false};
    }
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (is_fraction_literal(s) || force_exact) {
        const Rational q = parse_rational(s);
        return {q, q.convert_to<double>(), true};
      }
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing characters");
      return {Rational(0), v, false};
    }
  } catch (const std::exception& e) {
    throw ConfigError(where + ": bad number " + j.dump() + " (" + e.what() + ")");
  }
  throw ConfigError(where + ": expected a number or numeric string, got " + j.dump());
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* key, const std::string& where) {
  try {
    return require(j, key, where).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": bad \"" + key + "\": " + e.what());
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_as<T>(j, key, where);
}

std::string coefficient_string(const Rational& q) { return to_string(q); }

}  // namespace

Complex parse_complex(const Json& j) {
  if (j.is_object()) {
    return {parse_part(j.value("re", Json(0)), false, "complex").value,
            parse_part(j.value("im", Json(0)), false, "complex").value};
  }
  if (j.is_array()) {
    if (j.size() != 2) throw ConfigError("complex: expected [re, im], got " + j.dump());
    return {parse_part(j[0], false, "complex").value, parse_part(j[1], false, "complex").value};
  }
  return {parse_part(j, false, "complex").value, 0.0};
}

MapDescriptor parse_map(const Json& j) {
  const std::string where = "map";
  if (!j.is_object()) throw ConfigError("map: expected an object");
  const int N = get_as<int>(j, "N", where);
  const int degree = get_as<int>(j, "degree", where);
  const bool force_exact = get_or<bool>(j, "exact", false, where);
  const Json& comps = require(j, "components", where);
  if (N < 1) throw ConfigError("map: N must be positive");
  if (!comps.is_array() || static_cast<int>(comps.size()) != N)
    throw ConfigError("map: \"components\" must be an array of N = " + std::to_string(N) + " term lists");

  struct Term {
    Monomial m;
    ParsedScalar re, im;
  };
  std::vector<std::vector<Term>> parsed(static_cast<std::size_t>(N));
  bool exact = true;
  for (int i = 0; i < N; ++i) {
    const Json& terms = comps[static_cast<std::size_t>(i)];
    const std::string w = "map component " + std::to_string(i);
    if (!terms.is_array()) throw ConfigError(w + ": expected an array of terms");
    for (const auto& t : terms) {
      auto exps = get_as<std::vector<int>>(t, "exponents", w);
      if (static_cast<int>(exps.size()) != N) throw ConfigError(w + ": exponent vector length differs from N");
      Term term;
      try {
        term.m = Monomial(std::move(exps));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(w + ": " + e.what());
      }
      const Json& c = require(t, "coeff", w);
      if (c.is_object()) {
        term.re = parse_part(c.value("re", Json(0)), force_exact, w);
        term.im = parse_part(c.value("im", Json(0)), force_exact, w);
      } else {
        term.re = parse_part(c, force_exact, w);
        term.im = {Rational(0), 0.0, true};
      }
      exact = exact && term.re.is_exact && term.im.is_exact;
      parsed[static_cast<std::size_t>(i)].push_back(std::move(term));
    }
  }

  MapDescriptor out;
  out.source = j;
  out.exact = exact;
  try {
    std::vector<SparsePolynomial<Complex>> num;
    for (const auto& terms : parsed) {
      SparsePolynomial<Complex> p(N);
      for (const auto& t : terms) p.add_term(t.m, Complex(t.re.value, t.im.value));
      num.push_back(std::move(p));
    }
    out.numeric = PolynomialMap<Complex>(std::move(num));
    if (exact) {
      std::vector<SparsePolynomial<GaussianRational>> gauss;
      bool real = true;
      for (const auto& terms : parsed) {
        SparsePolynomial<GaussianRational> p(N);
        for (const auto& t : terms) {
          p.add_term(t.m, GaussianRational(t.re.exact, t.im.exact));
          real = real && t.im.exact == 0;
        }
        gauss.push_back(std::move(p));
      }
      out.gaussian = PolynomialMap<GaussianRational>(std::move(gauss));
      if (real) {
        std::vector<SparsePolynomial<Rational>> rat;
        for (const auto& terms : parsed) {
          SparsePolynomial<Rational> p(N);
          for (const auto& t : terms) p.add_term(t.m, t.re.exact);
          rat.push_back(std::move(p));
        }
        out.rational = PolynomialMap<Rational>(std::move(rat));
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("map: ") + e.what());
  }
  if (out.numeric.degree() != degree)
    throw ConfigError("map: declared degree " + std::to_string(degree) + " but components have degree " +
                      std::to_string(out.numeric.degree()));
  return out;
}

namespace {

template <typename S, typename ToCoeff>
Json map_json(const PolynomialMap<S>& F, ToCoeff coeff) {
  Json comps = Json::array();
  for (const auto& c : F.components()) {
    Json terms = Json::array();
    for (const auto& [m, v] : c.terms()) terms.push_back({{"exponents", m.exponents()}, {"coeff", coeff(v)}});
    comps.push_back(std::move(terms));
  }
  return {{"N", F.dimension()}, {"degree", F.degree()}, {"components", std::move(comps)}};
}

}  // namespace

Json map_to_json(const PolynomialMap<Rational>& F) {
  return map_json(F, [](const Rational& q) { return Json{{"re", coefficient_string(q)}, {"im", "0"}}; });
}

Json map_to_json(const PolynomialMap<Complex>& F) {
  auto str = [](double v) {
    Json j = v;
    return j.dump();
  };
  return map_json(F, [&](const Complex& z) { return Json{{"re", str(z.real())}, {"im", str(z.imag())}}; });
}

SetDescriptor parse_set(const Json& j) {
  const std::string where = "set";
  const auto kind = get_as<std::string>(j, "kind", where);
  SetDescriptor out;
  out.source = j;
  out.resolved = j;
  try {
    if (kind == "polydisc") {
      out.oracle = polydisc_oracle(get_as<std::vector<double>>(j, "radii", where));
    } else if (kind == "ball") {
      out.oracle = ball_oracle(get_as<int>(j, "N", where), get_or<double>(j, "radius", 1.0, where));
    } else if (kind == "interval") {
      out.oracle = interval_oracle(get_or<double>(j, "a", -1.0, where), get_or<double>(j, "b", 1.0, where),
                                   get_or<int>(j, "grid", 4096, where));
    } else if (kind == "points") {
      std::vector<Point> pts;
      for (const auto& p : require(j, "points", where)) {
        if (!p.is_array()) throw ConfigError("set: each point must be an array of coordinates");
        Point z(static_cast<Eigen::Index>(p.size()));
        for (std::size_t i = 0; i < p.size(); ++i) z(static_cast<Eigen::Index>(i)) = parse_complex(p[i]);
        pts.push_back(std::move(z));
      }
      out.oracle = points_oracle(std::move(pts));
    } else if (kind == "preimage") {
      const auto F = parse_map(require(j, "map", where));
      const auto inner = parse_set(require(j, "set", where));
      out.oracle = preimage_oracle(F.numeric, inner.oracle);
      out.resolved["set"] = inner.resolved;
    } else if (kind == "filled_julia") {
      const auto F = parse_map(require(j, "map", where));
      const auto params = escape_parameters(F.numeric, get_or<int>(j, "cap", 64, where));
      out.oracle = filled_julia_oracle(F.numeric, params);
      out.resolved["params"] = {{"escape_radius", params.escape_radius},
                                {"bounded_radius", params.bounded_radius},
                                {"cap", params.iteration_cap},
                                {"sphere_min", params.sphere_min},
                                {"lower_order", params.lower_order}};
    } else {
      throw ConfigError("set: unknown kind \"" + kind + "\"");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("set: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("set: ") + e.what());
  }
  return out;
}

UltrametricPolydisc parse_polydisc_p(const Json& j) {
  const std::string where = "polydisc_p";
  const auto p = get_as<std::uint64_t>(j, "prime", where);
  if (!is_prime(p)) throw ConfigError("polydisc_p: " + std::to_string(p) + " is not prime");
  std::vector<Rational> radii;
  for (const auto& r : require(j, "radii_log_p", where)) {
    const auto q = parse_part(r, true, where);
    radii.push_back(q.exact);
  }
  if (radii.empty()) throw ConfigError("polydisc_p: empty radii_log_p");
  return UltrametricPolydisc{p, std::move(radii)};
}

Json polydisc_to_json(const UltrametricPolydisc& D) {
  Json radii = Json::array();
  for (const auto& r : D.radii_log_p) radii.push_back(to_string(r));
  return {{"prime", D.prime}, {"radii_log_p", std::move(radii)}};
}

}  // namespace caplab
