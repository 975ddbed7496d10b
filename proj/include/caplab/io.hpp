#pragma once

// JSON descriptors for maps, sets and p-adic polydiscs.
//
// Map:      {"N": 2, "degree": 2, "exact": false,
//            "components": [[{"exponents": [2, 0], "coeff": {"re": "1", "im": "0"}}, ...], ...]}
// Set:      {"kind": "polydisc", "radii": [1, 1]}
//           {"kind": "ball", "N": 2, "radius": 1}
//           {"kind": "interval", "a": -1, "b": 1, "grid": 4096}
//           {"kind": "points", "points": [[[re, im], ...], ...]}
//           {"kind": "preimage", "map": {...}, "set": {...}}
//           {"kind": "filled_julia", "map": {...}, "cap": 64}
// Polydisc: {"prime": 3, "radii_log_p": ["1/2", "0"]}

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "caplab/dynamics.hpp"
#include "caplab/fekete.hpp"
#include "caplab/padic.hpp"
#include "caplab/polycore.hpp"

namespace caplab {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent descriptor.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MapDescriptor {
  Json source;
  /// Every coefficient was parsed exactly (fractions, or decimals with "exact": true).
  bool exact = false;
  std::optional<PolynomialMap<GaussianRational>> gaussian;
  /// Present when exact and every imaginary part is zero.
  std::optional<PolynomialMap<Rational>> rational;
  PolynomialMap<Complex> numeric;

  int dimension() const { return numeric.dimension(); }
  int degree() const { return numeric.degree(); }
};

MapDescriptor parse_map(const Json& j);
Json map_to_json(const PolynomialMap<Rational>& F);
Json map_to_json(const PolynomialMap<Complex>& F);

struct SetDescriptor {
  Json source;
  /// source plus derived parameters (escape radii, caps) for provenance.
  Json resolved;
  SetOracle oracle;
};

SetDescriptor parse_set(const Json& j);

UltrametricPolydisc parse_polydisc_p(const Json& j);
Json polydisc_to_json(const UltrametricPolydisc& D);

/// Complex number from {"re", "im"}, [re, im], a number or a numeric string.
Complex parse_complex(const Json& j);

}  // namespace caplab
