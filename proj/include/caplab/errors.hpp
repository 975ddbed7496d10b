#pragma once

#include <stdexcept>
#include <string>

namespace caplab {

/// Leading homogeneous part has a nonzero common root (Res = 0).
class NonRegularMap : public std::domain_error {
 public:
  explicit NonRegularMap(const std::string& what) : std::domain_error(what) {}
};

/// A set oracle could not produce a configuration with nonzero Vandermonde determinant.
class DegenerateOracle : public std::runtime_error {
 public:
  explicit DegenerateOracle(const std::string& what) : std::runtime_error(what) {}
};

/// Hypotheses of a check are not met; distinct from the check failing.
class PreconditionFailure : public std::invalid_argument {
 public:
  explicit PreconditionFailure(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace caplab
