#pragma once

// Escape-rate functions, filled Julia set oracles and the Monte-Carlo check
// of the Bassanelli-Berteloot identity for N = 2.

#include <cstdint>
#include <vector>

#include "caplab/fekete.hpp"
#include "caplab/polycore.hpp"

namespace caplab {

/// Flat term table for fast repeated evaluation of a complex map.
class CompiledMap {
 public:
  explicit CompiledMap(const PolynomialMap<Complex>& F);

  int dimension() const { return N_; }
  int degree() const { return d_; }

  void apply(const Point& z, Point& out) const;
  /// F(e^L u) e^{-dL} for ||u|| = 1: leading part plus damped lower terms.
  void apply_log_scaled(double L, const Point& u, Point& out) const;

 private:
  struct Term {
    int component;
    int degree;
    std::vector<int> exps;
    Complex coeff;
  };
  int N_;
  int d_;
  std::vector<Term> terms_;
};

struct EscapeParameters {
  /// ||z|| > escape_radius implies ||F(z)|| >= 2||z||.
  double escape_radius = 2.0;
  /// Orbits are bounded by this radius; sampling box for K_F.
  double bounded_radius = 2.0;
  int iteration_cap = 64;
  double tolerance = 1e-15;
  /// Sphere extremes of ||F_h|| used to derive the radii.
  double sphere_min = 0.0;
  double sphere_max = 0.0;
  double lower_order = 0.0;
};

/// Derives radii from the sphere minimum of ||F_h|| and the lower-order
/// coefficient mass: escape_radius solves (m/2) r^d - C (r^{d-1} + 1) >= 2r,
/// bounded_radius the same with r on the right.
EscapeParameters escape_parameters(const PolynomialMap<Complex>& F, int iteration_cap = 64, int sphere_samples = 4000,
                                   std::uint64_t seed = 1);

struct EscapeResult {
  double value = 0.0;
  /// False when the orbit stayed inside escape_radius for the whole cap;
  /// value is then 0 and the point is presumed to have a bounded orbit.
  bool escaped = false;
  int iterations = 0;
};

/// G^F(z) = lim d^{-n} log+ ||F^n(z)||.  After the orbit leaves the escape
/// radius the iteration continues in log coordinates until the remaining
/// tail is below the tolerance.
EscapeResult escape_rate(const CompiledMap& F, const Point& z, const EscapeParameters& params);
EscapeResult escape_rate(const PolynomialMap<Complex>& F, const Point& z, const EscapeParameters& params);

/// g^F(u) = G^{F_h}(u) for ||u|| = 1 and homogeneous F_h.
double homogeneous_green(const CompiledMap& F_h, const Point& u, double tolerance = 1e-15);

/// K_F approximated by orbits that stay within escape_radius for the cap.
SetOracle filled_julia_oracle(const PolynomialMap<Complex>& F, const EscapeParameters& params);

/// Member at the given cap (independent of the params cap).
bool julia_member(const CompiledMap& F, const Point& z, double escape_radius, int cap);

/// |Res|^{-1/(N d^{N-1} (d-1))}.
double julia_diam_prediction(double res_abs, int N, int d);
/// From the exact resultant of the leading part.
double julia_diam_prediction(const PolynomialMap<Rational>& F);
/// From the numeric resultant of the leading part.
double julia_diam_prediction(const PolynomialMap<Complex>& F);

/// Inverse-iteration samples of the Green measure of the map induced on P^1
/// by a homogeneous regular F_h on C^2, as unit vectors of C^2.  depth
/// burn-in pullbacks are discarded; depth = 0 returns the seed point only.
std::vector<Point> brolin_sample(const PolynomialMap<Complex>& F_h, int depth, int count, std::uint64_t seed);

/// Preimages of [q] under the induced map, with multiplicity, as unit vectors.
std::vector<Point> projective_preimages(const PolynomialMap<Complex>& F_h, const Point& q);

struct BBReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double sphere_mean = 0.0;   // average of g^F for Fubini-Study
  double current_mean = 0.0;  // average of g^F for the Green measure
  double res_abs = 0.0;
  int samples = 0;
  int depth = 0;
  std::uint64_t seed = 0;
};

/// Both sides of int g^F omega + int g^F T_f = log|Res| / (d(d-1)) - 1/2.
/// Samples are split into fixed chunks with independent streams, reduced in
/// chunk order, so results do not depend on the thread count.
BBReport bb_check(const PolynomialMap<Complex>& F_h, double res_abs, int samples, int depth, std::uint64_t seed,
                  int threads = 0);

/// Right-hand side for N = 2.
double bb_rhs(double res_abs, int d);

}  // namespace caplab
