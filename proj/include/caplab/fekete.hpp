#pragma once

// Fekete-type search for the n-th diameter
//
//   d_n(E) = ( sup |det(e_i(zeta_j))| )^{1/D(n)}
//
// over M(n)-point configurations in a set E given by a membership oracle.
// Every configuration the search produces lies in E, so each reported d_n
// is a lower bound for the true d_n(E).

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "caplab/errors.hpp"
#include "caplab/polycore.hpp"

namespace caplab {

using Point = Eigen::VectorXcd;
using Rng = std::mt19937_64;

/// Deterministic seed derivation for independent streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Bounded subset of C^N given by a membership predicate and a sampler.
struct SetOracle {
  int dimension = 1;
  /// E lies in the Euclidean ball of this radius.
  double bounding_radius = 1.0;
  std::function<bool(const Point&)> contains;
  /// Draws a point of E, or nullopt when the sampler's iteration cap is hit.
  std::function<std::optional<Point>(Rng&)> sample;
  /// Optional local move used by the exchange optimizer; the default is a
  /// complex Gaussian step filtered by `contains`.
  std::function<std::optional<Point>(const Point&, double step, Rng&)> perturb;
  /// Human-readable descriptor, e.g. "polydisc(1,1)".
  std::string description;

  std::optional<Point> propose_near(const Point& z, double step, Rng& rng) const;
};

SetOracle polydisc_oracle(std::vector<double> radii);
SetOracle ball_oracle(int N, double radius = 1.0);
/// Real segment [a, b] in C^1; sampled on a uniform grid of `grid` nodes
/// plus uniform jitter inside grid cells.
SetOracle interval_oracle(double a, double b, int grid = 4096);
/// A finite point set.
SetOracle points_oracle(std::vector<Point> points);

/// Monomials of degree <= n with per-coordinate scales so that matrix
/// entries stay O(1): column alpha holds prod (z_i / s_i)^{alpha_i}.
struct ScaledBasis {
  int N = 1;
  int n = 0;
  std::vector<Monomial> monomials;
  Eigen::VectorXd scales;
  /// log prod_alpha s^alpha = (D(n)/N) * sum_i log s_i.
  double log_correction = 0.0;

  ScaledBasis(int N, int n, Eigen::VectorXd scales);
  Eigen::Index size() const { return static_cast<Eigen::Index>(monomials.size()); }
  Eigen::RowVectorXcd row(const Point& z) const;
  /// Rows = points.
  Eigen::MatrixXcd matrix(const Eigen::MatrixXcd& points) const;
};

/// Per-coordinate max modulus over the rows of `points` (1 where all vanish).
Eigen::VectorXd coordinate_scales(const Eigen::MatrixXcd& points);

/// log |det(e_i(zeta_j))| for exactly M(n) points (rows of `points`);
/// -infinity for singular configurations.
double vandermonde_logabsdet(const Eigen::MatrixXcd& points, int N, int n);

struct FeketeConfiguration {
  int N = 1;
  int n = 0;
  Eigen::MatrixXcd points;  // M(n) x N
  double log_abs_det = 0.0;

  double dn() const;
};

struct FeketeBudget {
  int candidate_count = 1024;
  int rounds = 200;
  int restarts = 2;
  /// 0 = take the default thread count (CAPLAB_THREADS or hardware).
  int threads = 0;
};

int default_thread_count();

/// Greedy selection from a sampled pool: each step adds the candidate that
/// maximizes the growth of the Vandermonde volume (pivoted QR).
FeketeConfiguration greedy_leja(const SetOracle& E, int n, int candidate_count, std::uint64_t seed);

/// Single-point exchange: proposals from the sampler and local moves are
/// accepted iff |det| strictly increases.  Restart r uses stream (seed, r)
/// and starts from `config`; the best restart wins, ties to the lower index.
FeketeConfiguration exchange_optimize(const FeketeConfiguration& config, const SetOracle& E, int rounds, int restarts,
                                      std::uint64_t seed, int threads = 0);

/// greedy_leja followed by exchange_optimize.
FeketeConfiguration dn_estimate(const SetOracle& E, int n, const FeketeBudget& budget, std::uint64_t seed);

struct DiamRow {
  int n;
  std::uint64_t M;
  std::uint64_t D;
  double log_abs_det;
  double dn;
};

struct DiamSequence {
  std::vector<DiamRow> rows;
  /// d_{n_max}, the proxy for d_infinity.
  double final_dn = 0.0;
  /// max - min over the last three d_n.
  double spread = 0.0;
  /// Per-n seeds for replay.
  std::vector<std::uint64_t> seeds;
};

DiamSequence diam_sequence(const SetOracle& E, int n_max, const FeketeBudget& budget, std::uint64_t seed);

/// "n,M,D,log_abs_det,d_n" header plus one line per row.
std::string to_csv(const DiamSequence& seq);

struct PreimageOptions {
  int sphere_samples = 4000;
  std::uint64_t sphere_seed = 1;
  /// Rejection attempts per sampled point.
  int rejection_cap = 200000;
};

/// Radius R with ||F(z)|| > target for all ||z|| > R, from
/// ||F(z)|| >= m ||z||^d - sum_k C_k ||z||^k, m = 0.9 sphere_min (the sampled
/// minimum is an upper estimate).
double growth_radius(double sphere_min, const std::vector<double>& lower_profile, int d, double target);

/// F^{-1}E.  Throws NonRegularMap when Res(F_h) vanishes numerically or the
/// sphere-minimum estimate is not positive.
SetOracle preimage_oracle(const PolynomialMap<Complex>& F, const SetOracle& E, const PreimageOptions& options = {});

struct PullbackReport {
  double res_abs = 0.0;
  double dn_E = 0.0;
  double lhs = 0.0;               // d_{n_max}(F^{-1}E)
  double rhs = 0.0;               // |Res|^{-1/(N d^N)} d_{n_max}(E)^{1/d}
  double log_gap = 0.0;           // |log(lhs / rhs)|
  double lhs_leading = 0.0;       // d_{n_max}(F_h^{-1}E)
  double leading_log_gap = 0.0;   // |log lhs - log lhs_leading|
  DiamSequence sequence_E;
  DiamSequence sequence_preimage;
  DiamSequence sequence_leading;
};

/// Runs diam_sequence on E, F^{-1}E and F_h^{-1}E (shared seeds) and
/// compares with the pullback formula using the supplied |Res(F_h)|.
PullbackReport pullback_check(const PolynomialMap<Complex>& F, double res_abs, const SetOracle& E, int n_max,
                              const FeketeBudget& budget, std::uint64_t seed);

}  // namespace caplab
