#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "caplab/fekete.hpp"
#include "caplab/resultant.hpp"
#include "support.hpp"

using namespace caplab;
using namespace testing;

namespace {

Eigen::MatrixXcd roots_of_unity(int m, double radius = 1.0) {
  Eigen::MatrixXcd P(m, 1);
  for (int k = 0; k < m; ++k) P(k, 0) = std::polar(radius, 2.0 * std::numbers::pi * k / m);
  return P;
}

// Legendre P_n and P_n' by recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1)};
}

// Fekete points of [-1, 1] for polynomials of degree <= n: the endpoints
// plus the zeros of P_n'.  Returns d_n from the product of distances.
double interval_fekete_dn(int n) {
  std::vector<double> x = {-1.0, 1.0};
  for (int k = 1; k < n; ++k) {
    double t = -std::cos(std::numbers::pi * k / n);
    for (int it = 0; it < 100; ++it) {
      // Newton on P_n' using the Legendre ODE for P_n''.
      const auto [p, dp] = legendre(n, t);
      const double ddp = (2 * t * dp - n * (n + 1) * p) / (1 - t * t);
      const double step = dp / ddp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x.push_back(t);
  }
  double log_prod = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) log_prod += std::log(std::abs(x[i] - x[j]));
  return std::exp(log_prod / (n * (n + 1) / 2.0));
}

Eigen::MatrixXcd random_points(std::mt19937_64& rng, int M, int N) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd P(M, N);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < N; ++j) P(i, j) = Complex(g(rng), g(rng)) * 0.5;
  return P;
}

}  // namespace

TEST_CASE("roots of unity attain the disc optimum") {
  // |Vandermonde| at the m-th roots of unity is m^{m/2}.
  for (int n = 1; n <= 8; ++n) {
    const double l = vandermonde_logabsdet(roots_of_unity(n + 1), 1, n);
    CHECK(l == doctest::Approx(0.5 * (n + 1) * std::log(n + 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("unit disc search reaches the known optima") {
  const auto disc = polydisc_oracle({1.0});
  FeketeBudget budget{512, 200, 2, 1};
  const auto d1 = dn_estimate(disc, 1, budget, 1);
  const auto d2 = dn_estimate(disc, 2, budget, 2);
  CHECK(d1.dn() >= 1.98);
  CHECK(d2.dn() >= 1.715);
  for (int n = 1; n <= 8; ++n) {
    const auto c = dn_estimate(disc, n, budget, static_cast<std::uint64_t>(n));
    CHECK(c.dn() <= std::pow(n + 1.0, 1.0 / n) + 1e-6);
  }
}

TEST_CASE("configuration scaling equivariance") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  for (int N = 1; N <= 3; ++N)
    for (int n = 1; n <= 5; ++n) {
      const int M = static_cast<int>(count_monomials(N, n));
      const auto P = random_points(rng, M, N);
      const Complex c(g(rng), g(rng));
      const double base = vandermonde_logabsdet(P, N, n);
      const double scaled = vandermonde_logabsdet(c * P, N, n);
      const double D = static_cast<double>(vandermonde_degree(N, n));
      const double dn = std::exp(base / D), dn_scaled = std::exp(scaled / D);
      CHECK(std::abs(dn_scaled / (std::abs(c) * dn) - 1.0) <= 1e-10);
    }
}

TEST_CASE("singular configurations give minus infinity") {
  Eigen::MatrixXcd P(3, 2);
  P << Complex(1), Complex(0), Complex(2), Complex(0), Complex(3), Complex(0);
  CHECK(vandermonde_logabsdet(P, 2, 1) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(vandermonde_logabsdet(P.topRows(2), 2, 1), std::invalid_argument);
}

TEST_CASE("interval against its Fekete points") {
  const double oracle8 = interval_fekete_dn(8);
  CHECK(oracle8 == doctest::Approx(0.722749).epsilon(1e-5));
  const auto E = interval_oracle(-1.0, 1.0);
  const auto c = dn_estimate(E, 8, FeketeBudget{1024, 400, 2, 1}, 4);
  CHECK(c.dn() <= oracle8 + 1e-9);
  CHECK(c.dn() >= oracle8 - 2e-3);
}

TEST_CASE("polydisc Hadamard bound") {
  const auto E = polydisc_oracle({1.0, 1.0});
  for (int n = 1; n <= 3; ++n) {
    const auto c = dn_estimate(E, n, FeketeBudget{256, 100, 1, 1}, 9);
    const double M = static_cast<double>(count_monomials(2, n));
    const double D = static_cast<double>(vandermonde_degree(2, n));
    CHECK(c.log_abs_det <= std::lgamma(M + 1.0) + 1e-12);
    CHECK(c.dn() <= std::exp(std::lgamma(M + 1.0) / D));
    // Product-of-column-norms bound: |det| <= M^{M/2} for unimodular entries.
    CHECK(c.log_abs_det <= 0.5 * M * std::log(M) + 1e-9);
  }
}

TEST_CASE("exchange never decreases and zero rounds is the identity") {
  const auto E = ball_oracle(2, 1.0);
  const auto start = greedy_leja(E, 3, 200, 5);
  const auto same = exchange_optimize(start, E, 0, 2, 6, 1);
  CHECK(same.log_abs_det == start.log_abs_det);
  CHECK(same.points == start.points);
  const auto better = exchange_optimize(start, E, 100, 2, 6, 1);
  CHECK(better.log_abs_det >= start.log_abs_det);
  for (Eigen::Index i = 0; i < better.points.rows(); ++i) CHECK(E.contains(better.points.row(i).transpose()));
}

TEST_CASE("restarts are schedule independent") {
  const auto E = polydisc_oracle({1.0, 1.0});
  const auto start = greedy_leja(E, 2, 200, 3);
  const auto one = exchange_optimize(start, E, 60, 4, 8, 1);
  const auto four = exchange_optimize(start, E, 60, 4, 8, 4);
  CHECK(one.log_abs_det == four.log_abs_det);
  CHECK(one.points == four.points);
}

TEST_CASE("inclusion monotonicity from a shared start") {
  const auto small = ball_oracle(2, 1.0);
  const auto big = polydisc_oracle({1.0, 1.0});
  const auto c = dn_estimate(small, 3, FeketeBudget{256, 100, 1, 1}, 2);
  const auto lifted = exchange_optimize(c, big, 100, 1, 3, 1);
  CHECK(lifted.dn() >= c.dn());
}

TEST_CASE("finite point sets") {
  std::vector<Point> pts;
  for (int k = 0; k < 3; ++k) {
    Point z(1);
    z << std::polar(1.0, 2.0 * std::numbers::pi * k / 3);
    pts.push_back(z);
  }
  const auto E = points_oracle(pts);
  const auto c = greedy_leja(E, 2, 3, 1);
  CHECK(c.dn() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("preimage membership is membership of the image") {
  const auto F = to_complex_map(binary_quadratics<Rational>(1, 0, 1, 0, 1, 0));
  const auto E = polydisc_oracle({1.0, 1.0});
  const auto P = preimage_oracle(F, E);
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  for (int k = 0; k < 500; ++k) {
    Point z(2);
    z << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
    const auto w = F(std::span<const Complex>(z.data(), 2));
    Point fz(2);
    fz << w[0], w[1];
    CHECK(P.contains(z) == E.contains(fz));
  }
  Rng r(1);
  for (int k = 0; k < 20; ++k) {
    const auto s = P.sample(r);
    REQUIRE(s.has_value());
    CHECK(P.contains(*s));
    CHECK(s->norm() <= P.bounding_radius);
  }
}

TEST_CASE("non-regular maps have no bounded preimage oracle") {
  const auto F = to_complex_map(binary_quadratics<Rational>(1, 0, 0, 0, 1, 0));
  CHECK_THROWS_AS(preimage_oracle(F, polydisc_oracle({1.0, 1.0})), NonRegularMap);
}

TEST_CASE("diam sequence bookkeeping") {
  const auto E = polydisc_oracle({0.5});
  const auto s = diam_sequence(E, 4, FeketeBudget{512, 400, 2, 1}, 12);
  REQUIRE(s.rows.size() == 4);
  for (const auto& row : s.rows) {
    CHECK(row.M == count_monomials(1, row.n));
    CHECK(row.D == vandermonde_degree(1, row.n));
    // disc of radius r: d_n = r (n+1)^{1/n}
    CHECK(row.dn <= 0.5 * std::pow(row.n + 1.0, 1.0 / row.n) + 1e-9);
    CHECK(row.dn >= 0.5 * std::pow(row.n + 1.0, 1.0 / row.n) - 1e-3);
  }
  const auto csv = to_csv(s);
  CHECK(csv.rfind("n,M,D,log_abs_det,d_n\n", 0) == 0);
  const auto again = diam_sequence(E, 4, FeketeBudget{512, 400, 2, 1}, 12);
  CHECK(to_csv(again) == csv);
}

TEST_CASE("polydisc scaling of the diameter") {
  // d_n(r P) = r d_n(P), checked through the configuration map.
  const auto unit = polydisc_oracle({1.0, 1.0});
  const auto c = dn_estimate(unit, 2, FeketeBudget{256, 100, 1, 1}, 4);
  FeketeConfiguration scaled = c;
  scaled.points *= 0.5;
  scaled.log_abs_det = vandermonde_logabsdet(scaled.points, 2, 2);
  CHECK(scaled.dn() == doctest::Approx(0.5 * c.dn()).epsilon(1e-12));
}

TEST_CASE("greedy selection examples") {
  const auto disc = polydisc_oracle({1.0});
  const auto c = greedy_leja(disc, 1, 256, 3);
  CHECK(std::abs(c.points(0, 0) - c.points(1, 0)) >= 1.9);

  const auto zero = greedy_leja(polydisc_oracle({1.0, 1.0}), 0, 16, 3);
  CHECK(zero.points.rows() == 1);
  CHECK(zero.log_abs_det == 0.0);

  Point origin = Point::Zero(1);
  CHECK_THROWS_AS(greedy_leja(points_oracle({origin}), 1, 4, 1), DegenerateOracle);
}

TEST_CASE("exchange reaches the disc optima within 1%") {
  const auto disc = polydisc_oracle({1.0});
  const FeketeBudget budget{256, 200, 2, 1};
  CHECK(std::abs(dn_estimate(disc, 1, budget, 5).dn() / 2.0 - 1.0) <= 0.01);
  CHECK(std::abs(dn_estimate(disc, 2, budget, 5).dn() / std::sqrt(3.0) - 1.0) <= 0.01);
}

TEST_CASE("unit disc sequence within 2% of the roots-of-unity values") {
  const auto s = diam_sequence(polydisc_oracle({1.0}), 8, FeketeBudget{1024, 200, 2, 1}, 21);
  for (const auto& row : s.rows) CHECK(std::abs(row.dn / std::pow(row.n + 1.0, 1.0 / row.n) - 1.0) <= 0.02);
}

TEST_CASE("greedy-only sequences are finite") {
  const auto s = diam_sequence(ball_oracle(2, 1.0), 4, FeketeBudget{256, 0, 1, 1}, 2);
  for (const auto& row : s.rows) CHECK(std::isfinite(row.log_abs_det));
}

TEST_CASE("more rounds or restarts never lower the estimate") {
  const auto E = ball_oracle(2, 1.0);
  const auto start = greedy_leja(E, 3, 256, 4);
  double prev = start.log_abs_det;
  for (int rounds : {10, 40, 160}) {
    const auto c = exchange_optimize(start, E, rounds, 2, 9, 1);
    CHECK(c.log_abs_det >= prev);
    prev = c.log_abs_det;
  }
  const auto one = exchange_optimize(start, E, 80, 1, 9, 1);
  const auto three = exchange_optimize(start, E, 80, 3, 9, 1);
  CHECK(three.log_abs_det >= one.log_abs_det);
}

TEST_CASE("preimage oracle examples") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  const auto E = polydisc_oracle({1.0, 1.0});
  const auto id = preimage_oracle(pure_power_map<Complex>(2, 1), E);
  const auto half = preimage_oracle(diagonal_map<Complex>({Complex(2), Complex(2)}, 1), E);
  const auto sq = preimage_oracle(pure_power_map<Complex>(2, 2), E);
  const auto half_disc = polydisc_oracle({0.5, 0.5});
  for (int k = 0; k < 1000; ++k) {
    Point z(2);
    z << Complex(g(rng), g(rng)) * 0.7, Complex(g(rng), g(rng)) * 0.7;
    CHECK(id.contains(z) == E.contains(z));
    CHECK(half.contains(z) == half_disc.contains(z));
    CHECK(sq.contains(z) == E.contains(z));
  }
}

TEST_CASE("pullback check under the identity") {
  const auto E = polydisc_oracle({1.0});
  const auto rep = pullback_check(pure_power_map<Complex>(1, 1), 1.0, E, 3, FeketeBudget{128, 40, 1, 1}, 5);
  CHECK(rep.lhs == rep.dn_E);
  CHECK(rep.rhs == rep.dn_E);
  CHECK(rep.log_gap == 0.0);
}

TEST_CASE("growth radius bounds the preimage") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SparsePolynomial<Complex>> comps;
    for (int i = 0; i < 2; ++i) {
      SparsePolynomial<Complex> p(2);
      for (const auto& m : monomials_up_to_degree(2, 2)) p.add_term(m, Complex(g(rng), g(rng)) * (m.degree() == 2 ? 1.0 : 3.0));
      comps.push_back(p);
    }
    const PolynomialMap<Complex> F(comps);
    const double m = min_leading_norm_on_sphere(leading_part(F), 4000, 1);
    const double R = growth_radius(m, lower_order_profile(F), 2, 1.5);
    for (int k = 0; k < 2000; ++k) {
      Point z(2);
      z << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
      z *= R * (1.0 + 1e-6 + std::abs(g(rng))) / z.norm();
      const auto w = F(std::span<const Complex>(z.data(), 2));
      CHECK(std::sqrt(std::norm(w[0]) + std::norm(w[1])) > 1.5);
    }
  }
}
