#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "caplab/dynamics.hpp"
#include "caplab/resultant.hpp"
#include "support.hpp"

using namespace caplab;
using namespace testing;

namespace {

Point random_point(std::mt19937_64& rng, int N, double scale) {
  std::normal_distribution<double> g;
  Point z(N);
  for (int i = 0; i < N; ++i) z(i) = Complex(g(rng), g(rng)) * scale;
  return z;
}

Point apply(const CompiledMap& F, const Point& z) {
  Point out;
  F.apply(z, out);
  return out;
}

PolynomialMap<Complex> cubic_map() {
  // (z1^3 + z2 - 1, z2^3 + 2 z1 z2)
  return make_map<Complex>(2, {{{{3, 0}, 1.0}, {{0, 1}, 1.0}, {{0, 0}, -1.0}},
                               {{{0, 3}, 1.0}, {{1, 1}, 2.0}}});
}

}  // namespace

TEST_CASE("escape rate of the pure-power map") {
  // G(z) = log+ max |z_i| for (z1^2, z2^2)
  const auto F = pure_power_map<Complex>(2, 2);
  const auto params = escape_parameters(F);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const Point z = random_point(rng, 2, 2.0);
    const double expect = std::max(0.0, std::log(z.cwiseAbs().maxCoeff()));
    const auto e = escape_rate(F, z, params);
    if (expect > 1e-3) {
      CHECK(e.escaped);
      CHECK(e.value == doctest::Approx(expect).epsilon(1e-10));
    } else if (expect == 0.0 && z.cwiseAbs().maxCoeff() < 0.99) {
      CHECK_FALSE(e.escaped);
    }
  }
}

TEST_CASE("escape-rate functional equation") {
  for (const auto& F : {cubic_map(), to_complex_map(binary_quadratics<Rational>(1, 0, 1, 0, 1, 0))}) {
    const CompiledMap map(F);
    const auto params = escape_parameters(F);
    std::mt19937_64 rng(2);
    int escaped = 0;
    for (int k = 0; k < 200; ++k) {
      const Point z = random_point(rng, 2, 2.0);
      const auto g0 = escape_rate(map, z, params);
      if (!g0.escaped) continue;
      const auto g1 = escape_rate(map, apply(map, z), params);
      CHECK(std::abs(g1.value - F.degree() * g0.value) <= 1e-6);
      ++escaped;
    }
    CHECK(escaped > 50);
  }
}

TEST_CASE("homogeneity of the escape rate") {
  const auto F = leading_part(cubic_map());
  const CompiledMap map(F);
  const auto params = escape_parameters(F);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(1.0, 10.0), ang(0.0, 6.283185307179586);
  for (int k = 0; k < 100; ++k) {
    const Point z = random_point(rng, 2, 3.0);
    const auto g0 = escape_rate(map, z, params);
    if (!g0.escaped) continue;
    const Complex s = std::polar(t(rng), ang(rng));
    const auto g1 = escape_rate(map, Point(s * z), params);
    CHECK(std::abs(g1.value - std::log(std::abs(s)) - g0.value) <= 1e-6);
  }
}

TEST_CASE("homogeneous green function is bounded") {
  for (const auto& F : {leading_part(cubic_map()), to_complex_map(binary_quadratics<Rational>(1, 0, 1, 0, 1, 0))}) {
    const CompiledMap map(F);
    const double m = min_leading_norm_on_sphere(F, 4000, 1);
    const double M = max_leading_norm_on_sphere(F, 4000, 1);
    const double B = 1.0 + std::max(std::abs(std::log(m)), std::abs(std::log(M)));
    std::mt19937_64 rng(4);
    for (int k = 0; k < 500; ++k) {
      const Point u = random_point(rng, 2, 1.0);
      const double g = homogeneous_green(map, u / u.norm());
      CHECK(std::abs(g) <= B);
    }
  }
}

TEST_CASE("green function of the pure-power map on the sphere") {
  const CompiledMap map(pure_power_map<Complex>(2, 2));
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    Point u = random_point(rng, 2, 1.0);
    u /= u.norm();
    CHECK(homogeneous_green(map, u) == doctest::Approx(std::log(u.cwiseAbs().maxCoeff())).epsilon(1e-12));
  }
}

TEST_CASE("filled julia membership is forward invariant") {
  // the origin is a superattracting fixed point
  const auto F = make_map<Complex>(2, {{{{3, 0}, 1.0}, {{0, 1}, 0.5}}, {{{0, 3}, 1.0}, {{1, 1}, 1.0}}});
  const CompiledMap map(F);
  const auto params = escape_parameters(F, 40);
  std::mt19937_64 rng(6);
  int members = 0;
  for (int k = 0; k < 2000; ++k) {
    const Point z = random_point(rng, 2, 0.8);
    if (!julia_member(map, z, params.escape_radius, 40)) continue;
    ++members;
    CHECK(julia_member(map, apply(map, z), params.escape_radius, 39));
  }
  CHECK(members > 0);
  const auto K = filled_julia_oracle(F, params);
  Rng r(7);
  for (int k = 0; k < 10; ++k) {
    const auto s = K.sample(r);
    REQUIRE(s.has_value());
    CHECK(K.contains(*s));
  }
}

TEST_CASE("julia diameter predictions") {
  CHECK(julia_diam_prediction(pure_power_map<Rational>(2, 2)) == doctest::Approx(1.0));
  CHECK(julia_diam_prediction(diagonal_map<Rational>({Rational(2)}, 2)) == doctest::Approx(0.5));
  CHECK(julia_diam_prediction(diagonal_map<Rational>({Rational(2), Rational(1)}, 2)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  const auto F = make_map<Rational>(2, {{{{2, 0}, 1}, {{0, 2}, 1}, {{1, 0}, 1}, {{0, 0}, 1}},
                                        {{{1, 1}, 1}, {{0, 0}, -3}}});
  CHECK(julia_diam_prediction(F) == julia_diam_prediction(leading_part(F)));
  CHECK(julia_diam_prediction(to_complex_map(F)) == julia_diam_prediction(leading_part(to_complex_map(F))));
}

TEST_CASE("inverse iteration for w -> w^2 lands on the unit circle") {
  const auto F = pure_power_map<Complex>(2, 2);
  auto circle_stats = [&](std::uint64_t seed) {
    const auto pts = brolin_sample(F, 30, 10000, seed);
    REQUIRE(pts.size() == 10000);
    double mean_log = 0, upper_half = 0;
    for (const auto& q : pts) {
      const Complex w = q(0) / q(1);
      mean_log += std::log(std::abs(w));
      upper_half += w.imag() > 0;
    }
    return std::pair{mean_log / 10000, upper_half / 10000};
  };
  const auto [m1, h1] = circle_stats(1);
  const auto [m2, h2] = circle_stats(2);
  CHECK(std::abs(m1) <= 0.02);
  CHECK(std::abs(m2) <= 0.02);
  CHECK(std::abs(h1 - h2) <= 0.05);
  CHECK(brolin_sample(F, 0, 5, 3).size() == 1);
}

TEST_CASE("preimages on the projective line") {
  const auto F = to_complex_map(binary_quadratics<Rational>(1, 0, 1, 0, 1, 0));
  std::mt19937_64 rng(8);
  for (int k = 0; k < 50; ++k) {
    Point q = random_point(rng, 2, 1.0);
    q /= q.norm();
    const auto pre = projective_preimages(F, q);
    CHECK(pre.size() == 2);
    for (const auto& z : pre) {
      const auto w = F(std::span<const Complex>(z.data(), 2));
      // [w] = [q]: the 2x2 minor vanishes
      CHECK(std::abs(w[0] * q(1) - w[1] * q(0)) <= 1e-9 * std::max(1.0, std::abs(w[0]) + std::abs(w[1])));
    }
  }
}

TEST_CASE("Bassanelli-Berteloot identity for diagonal maps") {
  const auto P = pure_power_map<Complex>(2, 2);
  const auto r1 = bb_check(P, 1.0, 20000, 12, 1, 1);
  CHECK(r1.rhs == doctest::Approx(-0.5));
  CHECK(r1.gap <= 0.05);

  const auto Q = diagonal_map<Complex>({Complex(2), Complex(2)}, 2);
  const auto r2 = bb_check(Q, 16.0, 20000, 12, 1, 1);
  CHECK(r2.rhs == doctest::Approx(2 * std::log(2.0) - 0.5));
  CHECK(r2.gap <= 0.05);

  const auto small = bb_check(Q, 16.0, 1000, 12, 2, 1);
  const auto large = bb_check(Q, 16.0, 100000, 12, 2, 1);
  CHECK(large.gap <= small.gap + 0.02);
}

TEST_CASE("bb reports do not depend on the thread count") {
  const auto F = to_complex_map(binary_quadratics<Rational>(1, 0, 1, 0, 1, 0));
  const auto a = bb_check(F, 1.0, 3000, 8, 9, 1);
  const auto b = bb_check(F, 1.0, 3000, 8, 9, 3);
  CHECK(a.lhs == b.lhs);
  CHECK(a.gap <= 0.1);
}

TEST_CASE("escape rate examples") {
  const auto sq = make_map<Complex>(1, {{{{2}, 1.0}}});
  Point two(1);
  two << 2.0;
  CHECK(escape_rate(sq, two, escape_parameters(sq)).value == doctest::Approx(std::log(2.0)).epsilon(1e-9));

  const auto dbl = make_map<Complex>(1, {{{{2}, 2.0}}});
  Point one(1);
  one << 1.0;
  CHECK(std::abs(escape_rate(dbl, one, escape_parameters(dbl)).value - std::log(2.0)) <= 1e-6);

  const auto P = pure_power_map<Complex>(2, 2);
  Point z(2);
  z << 3.0, 1.0;
  CHECK(std::abs(escape_rate(P, z, escape_parameters(P)).value - std::log(3.0)) <= 1e-9);
}

TEST_CASE("filled julia set of z^2 and of the pure-power map") {
  const auto sq = make_map<Complex>(1, {{{{2}, 1.0}}});
  const auto K = filled_julia_oracle(sq, escape_parameters(sq));
  Point a(1), b(1);
  a << 0.5;
  b << 1.5;
  CHECK(K.contains(a));
  CHECK_FALSE(K.contains(b));

  const auto P = pure_power_map<Complex>(2, 2);
  const auto K2 = filled_julia_oracle(P, escape_parameters(P, 64));
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> r(0.0, 1.5), ang(0.0, 2 * std::numbers::pi);
  int compared = 0;
  for (int k = 0; k < 10000; ++k) {
    Point z(2);
    z << std::polar(r(rng), ang(rng)), std::polar(r(rng), ang(rng));
    const double m = z.cwiseAbs().maxCoeff();
    if (std::abs(m - 1.0) < 1e-2) continue;
    ++compared;
    CHECK(K2.contains(z) == (m <= 1.0));
  }
  CHECK(compared > 9000);
}
