#include <doctest.h>

#include <cmath>
#include <random>

#include "caplab/errors.hpp"
#include "caplab/resultant.hpp"
#include "support.hpp"

using namespace caplab;
using namespace testing;

TEST_CASE("pure powers have resultant one") {
  for (int N = 1; N <= 3; ++N)
    for (int d = 1; d <= 3; ++d) {
      CAPTURE(N);
      CAPTURE(d);
      CHECK(resultant_exact(pure_power_map<Rational>(N, d)) == 1);
      CHECK(resultant_exact(pure_power_map<Integer>(N, d)) == 1);
    }
}

TEST_CASE("linear resultant is the determinant") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    const int N = 1 + trial % 4;
    std::vector<std::vector<Rational>> A(static_cast<std::size_t>(N), std::vector<Rational>(static_cast<std::size_t>(N)));
    for (auto& row : A)
      for (auto& v : row) v = entry(rng);
    if (N == 1 && A[0][0] == 0) A[0][0] = 1;  // the zero map has no degree
    CHECK(resultant_exact(linear_map(A)) == leibniz_det(A));
  }
  CHECK(resultant_exact(linear_map<Rational>({{1, 2}, {3, 4}})) == -2);
}

TEST_CASE("binary quadratic resultant matches the closed form") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Rational c[6];
    for (auto& v : c) v = random_rational(rng);
    const auto F = binary_quadratics(c[0], c[1], c[2], c[3], c[4], c[5]);
    CHECK(resultant_exact(F) == quadratic_resultant_formula(c[0], c[1], c[2], c[3], c[4], c[5]));
  }
  // (z1^2 + z2^2, z1 z2): Res = 1
  CHECK(resultant_exact(binary_quadratics<Rational>(1, 0, 1, 0, 1, 0)) == 1);
  // (2 z1^2, z2^2): Res = 4
  CHECK(resultant_exact(binary_quadratics<Rational>(2, 0, 0, 0, 0, 1)) == 4);
  // (z1^2, z1 z2) share the root (0, 1)
  CHECK(resultant_exact(binary_quadratics<Rational>(1, 0, 0, 0, 1, 0)) == 0);
}

TEST_CASE("per-component homogeneity") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int N = 2 + trial % 2;
    const int d = 2;
    std::vector<SparsePolynomial<Rational>> comps;
    for (int i = 0; i < N; ++i) {
      SparsePolynomial<Rational> p(N);
      for (const auto& m : monomials_of_degree(N, d)) p.add_term(m, random_rational(rng));
      comps.push_back(p);
    }
    const PolynomialMap<Rational> F(comps);
    const Rational lambda = random_rational(rng) + Rational(13, 3);
    const int i = trial % N;
    auto scaled = comps;
    scaled[static_cast<std::size_t>(i)] *= lambda;
    Rational factor(1);
    for (int k = 0; k < static_cast<int>(std::pow(d, N - 1)); ++k) factor *= lambda;
    CHECK(resultant_exact(PolynomialMap<Rational>(scaled)) == factor * resultant_exact(F));
  }
}

TEST_CASE("linear change of variables scales by det^(d^N)") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < 6; ++trial) {
    const int N = 2 + trial % 2;
    const int d = 2;
    std::vector<SparsePolynomial<Rational>> comps;
    for (int i = 0; i < N; ++i) {
      SparsePolynomial<Rational> p(N);
      for (const auto& m : monomials_of_degree(N, d)) p.add_term(m, Rational(entry(rng)));
      comps.push_back(p);
    }
    const PolynomialMap<Rational> F(comps);
    std::vector<std::vector<Rational>> A(static_cast<std::size_t>(N), std::vector<Rational>(static_cast<std::size_t>(N)));
    for (auto& row : A)
      for (auto& v : row) v = entry(rng);
    Rational factor(1);
    const Rational det = leibniz_det(A);
    for (int k = 0; k < static_cast<int>(std::pow(d, N)); ++k) factor *= det;
    CHECK(resultant_exact(compose_linear(F, A)) == factor * resultant_exact(F));
  }
}

TEST_CASE("diagonal maps") {
  // Res(c_1 z_1^d, ..., c_N z_N^d) = prod c_i^{d^{N-1}}
  const auto F = diagonal_map<Rational>({Rational(2), Rational(3), Rational(1, 5)}, 2);
  CHECK(resultant_exact(F) == Rational(2 * 2 * 3 * 3 * 3 * 3 * 2 * 2) / Rational(5 * 5 * 5 * 5));
  CHECK(resultant_exact(diagonal_map<Rational>({Rational(2), Rational(2)}, 2)) == 16);
}

TEST_CASE("denominator fallbacks agree with the closed form") {
  // Forms with vanishing coefficients on pure powers make the standard
  // Macaulay denominators singular.
  const auto F = binary_quadratics<Rational>(0, 1, 0, 1, 0, 1);
  CHECK(resultant_exact(F) == quadratic_resultant_formula<Rational>(0, 1, 0, 1, 0, 1));
  const auto G = make_map<Rational>(3, {{{{1, 1, 0}, 1}, {{0, 0, 2}, 1}},
                                        {{{0, 1, 1}, 1}, {{2, 0, 0}, 1}},
                                        {{{1, 0, 1}, 1}, {{0, 2, 0}, 1}}});
  const Rational r = resultant_exact(G);
  // Sylvester's formula gives the same value independently.
  const auto sym = sylvester_quadric_resultant();
  std::vector<Integer> values(18, Integer(0));
  // coefficient order per component: x^2, xy, xz, y^2, yz, z^2
  values[1] = 1;   values[5] = 1;
  values[6 + 4] = 1; values[6 + 0] = 1;
  values[12 + 2] = 1; values[12 + 3] = 1;
  CHECK(r == Rational(specialize(sym, values)));
}

TEST_CASE("gaussian rational coefficients") {
  const GaussianRational i(Rational(0), Rational(1));
  const auto F = make_map<GaussianRational>(2, {{{{2, 0}, i}}, {{{0, 2}, GaussianRational(1)}}});
  const auto r = resultant_exact(F);
  CHECK(r.re == -1);
  CHECK(r.im == 0);
}

TEST_CASE("numeric resultant tracks the exact one") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    Rational c[6];
    for (auto& v : c) v = random_rational(rng);
    const auto F = binary_quadratics(c[0], c[1], c[2], c[3], c[4], c[5]);
    const double exact = resultant_exact(F).convert_to<double>();
    const auto num = resultant_numeric(to_complex_map(F));
    if (num.ill_conditioned) continue;
    CHECK(std::abs(num.value - Complex(exact)) <= 1e-8 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("regular_resultant rejects non-regular maps") {
  CHECK_THROWS_AS(regular_resultant(binary_quadratics<Rational>(1, 0, 0, 0, 1, 0)), NonRegularMap);
  CHECK(padic_abs_resultant(binary_quadratics<Rational>(3, 0, 0, 0, 0, 1), 3).exponent() == -2);
}

TEST_CASE("macaulay layout sizes") {
  const auto L = macaulay_layout(3, 2);
  CHECK(L.critical_degree == 4);
  CHECK(L.monomials.size() == 15);
  CHECK(L.denominator_index.size() == 3);
}

TEST_CASE("generic ternary quadratic resultant") {
  const auto R = resultant_generic_quadratic_ternary();
  CHECK(R.term_count == 21894);
  CHECK(R.total_degree == 12);
  std::vector<Integer> pure(18, Integer(0));
  pure[0] = 1;
  pure[6 + 3] = 1;
  pure[12 + 5] = 1;
  CHECK(specialize(R.polynomial, pure) == 1);
  CHECK(R.polynomial == sylvester_quadric_resultant());

  // Random integer specializations against the numeric-free exact engine.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> entry(-4, 4);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Integer> v(18);
    std::vector<SparsePolynomial<Rational>> comps;
    for (int i = 0; i < 3; ++i) {
      SparsePolynomial<Rational> p(3);
      const auto ms = monomials_of_degree(3, 2);
      for (int k = 0; k < 6; ++k) {
        v[static_cast<std::size_t>(6 * i + k)] = entry(rng);
        p.add_term(ms[static_cast<std::size_t>(k)], Rational(v[static_cast<std::size_t>(6 * i + k)]));
      }
      comps.push_back(p);
    }
    CHECK(Rational(specialize(R.polynomial, v)) == resultant_exact(PolynomialMap<Rational>(comps)));
  }
}

TEST_CASE("numeric resultant examples") {
  CHECK(std::abs(resultant_numeric(pure_power_map<Complex>(2, 2)).value - 1.0) <= 1e-10);
  const Complex c(1, 1);
  const auto F = diagonal_map<Complex>({c, Complex(1)}, 2);
  CHECK(std::abs(resultant_numeric(F).value - c * c) <= 1e-9);
}

TEST_CASE("a zero component makes the map non-regular") {
  const auto F = make_map<Rational>(2, {{{{2, 0}, 1}}, {}});
  CHECK(F.degree() == 2);
  CHECK(resultant_exact(F) == 0);
}
