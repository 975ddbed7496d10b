#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "caplab/polycore.hpp"
#include "caplab/scalar.hpp"

namespace testing {

using namespace caplab;

template <typename S>
using TermList = std::vector<std::pair<std::vector<int>, S>>;

template <typename S>
PolynomialMap<S> make_map(int N, const std::vector<TermList<S>>& comps) {
  std::vector<SparsePolynomial<S>> ps;
  for (const auto& terms : comps) {
    SparsePolynomial<S> p(N);
    for (const auto& [e, c] : terms) p.add_term(Monomial(e), c);
    ps.push_back(std::move(p));
  }
  return PolynomialMap<S>(std::move(ps));
}

/// Binary quadratic forms (a x^2 + b xy + c y^2, p x^2 + q xy + r y^2).
template <typename S>
PolynomialMap<S> binary_quadratics(S a, S b, S c, S p, S q, S r) {
  return make_map<S>(2, {{{{2, 0}, a}, {{1, 1}, b}, {{0, 2}, c}}, {{{2, 0}, p}, {{1, 1}, q}, {{0, 2}, r}}});
}

/// Classical resultant of two binary quadratics, written out term by term.
template <typename S>
S quadratic_resultant_formula(const S& a, const S& b, const S& c, const S& p, const S& q, const S& r) {
  return (a * r - c * p) * (a * r - c * p) - (a * q - b * p) * (b * r - c * q);
}

/// Leibniz expansion; fine for n <= 6.
template <typename S>
S leibniz_det(const std::vector<std::vector<S>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  S total(0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    S prod(1);
    for (int i = 0; i < n; ++i) prod *= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    total += (inversions % 2 ? S(-1) : S(1)) * prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Rational random_rational(std::mt19937_64& rng, int range = 9, int den = 5) {
  std::uniform_int_distribution<int> num(-range, range), d(1, den);
  return Rational(num(rng)) / Rational(d(rng));
}

/// Linear map z -> A z.
template <typename S>
PolynomialMap<S> linear_map(const std::vector<std::vector<S>>& A) {
  const int N = static_cast<int>(A.size());
  std::vector<TermList<S>> comps;
  for (int i = 0; i < N; ++i) {
    TermList<S> t;
    for (int j = 0; j < N; ++j) {
      std::vector<int> e(static_cast<std::size_t>(N), 0);
      e[static_cast<std::size_t>(j)] = 1;
      t.emplace_back(e, A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    comps.push_back(std::move(t));
  }
  return make_map<S>(N, comps);
}

/// F o A for a homogeneous F and a linear change of variables A.
template <typename S>
PolynomialMap<S> compose_linear(const PolynomialMap<S>& F, const std::vector<std::vector<S>>& A) {
  const int N = F.dimension();
  const auto L = linear_map(A);
  std::vector<SparsePolynomial<S>> out;
  for (const auto& comp : F.components()) {
    SparsePolynomial<S> acc(N);
    for (const auto& [m, c] : comp.terms()) {
      SparsePolynomial<S> term = SparsePolynomial<S>::constant(N, c);
      for (int i = 0; i < N; ++i)
        for (int k = 0; k < m[i]; ++k) term = term * L[i];
      acc += term;
    }
    out.push_back(std::move(acc));
  }
  return PolynomialMap<S>(std::move(out));
}

}  // namespace testing
