#pragma once

// Multiresultant of N homogeneous forms of degree d in N variables.
//
// Construction: Macaulay's quotient at the critical degree D* = N(d-1)+1.
// Rows and columns are both indexed by the degree-D* monomials.  A monomial
// m is assigned to the first variable x_i (in a priority order) with
// x_i^d | m, and its row holds the coefficients of (m / x_i^d) * F_i.  The
// denominator is the minor on the monomials divisible by x_j^d for at least
// two j.  For the pure-power system the numerator is the identity, which
// fixes the normalization Res(z_1^d, ..., z_N^d) = 1.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "caplab/determinant.hpp"
#include "caplab/errors.hpp"
#include "caplab/padic.hpp"
#include "caplab/polycore.hpp"

namespace caplab {

/// Row assignment of the Macaulay matrix, independent of the coefficients.
struct MacaulayLayout {
  int N = 0;
  int degree = 0;
  int critical_degree = 0;
  std::vector<int> priority;           // variable order used for row assignment
  std::vector<Monomial> monomials;     // row/column index
  std::vector<int> owner;              // row r holds (shift[r]) * F_{owner[r]}
  std::vector<Monomial> shift;
  std::vector<int> denominator_index;  // positions of non-reduced monomials
};

/// Layout for N forms of degree d with the given variable priority (a
/// permutation of 0..N-1; empty means identity).
MacaulayLayout macaulay_layout(int N, int d, std::vector<int> priority = {});

template <typename Scalar>
struct MacaulayInstance {
  MacaulayLayout layout;
  DenseMatrix<Scalar> numerator;
  DenseMatrix<Scalar> denominator;
};

template <typename Scalar>
MacaulayInstance<Scalar> macaulay_instance(const PolynomialMap<Scalar>& F_h, std::vector<int> priority = {}) {
  if (!F_h.is_homogeneous()) throw std::invalid_argument("macaulay_instance: map is not homogeneous");
  MacaulayInstance<Scalar> inst;
  inst.layout = macaulay_layout(F_h.dimension(), F_h.degree(), std::move(priority));
  const auto& L = inst.layout;

  const auto size = static_cast<Eigen::Index>(L.monomials.size());
  std::map<Monomial, Eigen::Index, GrlexLess> position;
  for (Eigen::Index k = 0; k < size; ++k) position.emplace(L.monomials[static_cast<std::size_t>(k)], k);

  inst.numerator = DenseMatrix<Scalar>::Constant(size, size, Scalar(0));
  for (Eigen::Index r = 0; r < size; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    for (const auto& [term, c] : F_h[L.owner[ur]].terms()) inst.numerator(r, position.at(term * L.shift[ur])) = c;
  }

  const auto k = static_cast<Eigen::Index>(L.denominator_index.size());
  inst.denominator = DenseMatrix<Scalar>(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      inst.denominator(i, j) = inst.numerator(L.denominator_index[static_cast<std::size_t>(i)],
                                              L.denominator_index[static_cast<std::size_t>(j)]);
  return inst;
}

/// All variable priorities, identity first.
std::vector<std::vector<int>> variable_priorities(int N);

namespace detail {

template <typename Scalar>
std::optional<Scalar> macaulay_quotient(const PolynomialMap<Scalar>& F_h) {
  for (const auto& priority : variable_priorities(F_h.dimension())) {
    auto inst = macaulay_instance(F_h, priority);
    Scalar den = bareiss_determinant<Scalar>(inst.denominator);
    if (is_zero(den)) continue;
    return bareiss_determinant<Scalar>(inst.numerator) / den;
  }
  return std::nullopt;
}

// Exact Lagrange interpolation of a polynomial at 0 from (t_k, v_k).
template <typename Scalar>
Scalar interpolate_at_zero(const std::vector<Scalar>& ts, const std::vector<Scalar>& vs) {
  Scalar acc(0);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    Scalar w = vs[i];
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (j == i) continue;
      w *= ts[j];
      w /= ts[j] - ts[i];
    }
    acc += w;
  }
  return acc;
}

}  // namespace detail

/// Exact multiresultant; zero iff F_h has a nonzero common root.
/// N = 1 follows the convention Res(a z^d) = a.
template <typename Scalar>
Scalar resultant_exact(const PolynomialMap<Scalar>& F_h) {
  static_assert(is_exact_v<Scalar>, "resultant_exact needs an exact scalar domain");
  if (!F_h.is_homogeneous()) throw std::invalid_argument("resultant_exact: map is not homogeneous");
  if (auto r = detail::macaulay_quotient(F_h)) return *r;

  // Every partition has a vanishing denominator at this F_h.  Res(F_h + t P)
  // with P the pure-power system is a polynomial in t of degree <= N d^{N-1};
  // its denominators do not vanish identically in t (the leading coefficient
  // is that of P, which is 1), so interpolate through good nodes and read off t = 0.
  const int N = F_h.dimension();
  const int d = F_h.degree();
  const long needed = static_cast<long>(N) * static_cast<long>(std::pow(d, N - 1)) + 1;
  const auto pure = pure_power_map<Scalar>(N, d);
  std::vector<Scalar> ts, vs;
  for (long t = 1; static_cast<long>(ts.size()) < needed; ++t) {
    if (t > 64 * needed) throw std::runtime_error("resultant_exact: perturbation fallback found no usable nodes");
    std::vector<SparsePolynomial<Scalar>> comps;
    for (int i = 0; i < N; ++i) comps.push_back(F_h[i] + pure[i] * Scalar(static_cast<int>(t)));
    if (auto r = detail::macaulay_quotient(PolynomialMap<Scalar>(std::move(comps)))) {
      ts.push_back(Scalar(static_cast<int>(t)));
      vs.push_back(*r);
    }
  }
  return detail::interpolate_at_zero(ts, vs);
}

struct NumericResultant {
  Complex value;
  /// Worse of the 2-norm condition numbers of the numerator and denominator matrices.
  double condition = 1.0;
  bool ill_conditioned = false;
  std::vector<int> priority;
};

/// Floating-point Macaulay quotient with pivoted LU; tries each variable
/// priority and keeps the best-conditioned denominator.
NumericResultant resultant_numeric(const PolynomialMap<Complex>& F_h);

/// |Res(F_h)|_p; throws NonRegularMap when Res = 0.
UltrametricValue padic_abs_resultant(const PolynomialMap<Rational>& F_h, std::uint64_t p);

/// Resultant of a rational map after checking regularity; throws NonRegularMap.
Rational regular_resultant(const PolynomialMap<Rational>& F_h);

// ---------------------------------------------------------------------------
// Symbolic resultant of three generic ternary quadratics.

struct SymbolicResultantOptions {
  /// Abort when an intermediate polynomial exceeds this many terms.
  std::size_t max_terms = 20'000'000;
};

struct SymbolicResultant {
  /// Polynomial in the 18 coefficients a_{i,m}: i = component, m runs over
  /// the six degree-2 monomials in graded-lex order (x^2, xy, xz, y^2, yz, z^2).
  SparsePolynomial<Integer> polynomial;
  std::vector<std::string> variable_names;
  std::size_t term_count = 0;
  int total_degree = 0;
  bool homogeneous = false;
};

/// Thrown when SymbolicResultantOptions::max_terms is exceeded.
class SymbolicBudgetExceeded : public std::runtime_error {
 public:
  SymbolicBudgetExceeded(const std::string& what, std::size_t largest)
      : std::runtime_error(what), largest_intermediate(largest) {}
  std::size_t largest_intermediate;
};

/// Fully expanded Res of (F_1, F_2, F_3), each a generic quadratic form in
/// three variables, over the integers: symbolic Macaulay numerator divided
/// exactly by the symbolic denominator minor.
SymbolicResultant resultant_generic_quadratic_ternary(const SymbolicResultantOptions& options = {});

/// The same polynomial by an independent route: Sylvester's 6x6 determinant of
/// the coefficients of F_1, F_2, F_3 and the partials of their Jacobian
/// determinant, normalized on the pure-power system.
SparsePolynomial<Integer> sylvester_quadric_resultant(const SymbolicResultantOptions& options = {});

/// Determinant of a square matrix of polynomials by memoized Laplace expansion.
SparsePolynomial<Integer> symbolic_determinant(const std::vector<std::vector<SparsePolynomial<Integer>>>& rows,
                                               std::size_t max_terms = SIZE_MAX);

/// One line per term, "coeff [e1 e2 ...]", in graded-lex order.
std::string serialize_terms(const SparsePolynomial<Integer>& p);

/// Substitutes integer values for all variables of a symbolic polynomial.
Integer specialize(const SparsePolynomial<Integer>& p, const std::vector<Integer>& values);

}  // namespace caplab
