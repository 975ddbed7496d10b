#pragma once

// Exact nonarchimedean arithmetic.  Absolute values on C_p take values in
// p^Q, so an UltrametricValue is stored as a prime and a rational exponent.

#include <cstdint>
#include <string>
#include <vector>

#include "caplab/polycore.hpp"
#include "caplab/scalar.hpp"

namespace caplab {

bool is_prime(std::uint64_t p);

/// Exponent of p in a nonzero integer / rational.
long valuation(const Integer& x, std::uint64_t p);
long valuation(const Rational& x, std::uint64_t p);

/// p^exponent, or the absolute value of zero.
class UltrametricValue {
 public:
  UltrametricValue(std::uint64_t prime, Rational exponent);
  static UltrametricValue zero(std::uint64_t prime);
  static UltrametricValue one(std::uint64_t prime) { return {prime, Rational(0)}; }

  std::uint64_t prime() const { return p_; }
  /// log_p of the value; meaningless for zero.
  const Rational& exponent() const { return e_; }
  bool is_zero() const { return zero_; }

  double to_double() const;
  /// "p^(e)" with e as an exact rational string, or "0".
  std::string str() const;

  UltrametricValue pow(const Rational& k) const;

  friend UltrametricValue operator*(const UltrametricValue& a, const UltrametricValue& b);
  friend UltrametricValue operator/(const UltrametricValue& a, const UltrametricValue& b);
  friend bool operator==(const UltrametricValue& a, const UltrametricValue& b);
  friend bool operator!=(const UltrametricValue& a, const UltrametricValue& b) { return !(a == b); }
  friend bool operator<(const UltrametricValue& a, const UltrametricValue& b);
  friend bool operator<=(const UltrametricValue& a, const UltrametricValue& b) { return !(b < a); }
  friend UltrametricValue max(const UltrametricValue& a, const UltrametricValue& b) { return a < b ? b : a; }

 private:
  std::uint64_t p_;
  Rational e_;
  bool zero_ = false;
};

/// |x|_p normalized so |p|_p = 1/p.
UltrametricValue padic_abs(const Rational& x, std::uint64_t p);

/// Product of discs {|z_j|_p <= r_j}.
struct UltrametricPolydisc {
  std::uint64_t prime;
  std::vector<Rational> radii_log_p;

  static UltrametricPolydisc unit(std::uint64_t p, int N) {
    return {p, std::vector<Rational>(static_cast<std::size_t>(N), Rational(0))};
  }
  int dimension() const { return static_cast<int>(radii_log_p.size()); }
  UltrametricValue radius(int j) const { return {prime, radii_log_p.at(static_cast<std::size_t>(j))}; }
};

/// Transfinite diameter of a polydisc: the geometric mean of its radii.
///
/// Over all monomials of degree <= n, z_j appears with total degree D(n)/N,
/// and the sup of |Vandermonde|_p is the product of the monomial sup-norms
/// (attained by points with distinct residues after rescaling, the residue
/// field being infinite).  Hence d_n(D) = prod r_j^{1/N} for every n.
UltrametricValue polydisc_diam_p(const UltrametricPolydisc& D);

/// Coefficients c_i of a map (c_1 z_1^d, ..., c_N z_N^d); throws if F is not of that form.
std::vector<Rational> diagonal_coefficients(const PolynomialMap<Rational>& F);

/// F^{-1}D for diagonal F: radii (r_i / |c_i|_p)^{1/d}.
UltrametricPolydisc diagonal_preimage(const PolynomialMap<Rational>& F, const UltrametricPolydisc& D);

struct PadicPullbackReport {
  UltrametricValue lhs;
  UltrametricValue rhs;
  UltrametricValue res_abs;
  bool equal;
};

/// Both sides of d(F^{-1}D)_p = |Res(F_h)|_p^{-1/(N d^N)} d(D)_p^{1/d}, exactly.
PadicPullbackReport pullback_check_p(const PolynomialMap<Rational>& F, const UltrametricPolydisc& D);

struct UnimodularReport {
  bool holds = false;
  /// True when set equality was established exactly (diagonal family);
  /// false when only the sampled inclusion F(D) in D was checked.
  bool formula_certified = false;
  int samples_checked = 0;
};

/// F^{-1}D_p(0,1) = D_p(0,1) for p-integral F with |Res(F_h)|_p = 1.
/// Throws PreconditionFailure when the hypotheses do not hold.
UnimodularReport unimodular_invariance_check(const PolynomialMap<Rational>& F, std::uint64_t p, int trials,
                                             std::uint64_t seed);

}  // namespace caplab
