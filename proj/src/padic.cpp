#include "caplab/padic.hpp"

#include <cmath>
#include <random>

#include "caplab/errors.hpp"
#include "caplab/resultant.hpp"

namespace caplab {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

namespace {

void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
}

void require_same_prime(const UltrametricValue& a, const UltrametricValue& b) {
  if (a.prime() != b.prime()) throw std::invalid_argument("ultrametric values over different primes");
}

}  // namespace

long valuation(const Integer& x, std::uint64_t p) {
  require_prime(p);
  if (x == 0) throw std::domain_error("valuation of zero");
  Integer v = abs(x);
  const Integer pp(p);
  long k = 0;
  while (v % pp == 0) {
    v /= pp;
    ++k;
  }
  return k;
}

long valuation(const Rational& x, std::uint64_t p) {
  return valuation(Integer(numerator(x)), p) - valuation(Integer(denominator(x)), p);
}

UltrametricValue::UltrametricValue(std::uint64_t prime, Rational exponent) : p_(prime), e_(std::move(exponent)) {
  require_prime(prime);
}

UltrametricValue UltrametricValue::zero(std::uint64_t prime) {
  UltrametricValue v(prime, Rational(0));
  v.zero_ = true;
  return v;
}

double UltrametricValue::to_double() const {
  if (zero_) return 0.0;
  return std::pow(static_cast<double>(p_), e_.convert_to<double>());
}

std::string UltrametricValue::str() const {
  if (zero_) return "0";
  return std::to_string(p_) + "^(" + e_.str() + ")";
}

UltrametricValue UltrametricValue::pow(const Rational& k) const {
  if (zero_) {
    if (k <= 0) throw std::domain_error("nonpositive power of zero");
    return *this;
  }
  return {p_, e_ * k};
}

UltrametricValue operator*(const UltrametricValue& a, const UltrametricValue& b) {
  require_same_prime(a, b);
  if (a.zero_ || b.zero_) return UltrametricValue::zero(a.p_);
  return {a.p_, a.e_ + b.e_};
}

UltrametricValue operator/(const UltrametricValue& a, const UltrametricValue& b) {
  require_same_prime(a, b);
  if (b.zero_) throw std::domain_error("division by the absolute value of zero");
  if (a.zero_) return a;
  return {a.p_, a.e_ - b.e_};
}

bool operator==(const UltrametricValue& a, const UltrametricValue& b) {
  if (a.p_ != b.p_ || a.zero_ != b.zero_) return false;
  return a.zero_ || a.e_ == b.e_;
}

bool operator<(const UltrametricValue& a, const UltrametricValue& b) {
  require_same_prime(a, b);
  if (b.zero_) return false;
  if (a.zero_) return true;
  return a.e_ < b.e_;
}

UltrametricValue padic_abs(const Rational& x, std::uint64_t p) {
  require_prime(p);
  if (x == 0) return UltrametricValue::zero(p);
  return {p, Rational(-valuation(x, p))};
}

UltrametricValue polydisc_diam_p(const UltrametricPolydisc& D) {
  if (D.radii_log_p.empty()) throw std::invalid_argument("polydisc_diam_p: empty polydisc");
  Rational sum(0);
  for (const auto& r : D.radii_log_p) sum += r;
  return {D.prime, sum / Rational(D.dimension())};
}

std::vector<Rational> diagonal_coefficients(const PolynomialMap<Rational>& F) {
  const int N = F.dimension();
  std::vector<Rational> coeffs;
  for (int i = 0; i < N; ++i) {
    const auto& terms = F[i].terms();
    const Monomial expected = Monomial::variable(N, i, F.degree());
    if (terms.size() != 1 || terms.begin()->first != expected)
      throw std::invalid_argument("map is not of the diagonal form (c_1 z_1^d, ..., c_N z_N^d)");
    coeffs.push_back(terms.begin()->second);
  }
  return coeffs;
}

UltrametricPolydisc diagonal_preimage(const PolynomialMap<Rational>& F, const UltrametricPolydisc& D) {
  if (F.dimension() != D.dimension()) throw std::invalid_argument("diagonal_preimage: dimension mismatch");
  const auto coeffs = diagonal_coefficients(F);
  UltrametricPolydisc out{D.prime, {}};
  for (int i = 0; i < F.dimension(); ++i) {
    const Rational& c = coeffs[static_cast<std::size_t>(i)];
    if (c == 0) throw std::invalid_argument("diagonal_preimage: zero coefficient");
    // |c z^d| <= r  <=>  |z| <= (r / |c|)^{1/d}
    const UltrametricValue r = D.radius(i) / padic_abs(c, D.prime);
    out.radii_log_p.push_back(r.exponent() / Rational(F.degree()));
  }
  return out;
}

PadicPullbackReport pullback_check_p(const PolynomialMap<Rational>& F, const UltrametricPolydisc& D) {
  const int N = F.dimension();
  const int d = F.degree();
  const UltrametricValue lhs = polydisc_diam_p(diagonal_preimage(F, D));

  const UltrametricValue res_abs = padic_abs_resultant(leading_part(F), D.prime);
  const Integer d_pow_N = pow(Integer(d), static_cast<unsigned>(N));
  const Rational res_exponent = Rational(-1) / (Rational(N) * Rational(d_pow_N));
  const UltrametricValue rhs = res_abs.pow(res_exponent) * polydisc_diam_p(D).pow(Rational(1) / Rational(d));
  return {lhs, rhs, res_abs, lhs == rhs};
}

namespace {

bool p_integral(const PolynomialMap<Rational>& F, std::uint64_t p) {
  for (const auto& comp : F.components())
    for (const auto& [m, c] : comp.terms())
      if (UltrametricValue::one(p) < padic_abs(c, p)) return false;
  return true;
}

}  // namespace

UnimodularReport unimodular_invariance_check(const PolynomialMap<Rational>& F, std::uint64_t p, int trials,
                                             std::uint64_t seed) {
  require_prime(p);
  if (!p_integral(F, p)) throw PreconditionFailure("coefficients are not p-integral");
  const auto res_abs = padic_abs_resultant(leading_part(F), p);
  if (res_abs != UltrametricValue::one(p))
    throw PreconditionFailure("|Res(F_h)|_p = " + res_abs.str() + " is not 1");

  const int N = F.dimension();
  UnimodularReport report;
  const auto unit = UltrametricPolydisc::unit(p, N);

  bool diagonal = true;
  try {
    diagonal_coefficients(F);
  } catch (const std::invalid_argument&) {
    diagonal = false;
  }
  if (diagonal) {
    const auto pre = diagonal_preimage(F, unit);
    report.formula_certified = true;
    report.holds = pre.radii_log_p == unit.radii_log_p;
    return report;
  }

  // Inclusion F(D) in D on sampled p-integral rational points; the reverse
  // inclusion rests on the resultant hypothesis and is not sampled.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> numerators(-1000, 1000);
  std::uniform_int_distribution<long> denominators(1, 1000);
  report.holds = true;
  for (int t = 0; t < trials; ++t) {
    std::vector<Rational> z;
    for (int i = 0; i < N; ++i) {
      long den = denominators(rng);
      while (den % static_cast<long>(p) == 0) den = denominators(rng);
      z.emplace_back(Rational(numerators(rng)) / Rational(den));
    }
    for (const auto& w : F(z)) {
      if (UltrametricValue::one(p) < padic_abs(w, p)) report.holds = false;
    }
    ++report.samples_checked;
  }
  return report;
}

}  // namespace caplab
