#pragma once

// Sparse multivariate polynomials over a pluggable scalar domain, monomial
// combinatorics and polynomial maps C^N -> C^N of common degree.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "caplab/scalar.hpp"

namespace caplab {

/// Exponent vector of a monomial z_1^{a_1} ... z_N^{a_N}.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<int> exponents) : exps_(std::move(exponents)) {
    for (int e : exps_) {
      if (e < 0) throw std::invalid_argument("Monomial: negative exponent");
      degree_ += e;
    }
  }
  Monomial(std::initializer_list<int> exponents) : Monomial(std::vector<int>(exponents)) {}

  static Monomial one(int dim) { return Monomial(std::vector<int>(static_cast<std::size_t>(dim), 0)); }
  static Monomial variable(int dim, int index, int power = 1) {
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    e.at(static_cast<std::size_t>(index)) = power;
    return Monomial(std::move(e));
  }

  int dimension() const { return static_cast<int>(exps_.size()); }
  int degree() const { return degree_; }
  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exponents() const { return exps_; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    if (a.dimension() != b.dimension()) throw std::invalid_argument("Monomial: dimension mismatch");
    std::vector<int> e(a.exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.exps_[i];
    return Monomial(std::move(e));
  }

  /// True if b divides a.
  bool divisible_by(const Monomial& b) const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] < b.exps_[i]) return false;
    return true;
  }
  Monomial divided_by(const Monomial& b) const {
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= b.exps_[i];
    return Monomial(std::move(e));
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

/// Graded lexicographic order: lower degree first; within a degree, larger
/// leading exponents first (z1 before z2).
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.exponents() > b.exponents();
  }
};

/// M(n): number of monomials of degree <= n in N variables, binomial(N+n, N).
std::uint64_t count_monomials(int N, int n);

/// D(n): total degree of the Vandermonde determinant, N * binomial(N+n, N+1).
std::uint64_t vandermonde_degree(int N, int n);

/// Monomials of degree exactly `degree`, graded-lex order.
std::vector<Monomial> monomials_of_degree(int N, int degree);

/// Monomials of degree <= n in graded-lex order; length M(n).
std::vector<Monomial> monomials_up_to_degree(int N, int n);

namespace detail {

// Neumaier summation for complex values, applied separately to both parts.
class CompensatedSum {
 public:
  void add(const Complex& v) {
    step(sum_re_, c_re_, v.real());
    step(sum_im_, c_im_, v.imag());
  }
  Complex value() const { return {sum_re_ + c_re_, sum_im_ + c_im_}; }

 private:
  static void step(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double sum_re_ = 0, c_re_ = 0, sum_im_ = 0, c_im_ = 0;
};

template <typename T>
T power(const T& base, int e) {
  T result(1);
  T b = base;
  while (e > 0) {
    if (e & 1) result *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return result;
}

}  // namespace detail

/// z^alpha.
template <typename T>
T monomial_value(const Monomial& m, std::span<const T> z) {
  T v(1);
  for (int i = 0; i < m.dimension(); ++i)
    if (m[i] != 0) v *= detail::power(z[static_cast<std::size_t>(i)], m[i]);
  return v;
}

/// Polynomial with sparse term storage. Zero coefficients are never stored.
template <typename Scalar>
class SparsePolynomial {
 public:
  using scalar_type = Scalar;
  using TermMap = std::map<Monomial, Scalar, GrlexLess>;

  SparsePolynomial() = default;
  explicit SparsePolynomial(int dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("SparsePolynomial: dimension must be positive");
  }
  SparsePolynomial(int dim, std::initializer_list<std::pair<Monomial, Scalar>> terms) : SparsePolynomial(dim) {
    for (const auto& [m, c] : terms) add_term(m, c);
  }

  static SparsePolynomial constant(int dim, const Scalar& c) {
    SparsePolynomial p(dim);
    p.add_term(Monomial::one(dim), c);
    return p;
  }

  int dimension() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// -1 for the zero polynomial.
  int total_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(const Monomial& m, const Scalar& c) {
    if (m.dimension() != dim_) throw std::invalid_argument("SparsePolynomial: monomial dimension mismatch");
    if (caplab::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (caplab::is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Terms of exactly the given degree.
  SparsePolynomial homogeneous_part(int degree) const {
    SparsePolynomial out(dim_);
    for (const auto& [m, c] : terms_)
      if (m.degree() == degree) out.terms_.emplace_hint(out.terms_.end(), m, c);
    return out;
  }

  bool is_homogeneous() const {
    return terms_.empty() || terms_.begin()->first.degree() == terms_.rbegin()->first.degree();
  }

  SparsePolynomial& operator+=(const SparsePolynomial& o) {
    check_dim(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  SparsePolynomial& operator-=(const SparsePolynomial& o) {
    check_dim(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  SparsePolynomial& operator*=(const Scalar& s) {
    if (caplab::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) { return a += b; }
  friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) { return a -= b; }
  friend SparsePolynomial operator-(SparsePolynomial a) {
    for (auto& [m, c] : a.terms_) c = -c;
    return a;
  }
  friend SparsePolynomial operator*(SparsePolynomial a, const Scalar& s) { return a *= s; }
  friend SparsePolynomial operator*(const Scalar& s, SparsePolynomial a) { return a *= s; }

  friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
    a.check_dim(b);
    SparsePolynomial out(a.dim_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
  }

  /// Multiply by a single monomial.
  SparsePolynomial shifted(const Monomial& m) const {
    SparsePolynomial out(dim_);
    for (const auto& [mm, c] : terms_) out.terms_.emplace(mm * m, c);
    return out;
  }

  /// Formal partial derivative with respect to variable i.
  SparsePolynomial derivative(int i) const {
    SparsePolynomial out(dim_);
    for (const auto& [m, c] : terms_) {
      if (m[i] == 0) continue;
      std::vector<int> e = m.exponents();
      const int k = e[static_cast<std::size_t>(i)]--;
      out.add_term(Monomial(std::move(e)), c * Scalar(k));
    }
    return out;
  }

  friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const SparsePolynomial& a, const SparsePolynomial& b) { return !(a == b); }

 private:
  void check_dim(const SparsePolynomial& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("SparsePolynomial: dimension mismatch");
  }

  int dim_ = 1;
  TermMap terms_;
};

/// Quotient a / b when b divides a exactly (graded-lex leading terms).
/// Throws std::domain_error if a nonzero remainder appears.
template <typename Scalar>
SparsePolynomial<Scalar> exact_divide(SparsePolynomial<Scalar> a, const SparsePolynomial<Scalar>& b) {
  if (b.is_zero()) throw std::domain_error("exact_divide: division by zero polynomial");
  const auto& [lead_m, lead_c] = *b.terms().rbegin();
  SparsePolynomial<Scalar> q(a.dimension());
  while (!a.is_zero()) {
    const auto& [m, c] = *a.terms().rbegin();
    if (!m.divisible_by(lead_m)) throw std::domain_error("exact_divide: nonzero remainder");
    Scalar coeff = c / lead_c;
    if constexpr (std::is_same_v<Scalar, Integer>) {
      if (coeff * lead_c != c) throw std::domain_error("exact_divide: coefficient not divisible");
    }
    const Monomial shift = m.divided_by(lead_m);
    q.add_term(shift, coeff);
    a -= b.shifted(shift) * coeff;
  }
  return q;
}

/// Evaluates p at z in the coefficient domain, or in Complex for float points.
/// The float path sums in monomial order with compensation.
template <typename Scalar, typename T>
T evaluate(const SparsePolynomial<Scalar>& p, std::span<const T> z) {
  if (static_cast<int>(z.size()) != p.dimension())
    throw std::invalid_argument("evaluate: point dimension " + std::to_string(z.size()) +
                                " does not match polynomial dimension " + std::to_string(p.dimension()));
  if constexpr (std::is_same_v<T, Complex>) {
    detail::CompensatedSum sum;
    for (const auto& [m, c] : p.terms()) sum.add(to_complex(c) * monomial_value<Complex>(m, z));
    return sum.value();
  } else {
    static_assert(std::is_same_v<T, Scalar>, "exact evaluation must stay in the coefficient domain");
    T sum(0);
    for (const auto& [m, c] : p.terms()) sum += c * monomial_value<T>(m, z);
    return sum;
  }
}

template <typename Scalar, typename T>
T evaluate(const SparsePolynomial<Scalar>& p, const std::vector<T>& z) {
  return evaluate<Scalar, T>(p, std::span<const T>(z));
}

/// Coefficient-wise conversion into another scalar domain.
template <typename To, typename From, typename Conv>
SparsePolynomial<To> convert(const SparsePolynomial<From>& p, Conv conv) {
  SparsePolynomial<To> out(p.dimension());
  for (const auto& [m, c] : p.terms()) out.add_term(m, conv(c));
  return out;
}

/// N polynomials in N variables, all of total degree exactly d.
template <typename Scalar>
class PolynomialMap {
 public:
  using scalar_type = Scalar;
  using Polynomial = SparsePolynomial<Scalar>;

  PolynomialMap() = default;
  explicit PolynomialMap(std::vector<Polynomial> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw std::invalid_argument("PolynomialMap: no components");
    const int N = static_cast<int>(comps_.size());
    // A zero component counts as a form of the common degree with zero coefficients.
    degree_ = -1;
    for (const auto& c : comps_) degree_ = std::max(degree_, c.total_degree());
    if (degree_ < 1) throw std::invalid_argument("PolynomialMap: components must have positive degree");
    for (const auto& c : comps_) {
      if (c.dimension() != N)
        throw std::invalid_argument("PolynomialMap: component dimension differs from number of components");
      if (!c.is_zero() && c.total_degree() != degree_)
        throw std::invalid_argument("PolynomialMap: components have unequal degrees");
    }
  }

  int dimension() const { return static_cast<int>(comps_.size()); }
  int degree() const { return degree_; }
  const std::vector<Polynomial>& components() const { return comps_; }
  const Polynomial& operator[](int i) const { return comps_[static_cast<std::size_t>(i)]; }

  bool is_homogeneous() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const Polynomial& p) { return p.is_homogeneous(); });
  }

  template <typename T>
  std::vector<T> operator()(std::span<const T> z) const {
    std::vector<T> out;
    out.reserve(comps_.size());
    for (const auto& c : comps_) out.push_back(evaluate<Scalar, T>(c, z));
    return out;
  }
  template <typename T>
  std::vector<T> operator()(const std::vector<T>& z) const {
    return (*this)(std::span<const T>(z));
  }

  friend bool operator==(const PolynomialMap& a, const PolynomialMap& b) { return a.comps_ == b.comps_; }

 private:
  std::vector<Polynomial> comps_;
  int degree_ = 0;
};

/// F_h: the degree-d terms of each component.
template <typename Scalar>
PolynomialMap<Scalar> leading_part(const PolynomialMap<Scalar>& F) {
  std::vector<SparsePolynomial<Scalar>> comps;
  comps.reserve(static_cast<std::size_t>(F.dimension()));
  for (const auto& c : F.components()) comps.push_back(c.homogeneous_part(F.degree()));
  return PolynomialMap<Scalar>(std::move(comps));
}

template <typename To, typename From, typename Conv>
PolynomialMap<To> convert(const PolynomialMap<From>& F, Conv conv) {
  std::vector<SparsePolynomial<To>> comps;
  for (const auto& c : F.components()) comps.push_back(convert<To>(c, conv));
  return PolynomialMap<To>(std::move(comps));
}

template <typename From>
PolynomialMap<Complex> to_complex_map(const PolynomialMap<From>& F) {
  return convert<Complex>(F, [](const From& c) { return to_complex(c); });
}

/// (z_1^d, ..., z_N^d) scaled componentwise by `coeffs`.
template <typename Scalar>
PolynomialMap<Scalar> diagonal_map(const std::vector<Scalar>& coeffs, int d) {
  const int N = static_cast<int>(coeffs.size());
  std::vector<SparsePolynomial<Scalar>> comps;
  for (int i = 0; i < N; ++i) {
    SparsePolynomial<Scalar> p(N);
    p.add_term(Monomial::variable(N, i, d), coeffs[static_cast<std::size_t>(i)]);
    comps.push_back(std::move(p));
  }
  return PolynomialMap<Scalar>(std::move(comps));
}

template <typename Scalar>
PolynomialMap<Scalar> pure_power_map(int N, int d) {
  return diagonal_map(std::vector<Scalar>(static_cast<std::size_t>(N), Scalar(1)), d);
}

/// Euclidean norm of a complex vector.
double norm2(std::span<const Complex> z);

/// Advisory estimate of min ||F_h(z)|| over the unit sphere: seeded sampling
/// followed by a random-direction descent polish from the best samples.
double min_leading_norm_on_sphere(const PolynomialMap<Complex>& F_h, int samples, std::uint64_t seed);

/// Matching estimate of the maximum (sampling only).
double max_leading_norm_on_sphere(const PolynomialMap<Complex>& F_h, int samples, std::uint64_t seed);

/// sqrt(sum_i (sum_alpha |c_{i,alpha}|)^2) over terms of degree < d: bounds
/// ||F(z) - F_h(z)|| <= C * max(1, ||z||)^{d-1}.
double lower_order_bound(const PolynomialMap<Complex>& F);

/// C_k = ||(sum_{|alpha| = k} |c_{i,alpha}|)_i||_2 for k < d, so that
/// ||F(z) - F_h(z)|| <= sum_k C_k ||z||^k.
std::vector<double> lower_order_profile(const PolynomialMap<Complex>& F);

}  // namespace caplab
