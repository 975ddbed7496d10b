#pragma once

// Scalar domains shared by the polynomial, resultant and p-adic code.
//
//   Integer          arbitrary precision integer (GMP)
//   Rational         arbitrary precision rational (GMP)
//   GaussianRational Q(i), exact
//   Complex          std::complex<double>

#include <complex>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include <Eigen/Core>
#include <boost/multiprecision/gmp.hpp>

namespace caplab {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Complex = std::complex<double>;

/// Exact element of Q(i).
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(int v) : re(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    const Rational den = o.re * o.re + o.im * o.im;
    Rational r = (re * o.re + im * o.im) / den;
    im = (im * o.re - re * o.im) / den;
    re = std::move(r);
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(GaussianRational a) {
    a.re = -a.re;
    a.im = -a.im;
    return a;
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z);
};

std::string to_string(const Integer& v);
std::string to_string(const Rational& v);
std::string to_string(const GaussianRational& v);
std::string to_string(const Complex& v);

/// Parses "3", "-3/4", "0.125", "1e-3", "2.5e2" exactly.  Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// True if the text is written as a fraction or integer (no decimal point / exponent).
bool is_fraction_literal(std::string_view text);

// Conversions to the floating domain.
inline Complex to_complex(const Complex& z) { return z; }
inline Complex to_complex(const Rational& q) { return {q.convert_to<double>(), 0.0}; }
inline Complex to_complex(const Integer& q) { return {q.convert_to<double>(), 0.0}; }
inline Complex to_complex(const GaussianRational& z) {
  return {z.re.convert_to<double>(), z.im.convert_to<double>()};
}

template <typename S>
bool is_zero(const S& s) {
  if constexpr (std::is_same_v<S, Complex>) {
    return s == Complex(0.0, 0.0);
  } else {
    return s == S(0);
  }
}

template <typename S>
inline constexpr bool is_exact_v = !std::is_same_v<S, Complex> && !std::is_floating_point_v<S>;

/// |z|^2 in the exact domain where that makes sense.
inline Rational norm_sq(const GaussianRational& z) { return z.re * z.re + z.im * z.im; }

}  // namespace caplab

namespace Eigen {

template <>
struct NumTraits<caplab::GaussianRational> : GenericNumTraits<caplab::GaussianRational> {
  using Real = caplab::Rational;
  using NonInteger = caplab::GaussianRational;
  using Nested = caplab::GaussianRational;
  using Literal = caplab::GaussianRational;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 8,
    MulCost = 16
  };
};

}  // namespace Eigen
