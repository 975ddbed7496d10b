#include "caplab/scalar.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace caplab {

std::string to_string(const Integer& v) { return v.str(); }

std::string to_string(const Rational& v) { return v.str(); }

std::string to_string(const GaussianRational& v) {
  if (v.im == 0) return v.re.str();
  if (v.re == 0) return v.im.str() + "i";
  std::string out = v.re.str();
  out += v.im < 0 ? "-" : "+";
  out += Rational(abs(v.im)).str();
  out += "i";
  return out;
}

std::string to_string(const Complex& v) {
  std::ostringstream os;
  os.precision(17);
  os << v.real();
  if (v.imag() != 0.0) os << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << to_string(z); }

bool is_fraction_literal(std::string_view text) {
  return text.find_first_of(".eE") == std::string_view::npos;
}

namespace {

Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw std::invalid_argument("empty number in '" + std::string(whole) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad digit in '" + std::string(whole) + "'");
  }
  // a leading zero would make the string parse as octal
  const auto first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? Integer(0) : Integer(std::string(digits.substr(first)));
}

Rational parse_signed_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational r(parse_integer(s, whole));
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_signed_integer(text.substr(0, slash), whole);
    const Rational den = parse_signed_integer(text.substr(slash + 1), whole);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
    return num / den;
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    const Rational ex = parse_signed_integer(text.substr(e + 1), whole);
    exponent = numerator(ex).convert_to<long>();
    text = text.substr(0, e);
  }
  std::string digits;
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
    exponent -= static_cast<long>(text.size() - dot - 1);
  } else {
    digits = std::string(text);
  }
  Rational value(parse_integer(digits, whole));
  const Integer ten_pow = pow(Integer(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  value = exponent < 0 ? Rational(value / ten_pow) : Rational(value * ten_pow);
  return negative ? Rational(-value) : value;
}

}  // namespace caplab
