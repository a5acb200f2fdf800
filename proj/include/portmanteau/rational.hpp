#pragma once

// Exact rational arithmetic backend. Opt-in: only the 1-D interval algebra,
// atom sums and grids are exercised in this mode (square roots are not
// representable, so distances in d >= 2 are rejected).

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "portmanteau/error.hpp"
#include "portmanteau/scalar.hpp"

namespace portmanteau {

using Rational = boost::multiprecision::cpp_rational;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;

  // Every finite double is a dyadic rational, so this conversion is exact.
  static Rational from_double(double v) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite value in rational mode");
    return Rational(v);
  }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static bool is_finite(const Rational&) { return true; }
  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
  static Rational sqrt(const Rational&) {
    throw Error(ErrorCode::InexactFragment, "square root is not available in rational mode");
  }

  static Rational pow(const Rational& base, const Rational& exponent) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(exponent) != 1)
      throw Error(ErrorCode::InexactFragment, "non-integer exponent in rational mode");
    boost::multiprecision::cpp_int e = numerator(exponent);
    bool invert = e < 0;
    if (invert) e = -e;
    Rational result(1);
    Rational b = base;
    while (e > 0) {
      if ((e & 1) != 0) result *= b;
      b *= b;
      e >>= 1;
    }
    return invert ? Rational(1 / result) : result;
  }

  static std::size_t ceil_index(const Rational& v) {
    using boost::multiprecision::cpp_int;
    if (v <= 0) return 0;
    cpp_int num = boost::multiprecision::numerator(v);
    cpp_int den = boost::multiprecision::denominator(v);
    cpp_int q = (num + den - 1) / den;
    cpp_int cap = static_cast<cpp_int>(std::numeric_limits<std::size_t>::max() / 2);
    if (q > cap) q = cap;
    return q.convert_to<std::size_t>();
  }

  static Rational default_geom_tol() { return Rational(0); }

  static std::string to_string(const Rational& v) {
    if (boost::multiprecision::denominator(v) == 1) return boost::multiprecision::numerator(v).str();
    return v.str();
  }
};

namespace detail {

// cpp_int's string constructor reads a leading 0 as an octal prefix, so
// decimal digits are normalized first.
inline boost::multiprecision::cpp_int parse_decimal_integer(std::string text) {
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.erase(0, 1);
  }
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::Parse, "not a decimal integer: '" + text + "'");
  auto first = text.find_first_not_of('0');
  text = first == std::string::npos ? "0" : text.substr(first);
  boost::multiprecision::cpp_int value(text);
  return negative ? boost::multiprecision::cpp_int(-value) : value;
}

}  // namespace detail

/// Parses "p/q", an integer, or a plain decimal literal into an exact rational.
inline Rational parse_rational(const std::string& text) {
  using detail::parse_decimal_integer;
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    auto q = parse_decimal_integer(text.substr(slash + 1));
    if (q == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + text + "'");
    return Rational(parse_decimal_integer(text.substr(0, slash)), q);
  }
  if (text.find_first_of("eE") != std::string::npos) {
    try {
      return scalar_traits<Rational>::from_double(std::stod(text));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, "not a rational literal: '" + text + "'");
    }
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_decimal_integer(text));
  std::string fraction = text.substr(dot + 1);
  boost::multiprecision::cpp_int den = 1;
  for (std::size_t i = 0; i < fraction.size(); ++i) den *= 10;
  std::string whole = text.substr(0, dot);
  if (whole == "-" || whole == "+" || whole.empty()) whole += "0";
  auto num = parse_decimal_integer(whole + fraction);
  return Rational(num, den);
}

}  // namespace portmanteau
