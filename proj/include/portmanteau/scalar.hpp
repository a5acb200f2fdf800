#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <system_error>

#include "portmanteau/error.hpp"

namespace portmanteau {

/// Arithmetic customization point. The library is written against these
/// operations only, so any ordered field with the specialization below can
/// drive it. `double` is specialized here; exact rationals in rational.hpp.
template <class Real>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;

  static double from_double(double v) { return v; }
  static double to_double(double v) { return v; }
  static bool is_finite(double v) { return std::isfinite(v); }
  static double abs(double v) { return std::fabs(v); }
  static double sqrt(double v) { return std::sqrt(v); }
  static double pow(double base, double exponent) { return std::pow(base, exponent); }

  /// Smallest integer index >= v (v >= 0), saturating.
  static std::size_t ceil_index(double v) {
    if (!(v > 0)) return 0;
    double c = std::ceil(v);
    if (c >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 2))
      return std::numeric_limits<std::size_t>::max() / 2;
    return static_cast<std::size_t>(c);
  }

  static double default_geom_tol() { return 1e-12; }

  /// Shortest round-trip rendering, used for labels.
  static std::string to_string(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf.data(), res.ptr);
  }
};

template <class Real>
Real from_double(double v) {
  return scalar_traits<Real>::from_double(v);
}

template <class Real>
double to_double(const Real& v) {
  return scalar_traits<Real>::to_double(v);
}

template <class Real>
Real abs_value(const Real& v) {
  return scalar_traits<Real>::abs(v);
}

template <class Real>
const Real& min_of(const Real& a, const Real& b) {
  return (b < a) ? b : a;
}

template <class Real>
const Real& max_of(const Real& a, const Real& b) {
  return (a < b) ? b : a;
}

}  // namespace portmanteau
