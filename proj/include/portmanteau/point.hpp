#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "portmanteau/error.hpp"
#include "portmanteau/scalar.hpp"

namespace portmanteau {

/// A point of R^d. Coordinates are finite; dimension is at least one.
template <class Real>
class Point {
 public:
  Point() : coords_(1, Real(0)) {}
  Point(std::initializer_list<Real> coords) : coords_(coords) { check(); }
  explicit Point(std::vector<Real> coords) : coords_(std::move(coords)) { check(); }

  static Point origin(std::size_t dimension) { return Point(std::vector<Real>(dimension, Real(0))); }

  std::size_t dimension() const noexcept { return coords_.size(); }
  const Real& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Real>& coordinates() const noexcept { return coords_; }

  friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }

  std::string to_string() const {
    if (coords_.size() == 1) return scalar_traits<Real>::to_string(coords_[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) out += ", ";
      out += scalar_traits<Real>::to_string(coords_[i]);
    }
    return out + ")";
  }

 private:
  void check() const {
    if (coords_.empty()) throw Error(ErrorCode::InvalidArgument, "point of dimension 0");
    for (const auto& c : coords_)
      if (!scalar_traits<Real>::is_finite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
  }

  std::vector<Real> coords_;
};

template <class Real>
void require_same_dimension(const Point<Real>& p, const Point<Real>& q) {
  if (p.dimension() != q.dimension())
    throw Error(ErrorCode::DimensionMismatch, "dimension " + std::to_string(p.dimension()) + " vs " +
                                                  std::to_string(q.dimension()));
}

template <class Real>
Real squared_distance(const Point<Real>& p, const Point<Real>& q) {
  require_same_dimension(p, q);
  Real sum(0);
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    Real diff = p[i] - q[i];
    sum += diff * diff;
  }
  return sum;
}

/// Euclidean metric. In one dimension this is |p - q| with no rounding
/// beyond the subtraction, which keeps the rational backend exact.
template <class Real>
Real distance(const Point<Real>& p, const Point<Real>& q) {
  require_same_dimension(p, q);
  if (p.dimension() == 1) return abs_value<Real>(p[0] - q[0]);
  return scalar_traits<Real>::sqrt(squared_distance(p, q));
}

/// x + scale * direction
template <class Real>
Point<Real> offset(const Point<Real>& x, const std::vector<Real>& direction, const Real& scale) {
  if (direction.size() != x.dimension()) throw Error(ErrorCode::DimensionMismatch, "direction dimension");
  std::vector<Real> out(x.coordinates());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * direction[i];
  return Point<Real>(std::move(out));
}

}  // namespace portmanteau
