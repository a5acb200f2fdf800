#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "portmanteau/error.hpp"
#include "portmanteau/measure.hpp"
#include "portmanteau/point.hpp"
#include "portmanteau/scalar.hpp"

namespace portmanteau {

/// Atoms accumulating at x0 along a fixed direction:
///   location_k = x0 + direction * scale / (k+1)^decay
///   mass_k     = mass_scale * (k+1)^mass_growth,     k = 0, 1, 2, ...
/// With scale = decay = mass_scale = 1 and mass_growth = 0 this is the sum
/// of unit masses at 1/k; mass_growth = 1 gives k * delta_{1/k}.
template <class Real>
struct PowerLawSpec {
  Point<Real> x0;
  std::vector<Real> direction;  // unit length
  Real scale{1};
  Real decay{1};
  Real mass_scale{1};
  Real mass_growth{0};
  std::optional<std::size_t> truncate = std::nullopt;  // keep only the first n atoms
  bool tail_locator = true;             // false models a missing certificate
};

template <class Real>
AtomicMeasure<Real> power_law_measure(const PowerLawSpec<Real>& spec) {
  using traits = scalar_traits<Real>;
  const Real zero(0);
  if (spec.direction.size() != spec.x0.dimension()) throw Error(ErrorCode::DimensionMismatch, "direction dimension");
  if (!(zero < spec.scale) || !(zero < spec.decay) || !(zero < spec.mass_scale))
    throw Error(ErrorCode::InvalidMeasure, "power law needs positive scale, decay and mass_scale");
  Real norm2(0);
  for (const auto& c : spec.direction) norm2 += c * c;
  if (abs_value<Real>(norm2 - Real(1)) > from_double<Real>(1e-12))
    throw Error(ErrorCode::InvalidMeasure, "power law direction must have unit length");

  auto radius_of = [spec](std::size_t k) -> Real {
    return spec.scale / traits::pow(Real(static_cast<long long>(k + 1)), spec.decay);
  };
  auto enumerate = [spec, radius_of](std::size_t k) {
    Real j(static_cast<long long>(k + 1));
    return Atom<Real>{offset(spec.x0, spec.direction, radius_of(k)), spec.mass_scale * traits::pow(j, spec.mass_growth)};
  };

  typename AtomicMeasure<Real>::TailLocator locator;
  if (spec.tail_locator) {
    // ceil((scale / r)^(1/decay)), then nudged until the certificate holds
    // exactly for the atom it points at.
    locator = [spec, radius_of](const Real& r) {
      double est = std::pow(to_double(spec.scale) / to_double(r), 1.0 / to_double(spec.decay));
      std::size_t k = traits::ceil_index(est);
      if (spec.truncate && k >= *spec.truncate) return *spec.truncate;
      while (!(radius_of(k) < r)) {
        ++k;
        if (spec.truncate && k >= *spec.truncate) return *spec.truncate;
      }
      return k;
    };
  }

  // sum_{j >= K+1} m j^q min(c^2 j^(-2p), 1) <= m c^2 sum_{j >= K+1} j^(-s),
  // s = 2p - q, and the integral test gives sum_{j >= K+1} j^(-s) <= K^(1-s)/(s-1).
  typename AtomicMeasure<Real>::WeightedTailBound tail = [spec](std::size_t cutoff) -> std::optional<Real> {
    if (spec.truncate && cutoff >= *spec.truncate) return Real(0);
    Real s = Real(2) * spec.decay - spec.mass_growth;
    if (!(Real(1) < s)) return std::nullopt;
    Real lead = spec.mass_scale * spec.scale * spec.scale;
    Real k(static_cast<long long>(cutoff));
    Real sum = cutoff == 0 ? Real(Real(1) + Real(1) / (s - Real(1)))
                           : Real(traits::pow(k, Real(1) - s) / (s - Real(1)));
    return lead * sum;
  };

  return AtomicMeasure<Real>::countable(spec.x0, enumerate, spec.truncate, locator, tail);
}

}  // namespace portmanteau
