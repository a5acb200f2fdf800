#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "portmanteau/error.hpp"
#include "portmanteau/function.hpp"
#include "portmanteau/point.hpp"
#include "portmanteau/scalar.hpp"
#include "portmanteau/set_expr.hpp"

namespace portmanteau {

template <class Real>
struct Atom {
  Point<Real> location;
  Real mass;
};

/// Countable atomic measure, possibly of infinite total mass, whose mass
/// outside every ball around x0 is a finite sum.
///
/// Atoms are produced by a pure enumerator k -> (location, mass). The tail
/// locator K certifies that every atom with index >= K(r) lies strictly
/// within distance r of x0, so any query that stays a positive distance away
/// from x0 touches finitely many atoms. Nothing is materialized.
template <class Real>
class AtomicMeasure {
 public:
  using Enumerator = std::function<Atom<Real>(std::size_t)>;
  using TailLocator = std::function<std::size_t(const Real&)>;
  /// Upper bound on sum_{k >= cutoff} mass_k * min(d_k^2, 1); nullopt = +inf.
  using WeightedTailBound = std::function<std::optional<Real>(std::size_t)>;

  static AtomicMeasure finite(Point<Real> x0, std::vector<Atom<Real>> atoms, bool center_atoms_allowed = false) {
    for (const auto& a : atoms) {
      require_same_dimension(a.location, x0);
      if (!(Real(0) < a.mass) || !scalar_traits<Real>::is_finite(a.mass))
        throw Error(ErrorCode::InvalidMeasure, "atom masses must be positive and finite");
      if (!center_atoms_allowed && a.location == x0)
        throw Error(ErrorCode::InvalidMeasure, "atom at x0 " + x0.to_string() + " without center_atoms_allowed");
    }
    auto shared = std::make_shared<const std::vector<Atom<Real>>>(std::move(atoms));
    AtomicMeasure m(std::move(x0));
    m.count_ = shared->size();
    m.enumerate_ = [shared](std::size_t k) { return (*shared)[k]; };
    m.center_atoms_allowed_ = center_atoms_allowed;
    m.weighted_tail_ = [](std::size_t) { return std::optional<Real>(Real(0)); };
    return m;
  }

  static AtomicMeasure zero(Point<Real> x0) { return finite(std::move(x0), {}); }

  /// General constructor; `count` is nullopt for infinitely many atoms.
  static AtomicMeasure countable(Point<Real> x0, Enumerator enumerate, std::optional<std::size_t> count,
                                 TailLocator tail_locator, WeightedTailBound weighted_tail = {},
                                 bool center_atoms_allowed = false) {
    if (!enumerate) throw Error(ErrorCode::InvalidMeasure, "missing atom enumerator");
    AtomicMeasure m(std::move(x0));
    m.enumerate_ = std::move(enumerate);
    m.count_ = count;
    m.tail_locator_ = std::move(tail_locator);
    m.weighted_tail_ = std::move(weighted_tail);
    m.center_atoms_allowed_ = center_atoms_allowed;
    return m;
  }

  const Point<Real>& center() const noexcept { return x0_; }
  std::size_t dimension() const noexcept { return x0_.dimension(); }
  std::optional<std::size_t> atom_count() const noexcept { return count_; }
  bool is_finite() const noexcept { return count_.has_value(); }
  bool has_tail_locator() const noexcept { return static_cast<bool>(tail_locator_); }
  bool has_weighted_tail_bound() const noexcept { return static_cast<bool>(weighted_tail_); }
  bool center_atoms_allowed() const noexcept { return center_atoms_allowed_; }

  Atom<Real> atom(std::size_t k) const {
    if (count_ && k >= *count_) throw Error(ErrorCode::InvalidArgument, "atom index out of range");
    return enumerate_(k);
  }

  /// K(r), clipped to the atom count.
  std::size_t tail_index(const Real& r) const {
    if (!tail_locator_) {
      if (count_) return *count_;
      throw Error(ErrorCode::MissingTailLocator, "infinite atomic measure without tail locator");
    }
    std::size_t k = tail_locator_(r);
    return count_ ? std::min(k, *count_) : k;
  }

  std::optional<Real> weighted_tail_bound(std::size_t cutoff) const {
    if (!weighted_tail_) throw Error(ErrorCode::MissingTailBound, "no weighted tail bound supplied");
    return weighted_tail_(cutoff);
  }

  /// Number of leading atoms that contain every atom at distance >= rho from
  /// x0 (after widening rho inward by tol).
  std::size_t atoms_to_visit(const Real& rho, const Real& tol) const {
    Real inner = rho - tol;
    if (Real(0) < inner && tail_locator_) return tail_index(inner);
    if (count_) return *count_;
    if (!tail_locator_) throw Error(ErrorCode::MissingTailLocator, "infinite atomic measure without tail locator");
    throw Error(ErrorCode::UnboundedRegion, "region reaches x0 and the measure has infinitely many atoms");
  }

 private:
  explicit AtomicMeasure(Point<Real> x0) : x0_(std::move(x0)) {}

  Point<Real> x0_;
  Enumerator enumerate_;
  std::optional<std::size_t> count_;
  TailLocator tail_locator_;
  WeightedTailBound weighted_tail_;
  bool center_atoms_allowed_ = false;
};

/// eta|_B, i.e. A -> eta(B n A).
template <class Real>
struct RestrictedMeasure {
  AtomicMeasure<Real> base;
  SetExpr<Real> window;
};

namespace detail {

/// Membership test compiled once per query (interval algebra in 1-D).
template <class Real>
class CompiledSet {
 public:
  explicit CompiledSet(const SetExpr<Real>& s) : expr_(s) {
    if (s.dimension() == 1) intervals_ = to_interval_set(s);
  }
  bool contains(const Point<Real>& p, const Real& tol) const {
    return intervals_ ? intervals_->contains(p[0], tol) : portmanteau::contains(expr_, p, tol);
  }
  Location classify(const Point<Real>& p, const Real& tol) const {
    return intervals_ ? intervals_->classify(p[0], tol) : portmanteau::classify(expr_, p, tol);
  }

 private:
  SetExpr<Real> expr_;
  std::optional<IntervalSet<Real>> intervals_;
};

/// Distance from x0 to the set, or nullopt if the set is empty.
template <class Real>
std::optional<Real> clearance(const Point<Real>& x0, const SetExpr<Real>& s) {
  try {
    return dist_to_set(x0, s).value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptySet) return std::nullopt;
    throw;
  }
}

}  // namespace detail

template <class Real>
RestrictedMeasure<Real> restrict(const AtomicMeasure<Real>& eta, SetExpr<Real> window) {
  if (window.dimension() != eta.dimension()) throw Error(ErrorCode::DimensionMismatch, "window dimension");
  return {eta, std::move(window)};
}

/// eta(X \ B(x0, r)). Atoms at distance exactly r are included (the open
/// ball's complement is closed); include_sphere = false gives X \ B[x0, r].
template <class Real>
Real mass_outside(const AtomicMeasure<Real>& eta, const Real& r, bool include_sphere = true,
                  const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  if (!(Real(0) < r)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const std::size_t n = eta.atoms_to_visit(r, tol);
  Real sum(0);
  for (std::size_t k = 0; k < n; ++k) {
    auto a = eta.atom(k);
    Real d = distance(a.location, eta.center());
    bool on_sphere = !(tol < abs_value<Real>(d - r));
    if (on_sphere ? include_sphere : r < d) sum += a.mass;
  }
  return sum;
}

/// eta(S), with atoms on the boundary of S assigned by membership in S.
template <class Real>
Real mass_of(const AtomicMeasure<Real>& eta, const SetExpr<Real>& s,
             const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  auto rho = detail::clearance(eta.center(), s);
  if (!rho) return Real(0);
  const std::size_t n = eta.atoms_to_visit(*rho, tol);
  detail::CompiledSet<Real> set(s);
  Real sum(0);
  for (std::size_t k = 0; k < n; ++k) {
    auto a = eta.atom(k);
    if (set.contains(a.location, tol)) sum += a.mass;
  }
  return sum;
}

template <class Real>
Real mass_of(const RestrictedMeasure<Real>& eta, const SetExpr<Real>& s,
             const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  return mass_of(eta.base, intersection_of(eta.window, s), tol);
}

template <class Real>
Real total_mass(const AtomicMeasure<Real>& eta) {
  if (!eta.is_finite()) throw Error(ErrorCode::UnboundedRegion, "total mass of an infinite atomic family");
  Real sum(0);
  for (std::size_t k = 0; k < *eta.atom_count(); ++k) sum += eta.atom(k).mass;
  return sum;
}

template <class Real>
Real total_mass(const RestrictedMeasure<Real>& eta, const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  return mass_of(eta.base, eta.window, tol);
}

/// The atoms of a restriction, in enumeration order. Finite whenever the
/// window stays away from x0 or the base measure is finite.
template <class Real>
std::vector<Atom<Real>> atoms_of(const RestrictedMeasure<Real>& eta,
                                 const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  std::vector<Atom<Real>> out;
  auto rho = detail::clearance(eta.base.center(), eta.window);
  if (!rho) return out;
  const std::size_t n = eta.base.atoms_to_visit(*rho, tol);
  detail::CompiledSet<Real> set(eta.window);
  for (std::size_t k = 0; k < n; ++k) {
    auto a = eta.base.atom(k);
    if (set.contains(a.location, tol)) out.push_back(std::move(a));
  }
  return out;
}

template <class Real>
struct BoundaryMass {
  Real mass;
  bool exact;  // false: upper bound from the conservative boundary superset
};

/// eta(boundary S).
template <class Real>
BoundaryMass<Real> boundary_mass(const AtomicMeasure<Real>& eta, const SetExpr<Real>& s,
                                 const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  auto gap = dist_to_boundary(eta.center(), s);
  if (!gap) return {Real(0), true};
  const bool exact = is_exact_fragment(s);
  const std::size_t n = eta.atoms_to_visit(gap->value, tol);
  std::optional<detail::CompiledSet<Real>> compiled;
  if (exact) compiled.emplace(s);
  Real sum(0);
  for (std::size_t k = 0; k < n; ++k) {
    auto a = eta.atom(k);
    bool hit = exact ? compiled->classify(a.location, tol) == Location::Boundary : on_leaf_boundary(s, a.location, tol);
    if (hit) sum += a.mass;
  }
  return {sum, exact};
}

namespace detail {

template <class Real>
void require_matching_center(const TestFunction<Real>& f, const Point<Real>& x0) {
  if (f.vanishes_near_center() && !(f.center() == x0))
    throw Error(ErrorCode::InvalidArgument, f.name() + ": vanish ball is not centred at the measure's x0");
}

}  // namespace detail

/// Integral of f against eta, an exact finite atom sum. Legal when f carries
/// a vanish radius or eta has finitely many atoms.
template <class Real>
Real integrate(const TestFunction<Real>& f, const AtomicMeasure<Real>& eta) {
  detail::require_matching_center(f, eta.center());
  std::size_t n = 0;
  if (f.vanishes_near_center()) {
    n = eta.atoms_to_visit(f.vanish_radius(), Real(0));
  } else if (eta.is_finite()) {
    n = *eta.atom_count();
  } else {
    throw Error(ErrorCode::UnboundedIntegral, f.name() + " does not vanish near x0 and the measure is infinite");
  }
  Real sum(0);
  for (std::size_t k = 0; k < n; ++k) {
    auto a = eta.atom(k);
    sum += f(a.location) * a.mass;
  }
  return sum;
}

template <class Real>
Real integrate(const TestFunction<Real>& f, const RestrictedMeasure<Real>& eta,
               const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  detail::require_matching_center(f, eta.base.center());
  auto rho = detail::clearance(eta.base.center(), eta.window);
  if (!rho) return Real(0);
  Real reach = *rho - tol;
  if (f.vanishes_near_center()) reach = max_of(reach, f.vanish_radius());
  std::size_t n = 0;
  if (Real(0) < reach && eta.base.has_tail_locator()) {
    n = eta.base.tail_index(reach);
  } else if (eta.base.is_finite()) {
    n = *eta.base.atom_count();
  } else {
    throw Error(ErrorCode::UnboundedIntegral, f.name() + ": window reaches x0 and the measure is infinite");
  }
  detail::CompiledSet<Real> set(eta.window);
  Real sum(0);
  for (std::size_t k = 0; k < n; ++k) {
    auto a = eta.base.atom(k);
    if (set.contains(a.location, tol)) sum += f(a.location) * a.mass;
  }
  return sum;
}

template <class Real>
struct LevyCheck {
  bool is_levy;
  Real value;                       // partial sum of mass * min(d^2, 1)
  std::optional<Real> error_bound;  // tail bound; nullopt = unbounded
  bool center_atom;
  std::size_t atoms_summed;
};

/// Checks eta({x0}) = 0 and that the integral of min(d(x, x0)^2, 1) is
/// finite, from a partial sum plus the measure's weighted tail bound.
template <class Real>
LevyCheck<Real> is_levy_measure(const AtomicMeasure<Real>& eta, std::size_t cutoff,
                                const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  if (cutoff == 0) throw Error(ErrorCode::InvalidArgument, "cutoff must be at least 1");
  std::size_t n = cutoff;
  if (eta.is_finite()) n = *eta.atom_count();
  else if (!eta.has_weighted_tail_bound())
    throw Error(ErrorCode::MissingTailBound, "infinite family without weighted tail bound");
  LevyCheck<Real> out{false, Real(0), Real(0), false, n};
  for (std::size_t k = 0; k < n; ++k) {
    auto a = eta.atom(k);
    Real d2 = squared_distance(a.location, eta.center());
    if (!(tol * tol < d2)) out.center_atom = true;
    out.value += a.mass * min_of(d2, Real(1));
  }
  if (!eta.is_finite()) out.error_bound = eta.weighted_tail_bound(n);
  out.is_levy = !out.center_atom && out.error_bound.has_value();
  return out;
}

}  // namespace portmanteau
