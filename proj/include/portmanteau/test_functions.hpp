#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "portmanteau/error.hpp"
#include "portmanteau/function.hpp"
#include "portmanteau/measure.hpp"
#include "portmanteau/point.hpp"
#include "portmanteau/scalar.hpp"
#include "portmanteau/set_expr.hpp"

namespace portmanteau {

namespace detail {

template <class Real>
std::string num(const Real& v) {
  return scalar_traits<Real>::to_string(v);
}

/// Distance-to-set closure used inside evaluators; exact fragment only.
template <class Real>
std::function<Real(const Point<Real>&)> distance_function(const SetExpr<Real>& s) {
  if (s.dimension() == 1) {
    auto iv = to_interval_set(s);
    if (iv.empty()) throw Error(ErrorCode::EmptySet, "distance to an empty set");
    return [iv](const Point<Real>& p) -> Real { return iv.distance(p[0]); };
  }
  if (!is_exact_fragment(s)) throw Error(ErrorCode::InexactFragment, "distance function of a nested set in dimension > 1");
  return [s](const Point<Real>& p) -> Real { return dist_to_set(p, s).value; };
}

}  // namespace detail

/// f(x) = min(1, n0 * d(x, U_eps)) for a closed U_eps with x0 in its interior:
/// 0 on U_eps, 1 where d(x, U_eps) >= 1/n0, Lipschitz with constant n0.
template <class Real>
TestFunction<Real> bump(const SetExpr<Real>& u_eps, const Real& n0, const Point<Real>& x0) {
  if (!(Real(0) < n0)) throw Error(ErrorCode::InvalidArgument, "bump: n0 must be positive");
  auto closed = is_closed_set(u_eps);
  if (!closed) throw Error(ErrorCode::InexactFragment, "bump: closedness of U_eps cannot be decided");
  if (!*closed) throw Error(ErrorCode::InvalidArgument, "bump: U_eps must be closed");
  auto outside = complement_of(u_eps);
  auto interior_radius = detail::clearance(x0, outside);
  if (!interior_radius) throw Error(ErrorCode::InvalidArgument, "bump: U_eps is the whole space");
  if (!(Real(0) < *interior_radius) || !contains(u_eps, x0, Real(0)))
    throw Error(ErrorCode::InvalidArgument, "bump: x0 is not an interior point of U_eps");
  auto dist = detail::distance_function(u_eps);
  FunctionMetadata<Real> meta{"bump(U=" + to_string(u_eps) + ", n0=" + detail::num(n0) + ")",
                              x0,
                              Real(1),
                              *interior_radius,
                              n0,
                              FunctionClass::BL_x0,
                              std::nullopt};
  return TestFunction<Real>([dist, n0](const Point<Real>& x) -> Real { return min_of(Real(1), Real(n0 * dist(x))); },
                            std::move(meta));
}

/// Bump around the closed ball of radius `inner_radius` centred at x0.
template <class Real>
TestFunction<Real> ball_bump(const Point<Real>& x0, const Real& inner_radius, const Real& n0) {
  return bump(SetExpr<Real>::closed_ball(x0, inner_radius), n0, x0);
}

/// The canonical C2 shape scale * min(1, max(0, |x - x0| - a)).
template <class Real>
TestFunction<Real> c2_family(const Real& a, const Point<Real>& x0 = Point<Real>{Real(0)}, const Real& scale = Real(1)) {
  if (!(Real(0) < a)) throw Error(ErrorCode::InvalidArgument, "c2_family: a must be positive");
  if (scale == Real(0)) throw Error(ErrorCode::InvalidArgument, "c2_family: scale must be nonzero");
  Real mag = abs_value(scale);
  std::string name = "c2(a=" + detail::num(a) + (scale == Real(1) ? "" : ", scale=" + detail::num(scale)) + ")";
  FunctionMetadata<Real> meta{name, x0, mag, a, mag, FunctionClass::C2, scale};
  return TestFunction<Real>(
      [x0, a, scale](const Point<Real>& x) -> Real {
        Real excess = max_of(Real(distance(x, x0) - a), Real(0));
        return scale * min_of(Real(1), excess);
      },
      std::move(meta));
}

template <class Real>
TestFunction<Real> constant_function(const Real& value, const Point<Real>& x0) {
  if (value == Real(0)) throw Error(ErrorCode::InvalidArgument, "use zero_function for the zero constant");
  FunctionMetadata<Real> meta{"constant(" + detail::num(value) + ")", x0, abs_value(value), Real(0), std::nullopt,
                              FunctionClass::C, std::nullopt};
  return TestFunction<Real>([value](const Point<Real>&) { return value; }, std::move(meta));
}

template <class Real>
TestFunction<Real> zero_function(const Point<Real>& x0) {
  FunctionMetadata<Real> meta{"zero", x0, Real(1), Real(1), Real(1), FunctionClass::BL_x0, std::nullopt};
  return TestFunction<Real>([](const Point<Real>&) { return Real(0); }, std::move(meta));
}

/// min(d(x, x0), cap): bounded and continuous but not vanishing near x0.
template <class Real>
TestFunction<Real> distance_capped(const Point<Real>& x0, const Real& cap) {
  if (!(Real(0) < cap)) throw Error(ErrorCode::InvalidArgument, "distance_capped: cap must be positive");
  FunctionMetadata<Real> meta{"distance_capped(" + detail::num(cap) + ")", x0, cap, Real(0), Real(1), FunctionClass::C,
                              std::nullopt};
  return TestFunction<Real>([x0, cap](const Point<Real>& x) -> Real { return min_of(distance(x, x0), cap); }, std::move(meta));
}

/// min(1, sqrt(max(0, d(x, x0) - a))): uniformly continuous, not Lipschitz.
template <class Real>
TestFunction<Real> sqrt_capped(const Point<Real>& x0, const Real& a) {
  if (!(Real(0) < a)) throw Error(ErrorCode::InvalidArgument, "sqrt_capped: a must be positive");
  FunctionMetadata<Real> meta{"sqrt_capped(a=" + detail::num(a) + ")", x0, Real(1), a, std::nullopt,
                              FunctionClass::C_x0_u, std::nullopt};
  return TestFunction<Real>(
      [x0, a](const Point<Real>& x) -> Real {
        Real excess = max_of(Real(distance(x, x0) - a), Real(0));
        return min_of(Real(1), scalar_traits<Real>::sqrt(excess));
      },
      std::move(meta));
}

/// clamp(p(t), -cap, cap) with t = max(0, d(x, x0) - vanish_radius) and
/// p(t) = sum coeffs[i] t^i. A positive vanish radius needs p(0) = 0.
template <class Real>
TestFunction<Real> capped_polynomial(const Point<Real>& x0, std::vector<Real> coeffs, const Real& vanish_radius,
                                     const Real& cap) {
  if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "capped_polynomial: no coefficients");
  if (!(Real(0) < cap)) throw Error(ErrorCode::InvalidArgument, "capped_polynomial: cap must be positive");
  if (vanish_radius < Real(0)) throw Error(ErrorCode::InvalidArgument, "capped_polynomial: negative vanish radius");
  const bool vanishes = Real(0) < vanish_radius;
  if (vanishes && !(coeffs.front() == Real(0)))
    throw Error(ErrorCode::InvalidArgument, "capped_polynomial: constant term must be 0 when vanishing near x0");
  std::string name = "capped_polynomial(coeffs=[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) name += (i ? ", " : "") + detail::num(coeffs[i]);
  name += "], vanish_radius=" + detail::num(vanish_radius) + ", cap=" + detail::num(cap) + ")";
  FunctionMetadata<Real> meta{name, x0, cap, vanish_radius, std::nullopt,
                              vanishes ? FunctionClass::C_x0 : FunctionClass::C, std::nullopt};
  return TestFunction<Real>(
      [x0, coeffs = std::move(coeffs), vanish_radius, cap](const Point<Real>& x) -> Real {
        Real t = max_of(Real(distance(x, x0) - vanish_radius), Real(0));
        Real acc(0);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
        Real neg_cap = -cap;
        return min_of(max_of(acc, neg_cap), cap);
      },
      std::move(meta));
}

/// F_n = X \ (X\U)^{1/n} = {x : d(x, X\U) >= 1/n}, a closed subset of the open U.
template <class Real>
SetExpr<Real> closed_shrink(const SetExpr<Real>& u, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "closed_shrink: n must be positive");
  const Real lambda = Real(1) / Real(static_cast<long long>(n));
  if (u.dimension() == 1) {
    auto outside = to_interval_set(u).complement();
    if (outside.empty()) return SetExpr<Real>::whole(1);
    return from_interval_set(outside.enlarge(lambda).complement());
  }
  if (detail::trivial_set(u)) return u;
  auto ball = detail::single_ball(u);
  if (!ball || ball->negated || ball->closed)
    throw Error(ErrorCode::InexactFragment, "closed_shrink: only open balls are supported in dimension > 1");
  Real r = *ball->radius - lambda;
  if (!(Real(0) < r)) return SetExpr<Real>::empty(u.dimension());
  return SetExpr<Real>::closed_ball(*ball->center, r);
}

template <class Real>
struct ShrinkResult {
  SetExpr<Real> closed_set;  // F_{n0}
  std::size_t n0;
  Real gap;  // eta0(U \ F_{n0})
};

/// Smallest n0 (increasing search) such that F_{n0} is a closed
/// neighbourhood of x0 inside U with eta0(U \ F_{n0}) < eps.
template <class Real>
ShrinkResult<Real> shrink_neighbourhood(const AtomicMeasure<Real>& eta0, const SetExpr<Real>& u, const Real& eps,
                                        std::size_t max_n = 1000000,
                                        const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  if (!(Real(0) < eps)) throw Error(ErrorCode::InvalidArgument, "shrink_neighbourhood: eps must be positive");
  auto open = is_open_set(u);
  if (!open) throw Error(ErrorCode::InexactFragment, "shrink_neighbourhood: openness of U cannot be decided");
  if (!*open) throw Error(ErrorCode::InvalidArgument, "shrink_neighbourhood: U must be open");
  const auto& x0 = eta0.center();
  if (!contains(u, x0, Real(0))) throw Error(ErrorCode::InvalidArgument, "shrink_neighbourhood: x0 is not in U");
  auto outside = complement_of(u);
  auto reach = detail::clearance(x0, outside);
  if (!reach) return {SetExpr<Real>::whole(u.dimension()), 1, Real(0)};

  // F_n only contains x0 in its interior once 1/n < d(x0, X\U).
  std::size_t n = std::max<std::size_t>(1, scalar_traits<Real>::ceil_index(Real(1) / *reach));
  while (!(Real(1) / Real(static_cast<long long>(n)) < *reach)) ++n;
  if (n > max_n) throw Error(ErrorCode::SearchExhausted, "shrink_neighbourhood: x0 too close to the complement of U");

  // Atoms of U \ F_start, each with its distance to X\U; atom k drops out of
  // U \ F_n as soon as that distance reaches 1/n.
  auto band = intersection_of(u, complement_of(closed_shrink(u, n)));
  std::vector<std::pair<Real, Real>> atoms;  // (distance to X\U, mass)
  for (const auto& a : atoms_of(restrict(eta0, band), tol))
    atoms.emplace_back(dist_to_set(a.location, outside).value, a.mass);
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return b.first < a.first; });

  Real gap(0);
  for (const auto& a : atoms) gap += a.second;
  std::size_t dropped = 0;
  for (; n <= max_n; ++n) {
    const Real lambda = Real(1) / Real(static_cast<long long>(n));
    while (dropped < atoms.size() && !(atoms[dropped].first < lambda - tol)) gap -= atoms[dropped++].second;
    if (gap < eps) {
      auto f = closed_shrink(u, n);
      Real verified = mass_of(eta0, intersection_of(u, complement_of(f)), tol);
      if (verified < eps) return {f, n, verified};
    }
  }
  throw Error(ErrorCode::SearchExhausted, "shrink_neighbourhood: no n <= " + std::to_string(max_n) +
                                              " reached eps; achieved gap " + detail::num(gap));
}

namespace detail {

// Distances d(loc_k, x0) of atoms with lo < d < hi, sorted and distinct.
template <class Real>
std::vector<Real> atom_distances_between(const AtomicMeasure<Real>& eta, const Real& lo, const Real& hi, const Real& tol) {
  std::vector<Real> out;
  const std::size_t n = eta.atoms_to_visit(lo, tol);
  for (std::size_t k = 0; k < n; ++k) {
    Real d = distance(eta.atom(k).location, eta.center());
    if (lo < d && d < hi) out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class Real>
bool is_continuity_radius(const AtomicMeasure<Real>& eta, const Real& r, const Real& tol) {
  return boundary_mass(eta, SetExpr<Real>::open_ball(eta.center(), r), tol).mass == Real(0);
}

inline double van_der_corput(std::uint64_t i) {
  double v = 0, base = 0.5;
  for (; i; i >>= 1, base *= 0.5)
    if (i & 1) v += base;
  return v;
}

}  // namespace detail

/// r in (lo, hi) whose sphere around x0 carries no eta0 mass. Candidates
/// are midpoints of the gaps between atom distances, widest first; a
/// van der Corput sweep is the fallback. Every candidate is verified.
template <class Real>
Real continuity_radius(const AtomicMeasure<Real>& eta0, const Real& lo, const Real& hi,
                       const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  if (!(Real(0) < lo) || !(lo < hi)) throw Error(ErrorCode::InvalidArgument, "continuity_radius: need 0 < lo < hi");
  auto dists = detail::atom_distances_between(eta0, lo, hi, tol);
  std::vector<Real> cuts;
  cuts.push_back(lo);
  cuts.insert(cuts.end(), dists.begin(), dists.end());
  cuts.push_back(hi);
  std::vector<std::pair<Real, Real>> gaps;  // (width, midpoint)
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    gaps.emplace_back(cuts[i + 1] - cuts[i], (cuts[i] + cuts[i + 1]) / Real(2));
  std::stable_sort(gaps.begin(), gaps.end(), [](const auto& a, const auto& b) { return b.first < a.first; });
  for (const auto& g : gaps)
    if (detail::is_continuity_radius(eta0, g.second, tol)) return g.second;

  constexpr std::uint64_t sweep = 4096;
  std::optional<Real> nearest_miss;
  for (std::uint64_t i = 1; i <= sweep; ++i) {
    Real r = lo + (hi - lo) * from_double<Real>(detail::van_der_corput(i));
    if (!(lo < r) || !(r < hi)) continue;
    if (detail::is_continuity_radius(eta0, r, tol)) return r;
    if (!nearest_miss) nearest_miss = r;
  }
  throw Error(ErrorCode::NotFound, "continuity_radius: every candidate in (" + detail::num(lo) + ", " + detail::num(hi) +
                                       ") hits an atom; nearest miss " +
                                       (nearest_miss ? detail::num(*nearest_miss) : std::string("none")));
}

/// r itself when its sphere carries no eta0 mass, otherwise the midpoint of
/// the narrower gap next to r among the atom distances.
template <class Real>
Real nearest_continuity_radius(const AtomicMeasure<Real>& eta0, const Real& r,
                               const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  if (!(Real(0) < r)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  if (detail::is_continuity_radius(eta0, r, tol)) return r;
  const Real lo = r / Real(2);
  const Real hi = r * Real(2);
  auto dists = detail::atom_distances_between(eta0, lo, hi, tol);
  Real left = lo, right = hi;
  for (const auto& d : dists) {
    if (d < r - tol) left = d;
    if (r + tol < d) {
      right = d;
      break;
    }
  }
  Real left_mid = (left + r) / Real(2);
  Real right_mid = (r + right) / Real(2);
  bool prefer_left = r - left < right - r;
  for (const Real& c : {prefer_left ? left_mid : right_mid, prefer_left ? right_mid : left_mid})
    if (detail::is_continuity_radius(eta0, c, tol)) return c;
  return continuity_radius(eta0, lo, hi, tol);
}

template <class Real>
struct LevelPartition {
  Real value;               // sum_i t_i * eta(B_i)
  Real mesh;                // max_i (t_{i+1} - t_i)
  Real mass_outside;        // eta(X \ A)
  Real excluded_radius;     // A = B(x0, excluded_radius), a continuity ball where f = 0
  std::vector<Real> grid;   // t_0 = -M < ... < t_k = M
  std::vector<Real> levels; // the bad level set D (atom images and 0), sorted
  Real error_bound() const { return mesh * mass_outside; }
};

/// Simple-function approximation of the integral of f: levels t_i avoid
/// every value f takes on an atom, and B_i = {x in X\A : t_i <= f(x) < t_{i+1}}.
template <class Real>
LevelPartition<Real> level_partition_integrate(const TestFunction<Real>& f, const AtomicMeasure<Real>& eta,
                                               const Real& eps, std::size_t max_refinements = 16) {
  if (!(Real(0) < eps)) throw Error(ErrorCode::InvalidArgument, "level_partition_integrate: eps must be positive");
  if (!f.vanishes_near_center())
    throw Error(ErrorCode::UnboundedIntegral, "level_partition_integrate: " + f.name() + " has no vanish radius");
  detail::require_matching_center(f, eta.center());
  const Real rho = f.vanish_radius();
  const Real half = rho / Real(2);

  // A = B(x0, rho_A), with rho_A strictly between the last atom distance
  // below rho and rho itself, so X \ A holds exactly the atoms at d >= rho.
  const std::size_t n = eta.atoms_to_visit(half, Real(0));
  Real inner = half;
  std::vector<std::pair<Real, Real>> outside;  // (f value, mass)
  for (std::size_t k = 0; k < n; ++k) {
    auto a = eta.atom(k);
    Real d = distance(a.location, eta.center());
    if (d < rho) {
      if (inner < d) inner = d;
    } else {
      outside.emplace_back(f(a.location), a.mass);
    }
  }
  const Real rho_a = (inner + rho) / Real(2);

  LevelPartition<Real> out{Real(0), Real(0), Real(0), rho_a, {}, {}};
  for (const auto& [v, m] : outside) out.mass_outside += m;
  out.levels.push_back(Real(0));
  for (const auto& [v, m] : outside) out.levels.push_back(v);
  std::sort(out.levels.begin(), out.levels.end());
  out.levels.erase(std::unique(out.levels.begin(), out.levels.end()), out.levels.end());
  const auto& levels = out.levels;
  auto is_level = [&](const Real& t) { return std::binary_search(levels.begin(), levels.end(), t); };

  // |f| <= bound < M, so -M and M avoid the level set automatically.
  const Real big_m = f.bound() * Real(65) / Real(64);
  std::size_t steps = scalar_traits<Real>::ceil_index(Real(4) * big_m / eps) + 1;
  for (std::size_t refinement = 0; refinement <= max_refinements; ++refinement, steps *= 2) {
    const Real h = Real(2) * big_m / Real(static_cast<long long>(steps));
    std::vector<Real> grid(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) grid[i] = -big_m + h * Real(static_cast<long long>(i));
    grid.back() = big_m;
    for (std::size_t i = 1; i < steps; ++i) {
      if (!is_level(grid[i])) continue;
      // Move t_i to the middle of the wider level-free gap next to it.
      const Real& left_edge = grid[i - 1];
      const Real& right_edge = grid[i + 1];
      auto pos = std::lower_bound(levels.begin(), levels.end(), grid[i]);
      Real below = pos == levels.begin() ? left_edge : max_of(left_edge, *std::prev(pos));
      Real above = std::next(pos) == levels.end() ? right_edge : min_of(right_edge, *std::next(pos));
      grid[i] = (grid[i] - below < above - grid[i]) ? Real((grid[i] + above) / Real(2)) : Real((below + grid[i]) / Real(2));
    }
    Real mesh(0);
    for (std::size_t i = 0; i < steps; ++i) mesh = max_of(mesh, Real(grid[i + 1] - grid[i]));
    if (!(mesh < eps)) continue;
    for (const auto& t : grid)
      if (is_level(t)) throw Error(ErrorCode::GridConstruction, "grid point coincides with an atom level");
    Real value(0);
    for (const auto& [v, m] : outside) {
      auto it = std::upper_bound(grid.begin(), grid.end(), v);
      value += *std::prev(it) * m;
    }
    out.value = value;
    out.mesh = mesh;
    out.grid = std::move(grid);
    return out;
  }
  throw Error(ErrorCode::GridConstruction, "level_partition_integrate: mesh did not drop below eps");
}

struct LipschitzCheck {
  bool passed;
  double worst_ratio;
  std::size_t pairs_tested;
};

/// Spot check of the declared Lipschitz constant on `pairs` deterministic
/// pairs around x0. Pair separations scale with 1/L so the ratio stays well
/// conditioned. Passes iff every ratio <= L * (1 + tau).
template <class Real>
LipschitzCheck lipschitz_check(const TestFunction<Real>& f, std::size_t pairs, std::uint64_t seed, double tau = 1e-12,
                               std::optional<double> region_radius = std::nullopt) {
  if (!f.lipschitz()) throw Error(ErrorCode::InvalidArgument, f.name() + " declares no Lipschitz constant");
  const double lip = to_double(*f.lipschitz());
  const double radius = region_radius.value_or(2.0 * (to_double(f.vanish_radius()) + 2.0 / lip + 1.0));
  const std::size_t d = f.center().dimension();
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto direction = [&] {
    std::vector<double> v(d);
    double norm = 0;
    do {
      norm = 0;
      for (auto& c : v) {
        c = 2.0 * unit() - 1.0;
        norm += c * c;
      }
    } while (norm == 0 || norm > 1);
    for (auto& c : v) c /= std::sqrt(norm);
    return v;
  };
  auto shift = [&](const Point<Real>& base, const std::vector<double>& dir, double len) {
    std::vector<Real> dr(d);
    for (std::size_t i = 0; i < d; ++i) dr[i] = from_double<Real>(dir[i] * len);
    return offset(base, dr, Real(1));
  };
  LipschitzCheck out{true, 0.0, 0};
  for (std::size_t i = 0; i < pairs; ++i) {
    Point<Real> x = shift(f.center(), direction(), radius * unit());
    double sep = (1e-3 + 2.0 * unit()) / lip;
    Point<Real> y = shift(x, direction(), sep);
    double dxy = to_double(distance(x, y));
    if (dxy == 0) continue;
    double ratio = std::fabs(to_double(Real(f(x) - f(y)))) / dxy;
    ++out.pairs_tested;
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (ratio > lip * (1.0 + tau)) out.passed = false;
  }
  return out;
}

}  // namespace portmanteau
