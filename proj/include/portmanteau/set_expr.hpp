#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "portmanteau/error.hpp"
#include "portmanteau/interval_set.hpp"
#include "portmanteau/point.hpp"
#include "portmanteau/scalar.hpp"

namespace portmanteau {

template <class Real>
class SetExpr;

template <class Real>
struct OpenBallNode {
  Point<Real> center;
  Real radius;
};

template <class Real>
struct ClosedBallNode {
  Point<Real> center;
  Real radius;
};

template <class Real>
struct IntervalNode {
  Interval<Real> interval;
};

struct WholeNode {
  std::size_t dimension;
};

struct EmptyNode {
  std::size_t dimension;
};

template <class Real>
struct ComplementNode {
  SetExpr<Real> child;
};

template <class Real>
struct UnionNode {
  std::vector<SetExpr<Real>> children;
};

template <class Real>
struct IntersectionNode {
  std::vector<SetExpr<Real>> children;
};

/// Immutable expression tree over balls, 1-D intervals, complements and
/// finite unions/intersections. Cheap to copy (shared structure).
template <class Real>
class SetExpr {
 public:
  using Node = std::variant<OpenBallNode<Real>, ClosedBallNode<Real>, IntervalNode<Real>, WholeNode, EmptyNode,
                            ComplementNode<Real>, UnionNode<Real>, IntersectionNode<Real>>;

  static SetExpr open_ball(Point<Real> center, Real radius) {
    check_radius(radius);
    std::size_t d = center.dimension();
    return SetExpr(OpenBallNode<Real>{std::move(center), std::move(radius)}, d);
  }

  static SetExpr closed_ball(Point<Real> center, Real radius) {
    check_radius(radius);
    std::size_t d = center.dimension();
    return SetExpr(ClosedBallNode<Real>{std::move(center), std::move(radius)}, d);
  }

  static SetExpr interval(Interval<Real> iv) {
    if (iv.lo && iv.hi && *iv.hi < *iv.lo) throw Error(ErrorCode::InvalidArgument, "interval with lo > hi");
    for (const auto* e : {&iv.lo, &iv.hi})
      if (*e && !scalar_traits<Real>::is_finite(**e)) throw Error(ErrorCode::InvalidArgument, "non-finite endpoint");
    if (!iv.lo) iv.lo_closed = false;
    if (!iv.hi) iv.hi_closed = false;
    return SetExpr(IntervalNode<Real>{std::move(iv)}, 1);
  }

  static SetExpr closed_interval(Real lo, Real hi) { return interval(Interval<Real>::closed(lo, hi)); }
  static SetExpr open_interval(Real lo, Real hi) { return interval(Interval<Real>::open(lo, hi)); }

  static SetExpr whole(std::size_t dimension) { return SetExpr(WholeNode{dimension}, dimension); }
  static SetExpr empty(std::size_t dimension) { return SetExpr(EmptyNode{dimension}, dimension); }

  static SetExpr complement(SetExpr child) {
    std::size_t d = child.dimension();
    return SetExpr(ComplementNode<Real>{std::move(child)}, d);
  }

  static SetExpr unite(std::vector<SetExpr> children) {
    std::size_t d = common_dimension(children);
    return SetExpr(UnionNode<Real>{std::move(children)}, d);
  }

  static SetExpr intersect(std::vector<SetExpr> children) {
    std::size_t d = common_dimension(children);
    return SetExpr(IntersectionNode<Real>{std::move(children)}, d);
  }

  const Node& node() const noexcept { return *node_; }
  std::size_t dimension() const noexcept { return dimension_; }

 private:
  SetExpr(Node node, std::size_t dimension)
      : node_(std::make_shared<const Node>(std::move(node))), dimension_(dimension) {}

  static void check_radius(const Real& r) {
    if (!(Real(0) < r) || !scalar_traits<Real>::is_finite(r))
      throw Error(ErrorCode::InvalidArgument, "ball radius must be positive and finite");
  }

  static std::size_t common_dimension(const std::vector<SetExpr>& children) {
    if (children.empty()) throw Error(ErrorCode::InvalidArgument, "union/intersection needs at least one operand");
    std::size_t d = children.front().dimension();
    for (const auto& c : children)
      if (c.dimension() != d) throw Error(ErrorCode::DimensionMismatch, "set operands of different dimension");
    return d;
  }

  std::shared_ptr<const Node> node_;
  std::size_t dimension_;
};

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

template <class Real>
SetExpr<Real> complement_of(SetExpr<Real> s) {
  return SetExpr<Real>::complement(std::move(s));
}

template <class Real>
SetExpr<Real> intersection_of(SetExpr<Real> a, SetExpr<Real> b) {
  return SetExpr<Real>::intersect({std::move(a), std::move(b)});
}

template <class Real>
SetExpr<Real> union_of(SetExpr<Real> a, SetExpr<Real> b) {
  return SetExpr<Real>::unite({std::move(a), std::move(b)});
}

/// Exact conversion of a 1-D expression to normalized interval algebra.
template <class Real>
IntervalSet<Real> to_interval_set(const SetExpr<Real>& s) {
  if (s.dimension() != 1) throw Error(ErrorCode::InexactFragment, "interval algebra requires dimension 1");
  return std::visit(
      overloaded{
          [](const OpenBallNode<Real>& b) {
            return IntervalSet<Real>({Interval<Real>::open(b.center[0] - b.radius, b.center[0] + b.radius)});
          },
          [](const ClosedBallNode<Real>& b) {
            return IntervalSet<Real>({Interval<Real>::closed(b.center[0] - b.radius, b.center[0] + b.radius)});
          },
          [](const IntervalNode<Real>& n) { return IntervalSet<Real>({n.interval}); },
          [](const WholeNode&) { return IntervalSet<Real>::whole(); },
          [](const EmptyNode&) { return IntervalSet<Real>(); },
          [](const ComplementNode<Real>& n) { return to_interval_set(n.child).complement(); },
          [](const UnionNode<Real>& n) {
            IntervalSet<Real> acc;
            for (const auto& c : n.children) acc = acc.unite(to_interval_set(c));
            return acc;
          },
          [](const IntersectionNode<Real>& n) {
            IntervalSet<Real> acc = IntervalSet<Real>::whole();
            for (const auto& c : n.children) acc = acc.intersect(to_interval_set(c));
            return acc;
          },
      },
      s.node());
}

namespace detail {

template <class Real>
struct BallView {
  const Point<Real>* center;
  const Real* radius;
  bool closed;
  bool negated;  // odd number of complements above the ball
};

/// A ball seen through any number of complements, or nothing.
template <class Real>
std::optional<BallView<Real>> single_ball(const SetExpr<Real>& s) {
  bool negated = false;
  const SetExpr<Real>* cur = &s;
  while (auto* c = std::get_if<ComplementNode<Real>>(&cur->node())) {
    negated = !negated;
    cur = &c->child;
  }
  if (auto* b = std::get_if<OpenBallNode<Real>>(&cur->node())) return BallView<Real>{&b->center, &b->radius, false, negated};
  if (auto* b = std::get_if<ClosedBallNode<Real>>(&cur->node())) return BallView<Real>{&b->center, &b->radius, true, negated};
  return std::nullopt;
}

/// Whole or Empty seen through complements: returns true for whole.
template <class Real>
std::optional<bool> trivial_set(const SetExpr<Real>& s) {
  bool negated = false;
  const SetExpr<Real>* cur = &s;
  while (auto* c = std::get_if<ComplementNode<Real>>(&cur->node())) {
    negated = !negated;
    cur = &c->child;
  }
  if (std::holds_alternative<WholeNode>(cur->node())) return !negated;
  if (std::holds_alternative<EmptyNode>(cur->node())) return negated;
  return std::nullopt;
}

template <class Real>
bool ball_contains(const Point<Real>& center, const Real& radius, bool closed, const Point<Real>& p, const Real& tol) {
  Real d = distance(p, center);
  if (!(tol < abs_value<Real>(d - radius))) return closed;
  return d < radius;
}

template <class Real>
void collect_balls(const SetExpr<Real>& s, std::vector<std::pair<Point<Real>, Real>>& out) {
  std::visit(overloaded{
                 [&](const OpenBallNode<Real>& b) { out.emplace_back(b.center, b.radius); },
                 [&](const ClosedBallNode<Real>& b) { out.emplace_back(b.center, b.radius); },
                 [&](const IntervalNode<Real>&) {},
                 [&](const WholeNode&) {},
                 [&](const EmptyNode&) {},
                 [&](const ComplementNode<Real>& n) { collect_balls(n.child, out); },
                 [&](const UnionNode<Real>& n) {
                   for (const auto& c : n.children) collect_balls(c, out);
                 },
                 [&](const IntersectionNode<Real>& n) {
                   for (const auto& c : n.children) collect_balls(c, out);
                 },
             },
             s.node());
}

// Lower bound on d(p, S) (negated: on d(p, X\S)). nullopt stands for +inf,
// i.e. the set is known to be empty.
template <class Real>
std::optional<Real> distance_lower_bound(const SetExpr<Real>& s, const Point<Real>& p, bool negated) {
  auto combine_min = [](std::optional<Real> a, const std::optional<Real>& b) -> std::optional<Real> {
    if (!a) return b;
    if (!b) return a;
    return min_of(*a, *b);
  };
  auto combine_max = [](std::optional<Real> a, const std::optional<Real>& b) -> std::optional<Real> {
    if (!a || !b) return std::nullopt;
    return max_of(*a, *b);
  };
  auto ball = [&](const Point<Real>& c, const Real& r) -> std::optional<Real> {
    Real d = distance(p, c);
    Real gap = negated ? Real(r - d) : Real(d - r);
    return max_of(gap, Real(0));
  };
  return std::visit(
      overloaded{
          [&](const OpenBallNode<Real>& b) { return ball(b.center, b.radius); },
          [&](const ClosedBallNode<Real>& b) { return ball(b.center, b.radius); },
          [&](const IntervalNode<Real>&) -> std::optional<Real> {
            throw Error(ErrorCode::DimensionMismatch, "interval leaf in dimension > 1");
          },
          [&](const WholeNode&) { return negated ? std::optional<Real>() : std::optional<Real>(Real(0)); },
          [&](const EmptyNode&) { return negated ? std::optional<Real>(Real(0)) : std::optional<Real>(); },
          [&](const ComplementNode<Real>& n) { return distance_lower_bound(n.child, p, !negated); },
          [&](const UnionNode<Real>& n) {
            std::optional<Real> acc;
            bool first = true;
            for (const auto& c : n.children) {
              auto v = distance_lower_bound(c, p, negated);
              if (first) {
                acc = v;
                first = false;
              } else {
                acc = negated ? combine_max(acc, v) : combine_min(acc, v);
              }
            }
            return acc;
          },
          [&](const IntersectionNode<Real>& n) {
            std::optional<Real> acc;
            bool first = true;
            for (const auto& c : n.children) {
              auto v = distance_lower_bound(c, p, negated);
              if (first) {
                acc = v;
                first = false;
              } else {
                acc = negated ? combine_min(acc, v) : combine_max(acc, v);
              }
            }
            return acc;
          },
      },
      s.node());
}

}  // namespace detail

/// Inverse of to_interval_set.
template <class Real>
SetExpr<Real> from_interval_set(const IntervalSet<Real>& set) {
  if (set.empty()) return SetExpr<Real>::empty(1);
  std::vector<SetExpr<Real>> parts;
  for (const auto& p : set.parts()) parts.push_back(SetExpr<Real>::interval(p));
  if (parts.size() == 1) return parts.front();
  return SetExpr<Real>::unite(std::move(parts));
}

/// Openness on the exact fragment; nullopt when it cannot be decided.
template <class Real>
std::optional<bool> is_open_set(const SetExpr<Real>& s) {
  if (s.dimension() == 1) return to_interval_set(s).is_open();
  if (detail::trivial_set(s)) return true;
  if (auto b = detail::single_ball(s)) return b->closed == b->negated;
  return std::nullopt;
}

template <class Real>
std::optional<bool> is_closed_set(const SetExpr<Real>& s) {
  if (s.dimension() == 1) return to_interval_set(s).is_closed();
  if (detail::trivial_set(s)) return true;
  if (auto b = detail::single_ball(s)) return b->closed != b->negated;
  return std::nullopt;
}

/// True when boundary and classification are computed exactly: any 1-D
/// expression, or a single ball (possibly complemented) in any dimension.
template <class Real>
bool is_exact_fragment(const SetExpr<Real>& s) {
  return s.dimension() == 1 || detail::single_ball(s).has_value() || detail::trivial_set(s).has_value();
}

/// Membership. Points within `tol` of a leaf boundary are snapped onto it.
template <class Real>
bool contains(const SetExpr<Real>& s, const Point<Real>& p, const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  if (p.dimension() != s.dimension()) throw Error(ErrorCode::DimensionMismatch, "point and set dimension differ");
  if (s.dimension() == 1) return to_interval_set(s).contains(p[0], tol);
  return std::visit(overloaded{
                        [&](const OpenBallNode<Real>& b) { return detail::ball_contains(b.center, b.radius, false, p, tol); },
                        [&](const ClosedBallNode<Real>& b) { return detail::ball_contains(b.center, b.radius, true, p, tol); },
                        [&](const IntervalNode<Real>&) -> bool {
                          throw Error(ErrorCode::DimensionMismatch, "interval leaf in dimension > 1");
                        },
                        [&](const WholeNode&) { return true; },
                        [&](const EmptyNode&) { return false; },
                        [&](const ComplementNode<Real>& n) { return !contains(n.child, p, tol); },
                        [&](const UnionNode<Real>& n) {
                          for (const auto& c : n.children)
                            if (contains(c, p, tol)) return true;
                          return false;
                        },
                        [&](const IntersectionNode<Real>& n) {
                          for (const auto& c : n.children)
                            if (!contains(c, p, tol)) return false;
                          return true;
                        },
                    },
                    s.node());
}

template <class Real>
struct BoundaryResult {
  SetExpr<Real> set;
  bool exact;
};

template <class Real>
SetExpr<Real> sphere(const Point<Real>& center, const Real& radius) {
  return intersection_of(SetExpr<Real>::closed_ball(center, radius),
                         complement_of(SetExpr<Real>::open_ball(center, radius)));
}

/// Topological boundary. Exact on the exact fragment; elsewhere the union of
/// all leaf spheres, which contains the true boundary (exact = false).
template <class Real>
BoundaryResult<Real> boundary(const SetExpr<Real>& s) {
  if (s.dimension() == 1) {
    std::vector<SetExpr<Real>> pts;
    for (const auto& b : to_interval_set(s).boundary_points()) pts.push_back(SetExpr<Real>::interval(Interval<Real>::point(b)));
    if (pts.empty()) return {SetExpr<Real>::empty(1), true};
    if (pts.size() == 1) return {pts.front(), true};
    return {SetExpr<Real>::unite(std::move(pts)), true};
  }
  if (detail::trivial_set(s)) return {SetExpr<Real>::empty(s.dimension()), true};
  if (auto ball = detail::single_ball(s)) return {sphere(*ball->center, *ball->radius), true};
  std::vector<std::pair<Point<Real>, Real>> balls;
  detail::collect_balls(s, balls);
  std::vector<SetExpr<Real>> spheres;
  for (const auto& [c, r] : balls) spheres.push_back(sphere(c, r));
  if (spheres.empty()) return {SetExpr<Real>::empty(s.dimension()), false};
  return {SetExpr<Real>::unite(std::move(spheres)), false};
}

template <class Real>
Location classify(const SetExpr<Real>& s, const Point<Real>& p, const Real& tol = scalar_traits<Real>::default_geom_tol()) {
  if (p.dimension() != s.dimension()) throw Error(ErrorCode::DimensionMismatch, "point and set dimension differ");
  if (s.dimension() == 1) return to_interval_set(s).classify(p[0], tol);
  if (auto whole = detail::trivial_set(s)) return *whole ? Location::Interior : Location::Exterior;
  if (auto ball = detail::single_ball(s)) {
    Real d = distance(p, *ball->center);
    if (!(tol < abs_value<Real>(d - *ball->radius))) return Location::Boundary;
    bool inside = (d < *ball->radius) != ball->negated;
    return inside ? Location::Interior : Location::Exterior;
  }
  throw Error(ErrorCode::InexactFragment, "classification of nested expressions in dimension > 1");
}

/// True if p lies (within tol) on some leaf sphere or interval endpoint,
/// i.e. in the conservative boundary superset.
template <class Real>
bool on_leaf_boundary(const SetExpr<Real>& s, const Point<Real>& p, const Real& tol) {
  if (s.dimension() == 1) return to_interval_set(s).classify(p[0], tol) == Location::Boundary;
  std::vector<std::pair<Point<Real>, Real>> balls;
  detail::collect_balls(s, balls);
  for (const auto& [c, r] : balls)
    if (!(tol < abs_value<Real>(distance(p, c) - r))) return true;
  return false;
}

template <class Real>
struct DistanceResult {
  Real value;
  bool exact;  // false: `value` is a certified lower bound
};

/// d(p, S) = inf over z in S of d(p, z). Closed form on the exact fragment;
/// otherwise a lower bound obtained by pushing complements to the leaves.
template <class Real>
DistanceResult<Real> dist_to_set(const Point<Real>& p, const SetExpr<Real>& s) {
  if (p.dimension() != s.dimension()) throw Error(ErrorCode::DimensionMismatch, "point and set dimension differ");
  if (s.dimension() == 1) return {to_interval_set(s).distance(p[0]), true};
  bool exact = is_exact_fragment(s);
  auto lb = detail::distance_lower_bound(s, p, false);
  if (!lb) throw Error(ErrorCode::EmptySet, "distance to a set that is empty by construction");
  return {*lb, exact};
}

/// Distance from p to the (conservative) boundary of S; nullopt when the
/// boundary is empty.
template <class Real>
std::optional<DistanceResult<Real>> dist_to_boundary(const Point<Real>& p, const SetExpr<Real>& s) {
  if (s.dimension() == 1) {
    auto pts = to_interval_set(s).boundary_points();
    if (pts.empty()) return std::nullopt;
    Real best = abs_value<Real>(pts.front() - p[0]);
    for (const auto& b : pts) best = min_of(best, abs_value<Real>(b - p[0]));
    return DistanceResult<Real>{best, true};
  }
  std::vector<std::pair<Point<Real>, Real>> balls;
  detail::collect_balls(s, balls);
  if (balls.empty()) return std::nullopt;
  std::optional<Real> best;
  for (const auto& [c, r] : balls) {
    Real g = abs_value<Real>(distance(p, c) - r);
    if (!best || g < *best) best = g;
  }
  return DistanceResult<Real>{*best, is_exact_fragment(s)};
}

template <class Real>
std::string to_string(const SetExpr<Real>& s) {
  if (s.dimension() == 1) return to_interval_set(s).to_string();
  return std::visit(overloaded{
                        [](const OpenBallNode<Real>& b) {
                          return "B(" + b.center.to_string() + ", " + scalar_traits<Real>::to_string(b.radius) + ")";
                        },
                        [](const ClosedBallNode<Real>& b) {
                          return "B[" + b.center.to_string() + ", " + scalar_traits<Real>::to_string(b.radius) + "]";
                        },
                        [](const IntervalNode<Real>& n) { return n.interval.to_string(); },
                        [](const WholeNode&) { return std::string("X"); },
                        [](const EmptyNode&) { return std::string("{}"); },
                        [](const ComplementNode<Real>& n) { return "X\\" + to_string(n.child); },
                        [](const UnionNode<Real>& n) {
                          std::string out = "(";
                          for (std::size_t i = 0; i < n.children.size(); ++i)
                            out += (i ? " U " : "") + to_string(n.children[i]);
                          return out + ")";
                        },
                        [](const IntersectionNode<Real>& n) {
                          std::string out = "(";
                          for (std::size_t i = 0; i < n.children.size(); ++i)
                            out += (i ? " n " : "") + to_string(n.children[i]);
                          return out + ")";
                        },
                    },
                    s.node());
}

struct InclusionCheck {
  bool holds;
  std::size_t checked;  // boundary points examined
  bool exact;
};

/// Checks the boundary inclusion
///   boundary(B n (X\U))  is a subset of  (boundary(B) n (X\U)) U boundary(U).
/// In one dimension every boundary point is enumerated exactly; otherwise
/// `samples` points are drawn on the leaf spheres and tested locally.
template <class Real>
InclusionCheck boundary_inclusion_check(const SetExpr<Real>& b, const SetExpr<Real>& u, std::size_t samples = 0,
                                        std::uint64_t seed = 1) {
  if (b.dimension() != u.dimension()) throw Error(ErrorCode::DimensionMismatch, "B and U dimension differ");
  if (b.dimension() == 1) {
    auto bs = to_interval_set(b);
    auto us = to_interval_set(u);
    auto lhs = bs.intersect(us.complement());
    auto db = bs.boundary_points();
    auto du = us.boundary_points();
    auto in = [](const std::vector<Real>& v, const Real& x) { return std::find(v.begin(), v.end(), x) != v.end(); };
    std::size_t checked = 0;
    for (const auto& x : lhs.boundary_points()) {
      ++checked;
      bool rhs = (in(db, x) && !us.contains(x)) || in(du, x);
      if (!rhs) return {false, checked, true};
    }
    return {true, checked, true};
  }

  // Sampled mode (double-valued geometry only).
  const std::size_t d = b.dimension();
  std::vector<std::pair<Point<Real>, Real>> balls;
  detail::collect_balls(b, balls);
  detail::collect_balls(u, balls);
  if (balls.empty() || samples == 0) return {true, 0, false};
  auto diff = intersection_of(b, complement_of(u));
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const Real tol = scalar_traits<Real>::default_geom_tol();
  const Real h = from_double<Real>(1e-6);
  auto locally_boundary = [&](const SetExpr<Real>& s, const Point<Real>& p) {
    bool centre = contains(s, p, tol);
    for (std::size_t axis = 0; axis < d; ++axis)
      for (int sign : {-1, 1}) {
        std::vector<Real> e(d, Real(0));
        e[axis] = from_double<Real>(sign);
        if (contains(s, offset(p, e, h), Real(0)) != centre) return true;
      }
    return false;
  };
  std::size_t checked = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto& [c, r] = balls[i % balls.size()];
    std::vector<Real> dir(d);
    double norm = 0;
    for (auto& x : dir) {
      double g = unit() * 2.0 - 1.0;
      x = from_double<Real>(g);
      norm += g * g;
    }
    if (norm == 0) continue;
    Real scale = r / from_double<Real>(std::sqrt(norm));
    Point<Real> p = offset(c, dir, scale);
    if (!locally_boundary(diff, p)) continue;
    ++checked;
    bool rhs = (locally_boundary(b, p) && !contains(u, p, tol)) || locally_boundary(u, p);
    if (!rhs) return {false, checked, false};
  }
  return {true, checked, false};
}

}  // namespace portmanteau
