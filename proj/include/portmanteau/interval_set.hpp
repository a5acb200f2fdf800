#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "portmanteau/error.hpp"
#include "portmanteau/scalar.hpp"

namespace portmanteau {

enum class Location { Interior, Exterior, Boundary };

constexpr const char* to_string(Location loc) noexcept {
  switch (loc) {
    case Location::Interior: return "INTERIOR";
    case Location::Exterior: return "EXTERIOR";
    case Location::Boundary: return "BOUNDARY";
  }
  return "?";
}

/// One interval of the real line. A missing endpoint means unbounded on that
/// side (and is never closed).
template <class Real>
struct Interval {
  std::optional<Real> lo;
  std::optional<Real> hi;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval closed(Real a, Real b) { return {std::move(a), std::move(b), true, true}; }
  static Interval open(Real a, Real b) { return {std::move(a), std::move(b), false, false}; }
  static Interval point(const Real& a) { return {a, a, true, true}; }
  static Interval whole() { return {std::nullopt, std::nullopt, false, false}; }

  bool empty() const {
    if (!lo || !hi) return false;
    if (*lo < *hi) return false;
    return *lo == *hi ? !(lo_closed && hi_closed) : true;
  }

  bool contains(const Real& x) const {
    if (lo && (x < *lo || (x == *lo && !lo_closed))) return false;
    if (hi && (*hi < x || (x == *hi && !hi_closed))) return false;
    return true;
  }

  bool closure_contains(const Real& x) const { return (!lo || !(x < *lo)) && (!hi || !(*hi < x)); }

  std::string to_string() const {
    if (lo && hi && *lo == *hi) return "{" + scalar_traits<Real>::to_string(*lo) + "}";
    std::string out = lo_closed ? "[" : "(";
    out += lo ? scalar_traits<Real>::to_string(*lo) : "-inf";
    out += ", ";
    out += hi ? scalar_traits<Real>::to_string(*hi) : "inf";
    out += hi_closed ? "]" : ")";
    return out;
  }
};

/// Finite union of intervals kept in normal form: nonempty, sorted, pairwise
/// disjoint and non-adjacent. In normal form the topological boundary is
/// exactly the set of finite endpoints.
template <class Real>
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval<Real>> parts) : parts_(normalize(std::move(parts))) {}
  IntervalSet(std::initializer_list<Interval<Real>> parts) : IntervalSet(std::vector<Interval<Real>>(parts)) {}

  static IntervalSet whole() { return IntervalSet({Interval<Real>::whole()}); }

  const std::vector<Interval<Real>>& parts() const noexcept { return parts_; }
  bool empty() const noexcept { return parts_.empty(); }

  bool contains(const Real& x) const {
    return std::any_of(parts_.begin(), parts_.end(), [&](const auto& p) { return p.contains(x); });
  }

  /// Membership after snapping x onto a boundary point within `tol`.
  bool contains(const Real& x, const Real& tol) const {
    if (auto b = nearest_boundary(x); b && !(tol < abs_value<Real>(*b - x))) return contains(*b);
    return contains(x);
  }

  Location classify(const Real& x, const Real& tol) const {
    if (auto b = nearest_boundary(x); b && !(tol < abs_value<Real>(*b - x))) return Location::Boundary;
    return contains(x) ? Location::Interior : Location::Exterior;
  }

  std::vector<Real> boundary_points() const {
    std::vector<Real> pts;
    for (const auto& p : parts_) {
      if (p.lo) pts.push_back(*p.lo);
      if (p.hi && !(p.lo && *p.lo == *p.hi)) pts.push_back(*p.hi);
    }
    return pts;  // already sorted and distinct in normal form
  }

  std::optional<Real> nearest_boundary(const Real& x) const {
    std::optional<Real> best;
    std::optional<Real> best_gap;
    for (const auto& b : boundary_points()) {
      Real gap = abs_value<Real>(b - x);
      if (!best_gap || gap < *best_gap) {
        best_gap = gap;
        best = b;
      }
    }
    return best;
  }

  /// Distance from x to the set; zero iff x lies in the closure.
  Real distance(const Real& x) const {
    if (parts_.empty()) throw Error(ErrorCode::EmptySet, "distance to an empty set");
    std::optional<Real> best;
    for (const auto& p : parts_) {
      if (p.closure_contains(x)) return Real(0);
      Real gap = (p.lo && x < *p.lo) ? Real(*p.lo - x) : Real(x - *p.hi);
      if (!best || gap < *best) best = gap;
    }
    return *best;
  }

  IntervalSet complement() const {
    std::vector<Interval<Real>> gaps;
    if (parts_.empty()) return whole();
    std::optional<Real> prev;
    bool prev_closed = false;
    bool first = true;
    for (const auto& p : parts_) {
      if (p.lo) gaps.push_back({first ? std::nullopt : prev, p.lo, first ? false : !prev_closed, !p.lo_closed});
      first = false;
      prev = p.hi;
      prev_closed = p.hi_closed;
    }
    if (prev) gaps.push_back({prev, std::nullopt, !prev_closed, false});
    return IntervalSet(std::move(gaps));
  }

  IntervalSet unite(const IntervalSet& other) const {
    std::vector<Interval<Real>> all(parts_);
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return IntervalSet(std::move(all));
  }

  IntervalSet intersect(const IntervalSet& other) const {
    return complement().unite(other.complement()).complement();
  }

  IntervalSet subtract(const IntervalSet& other) const { return intersect(other.complement()); }

  bool subset_of(const IntervalSet& other) const { return subtract(other).empty(); }

  /// Open lambda-neighbourhood {x : d(x, S) < lambda}.
  IntervalSet enlarge(const Real& lambda) const {
    if (!(Real(0) < lambda)) throw Error(ErrorCode::InvalidArgument, "enlargement radius must be positive");
    std::vector<Interval<Real>> grown;
    for (const auto& p : parts_) {
      Interval<Real> g;
      if (p.lo) g.lo = *p.lo - lambda;
      if (p.hi) g.hi = *p.hi + lambda;
      grown.push_back(g);
    }
    return IntervalSet(std::move(grown));
  }

  bool is_open() const {
    return std::all_of(parts_.begin(), parts_.end(), [](const auto& p) {
      return !(p.lo && p.lo_closed) && !(p.hi && p.hi_closed);
    });
  }

  bool is_closed() const {
    return std::all_of(parts_.begin(), parts_.end(), [](const auto& p) {
      return (!p.lo || p.lo_closed) && (!p.hi || p.hi_closed);
    });
  }

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
    if (a.parts_.size() != b.parts_.size()) return false;
    for (std::size_t i = 0; i < a.parts_.size(); ++i) {
      const auto& x = a.parts_[i];
      const auto& y = b.parts_[i];
      if (x.lo != y.lo || x.hi != y.hi || x.lo_closed != y.lo_closed || x.hi_closed != y.hi_closed) return false;
    }
    return true;
  }

  std::string to_string() const {
    if (parts_.empty()) return "{}";
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) out += " U ";
      out += parts_[i].to_string();
    }
    return out;
  }

 private:
  static bool lo_before(const Interval<Real>& a, const Interval<Real>& b) {
    if (!a.lo) return b.lo.has_value();
    if (!b.lo) return false;
    if (*a.lo < *b.lo) return true;
    if (*b.lo < *a.lo) return false;
    return a.lo_closed && !b.lo_closed;
  }

  static std::vector<Interval<Real>> normalize(std::vector<Interval<Real>> parts) {
    for (auto& p : parts) {
      if (!p.lo) p.lo_closed = false;
      if (!p.hi) p.hi_closed = false;
    }
    parts.erase(std::remove_if(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); }), parts.end());
    std::sort(parts.begin(), parts.end(), lo_before);
    std::vector<Interval<Real>> out;
    for (auto& p : parts) {
      if (out.empty()) {
        out.push_back(std::move(p));
        continue;
      }
      auto& cur = out.back();
      bool touches = !cur.hi || !p.lo || *p.lo < *cur.hi || (*p.lo == *cur.hi && (cur.hi_closed || p.lo_closed));
      if (!touches) {
        out.push_back(std::move(p));
        continue;
      }
      if (cur.lo && p.lo && *cur.lo == *p.lo) cur.lo_closed = cur.lo_closed || p.lo_closed;
      if (!cur.hi) continue;
      if (!p.hi || *cur.hi < *p.hi) {
        cur.hi = p.hi;
        cur.hi_closed = p.hi_closed;
      } else if (*p.hi == *cur.hi) {
        cur.hi_closed = cur.hi_closed || p.hi_closed;
      }
    }
    return out;
  }

  std::vector<Interval<Real>> parts_;
};

}  // namespace portmanteau
