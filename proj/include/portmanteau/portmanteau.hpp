#pragma once

// Probe-level evaluators for the six equivalent convergence conditions of a
// sequence eta_n -> eta_0 of measures that are finite outside every
// neighbourhood of x0:
//
//   (i)   int_{X\U} f d eta_n -> int_{X\U} f d eta_0,   f in C(X), eta_0(dU) = 0
//   (ii)  eta_n|_{X\U} -> eta_0|_{X\U} weakly,            eta_0(dU) = 0
//   (iii) eta_n(X\U) -> eta_0(X\U),                       eta_0(dU) = 0
//   (iv)  int f d eta_n -> int f d eta_0,                 f in C_x0(X)
//   (v)   int f d eta_n -> int f d eta_0,                 f in BL_x0(X)
//   (vi)  (a) limsup eta_n(X\U) <= eta_0(X\U), U open neighbourhood
//         (b) liminf eta_n(X\V) >= eta_0(X\V), V closed neighbourhood
//
// A verdict is a statement about finitely many probes on a finite n-grid,
// never a proof of the universally quantified condition.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "portmanteau/error.hpp"
#include "portmanteau/function.hpp"
#include "portmanteau/limits.hpp"
#include "portmanteau/measure.hpp"
#include "portmanteau/point.hpp"
#include "portmanteau/set_expr.hpp"
#include "portmanteau/test_functions.hpp"

namespace portmanteau {

template <class Real>
struct MeasureFamily {
  Point<Real> x0;
  std::function<AtomicMeasure<Real>(std::size_t)> member;  // n >= 1
  AtomicMeasure<Real> limit;
  std::size_t n_max = std::size_t{1} << 16;
};

template <class Real>
struct ProbeRow {
  std::string probe;                       // human-readable label
  std::optional<SetExpr<Real>> region;     // the set actually probed, if any
  std::optional<std::string> function;     // test function name, if any
  std::optional<Real> requested_radius;
  std::optional<Real> radius;              // after continuity nudging
  std::vector<Real> values;                // s_n on the grid
  Real limit_value{0};                     // s_0
  std::vector<Real> residuals;
  Status status = Status::Indeterminate;
  Real limsup_estimate{0};
  Real liminf_estimate{0};
};

template <class Real>
struct Verdict {
  Verdict() = default;
  explicit Verdict(std::string name) : condition(std::move(name)) {}

  std::string condition;
  Status status = Status::Indeterminate;
  std::optional<std::size_t> witness;  // index into rows
  std::vector<ProbeRow<Real>> rows;
  std::vector<std::string> skipped;

  const ProbeRow<Real>* witness_row() const { return witness ? &rows[*witness] : nullptr; }
};

template <class Real>
struct CheckConfig {
  VerdictRules<Real> rules;
  Real geom_tol = scalar_traits<Real>::default_geom_tol();
  std::vector<Real> radii;
  std::vector<SetExpr<Real>> probe_sets;
  std::vector<SetExpr<Real>> open_probes;
  std::vector<SetExpr<Real>> closed_probes;
  std::vector<TestFunction<Real>> corpus;
};

/// Probe corpora used when a scenario does not supply its own.
template <class Real>
CheckConfig<Real> default_check_config(const Point<Real>& x0) {
  auto R = [](double v) { return from_double<Real>(v); };
  CheckConfig<Real> cfg;
  for (double r : {1.0, 0.5, 0.25, 0.1, 0.05, 1.5, 2.0, 2.5, 4.0}) cfg.radii.push_back(R(r));
  const std::size_t d = x0.dimension();
  if (d == 1) {
    const Real c = x0[0];
    auto closed = [&](double a, double b) { return SetExpr<Real>::closed_interval(c + R(a), c + R(b)); };
    auto open = [&](double a, double b) { return SetExpr<Real>::open_interval(c + R(a), c + R(b)); };
    cfg.probe_sets = {closed(-3, -0.25), closed(0.5, 1.5), closed(1.5, 2.5), closed(0.9, 1.6),
                      open(2, 5),        closed(0.25, 0.75), open(-1.5, -0.5)};
    for (auto [a, b] : std::vector<std::pair<double, double>>{{-1, 1}, {-0.5, 0.5}, {0.5, 2}, {-3, -0.25}, {1.5, 2.5}, {2.5, 4}}) {
      cfg.open_probes.push_back(open(a, b));
      cfg.closed_probes.push_back(closed(a, b));
    }
  } else {
    auto shifted = [&](double along) {
      std::vector<Real> e(d, Real(0));
      e[0] = Real(1);
      return offset(x0, e, R(along));
    };
    cfg.probe_sets = {SetExpr<Real>::closed_ball(shifted(2), R(1)), SetExpr<Real>::open_ball(shifted(1), R(0.5)),
                      SetExpr<Real>::closed_ball(shifted(-1.5), R(0.75))};
    for (auto [at, r] : std::vector<std::pair<double, double>>{{0, 1}, {0, 0.5}, {2, 1}, {-1.5, 0.75}}) {
      cfg.open_probes.push_back(SetExpr<Real>::open_ball(shifted(at), R(r)));
      cfg.closed_probes.push_back(SetExpr<Real>::closed_ball(shifted(at), R(r)));
    }
  }
  for (auto [inner, n0] : std::vector<std::pair<double, double>>{{0.5, 2}, {1, 1}, {1, 2}, {0.25, 4}, {2, 1}, {0.05, 10}})
    cfg.corpus.push_back(ball_bump(x0, R(inner), R(n0)));
  for (double a : {0.5, 1.0, 2.0}) cfg.corpus.push_back(c2_family(R(a), x0));
  if constexpr (!scalar_traits<Real>::exact) cfg.corpus.push_back(sqrt_capped(x0, R(0.5)));
  cfg.corpus.push_back(capped_polynomial(x0, {R(0), R(1), R(-0.5)}, R(0.3), R(1)));
  cfg.corpus.push_back(constant_function(Real(1), x0));
  cfg.corpus.push_back(distance_capped(x0, R(2)));
  return cfg;
}

namespace detail {

enum class ResidualKind { TwoSided, Excess, Deficit };

template <class Real>
void finish_row(ProbeRow<Real>& row, ResidualKind kind, const VerdictRules<Real>& rules) {
  row.residuals.clear();
  for (const auto& s : row.values) {
    Real diff = s - row.limit_value;
    switch (kind) {
      case ResidualKind::TwoSided: row.residuals.push_back(abs_value(diff)); break;
      case ResidualKind::Excess: row.residuals.push_back(max_of(diff, Real(0))); break;
      case ResidualKind::Deficit: row.residuals.push_back(max_of(Real(-diff), Real(0))); break;
    }
  }
  auto est = limit_estimators(row.values, rules.window);
  row.limsup_estimate = est.limsup_estimate;
  row.liminf_estimate = est.liminf_estimate;
  row.status = classify_residuals(row.residuals, rules);
}

template <class Real>
void aggregate(Verdict<Real>& v) {
  v.witness.reset();
  if (v.rows.empty()) {
    v.status = Status::Indeterminate;
    return;
  }
  for (std::size_t i = 0; i < v.rows.size(); ++i)
    if (v.rows[i].status == Status::Fails) {
      v.status = Status::Fails;
      v.witness = i;
      return;
    }
  for (std::size_t i = 0; i < v.rows.size(); ++i)
    if (v.rows[i].status == Status::Indeterminate) {
      v.status = Status::Indeterminate;
      v.witness = i;
      return;
    }
  v.status = Status::Holds;
}

/// Members evaluated once per grid point.
template <class Real>
struct GridMembers {
  std::vector<std::size_t> grid;
  std::vector<AtomicMeasure<Real>> members;

  explicit GridMembers(const MeasureFamily<Real>& fam) : grid(geometric_grid(fam.n_max)) {
    for (auto n : grid) {
      members.push_back(fam.member(n));
      if (!(members.back().center() == fam.x0))
        throw Error(ErrorCode::InvalidMeasure, "family member " + std::to_string(n) + " has a different x0");
    }
  }
};

template <class Real, class Stat>
ProbeRow<Real> evaluate_row(const MeasureFamily<Real>& fam, const GridMembers<Real>& gm, Stat&& stat,
                            ResidualKind kind, const VerdictRules<Real>& rules, ProbeRow<Real> row) {
  if (gm.grid.size() < rules.window)
    throw Error(ErrorCode::WindowTooLarge, "trend window " + std::to_string(rules.window) + " exceeds grid of " +
                                               std::to_string(gm.grid.size()) + " points");
  for (const auto& m : gm.members) row.values.push_back(stat(m));
  row.limit_value = stat(fam.limit);
  finish_row(row, kind, rules);
  return row;
}

template <class Real>
std::string radius_label(const Real& requested, const Real& used) {
  std::string label = "r=" + num(used);
  if (!(requested == used)) label += " (requested " + num(requested) + ")";
  return label;
}

template <class Real>
void require_radii(const std::vector<Real>& radii) {
  if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "probe radii must be nonempty");
  for (const auto& r : radii)
    if (!(Real(0) < r)) throw Error(ErrorCode::InvalidArgument, "probe radii must be positive");
}

}  // namespace detail

/// (iii): s_n = eta_n(X \ B(x0, r)) for continuity radii r of the limit.
template <class Real>
Verdict<Real> check_iii(const MeasureFamily<Real>& fam, const std::vector<Real>& radii, const CheckConfig<Real>& cfg) {
  detail::require_radii(radii);
  detail::GridMembers<Real> gm(fam);
  Verdict<Real> v("iii");
  for (const auto& requested : radii) {
    Real r = nearest_continuity_radius(fam.limit, requested, cfg.geom_tol);
    ProbeRow<Real> row;
    row.probe = detail::radius_label(requested, r);
    row.region = SetExpr<Real>::open_ball(fam.x0, r);
    row.requested_radius = requested;
    row.radius = r;
    v.rows.push_back(detail::evaluate_row(
        fam, gm, [&](const AtomicMeasure<Real>& m) { return mass_outside(m, r, true, cfg.geom_tol); },
        detail::ResidualKind::TwoSided, cfg.rules, std::move(row)));
  }
  detail::aggregate(v);
  return v;
}

/// (i): s_n = integral of f over X \ B(x0, r) against eta_n, for every f in
/// the corpus (all are bounded continuous; none needs to vanish near x0).
template <class Real>
Verdict<Real> check_i(const MeasureFamily<Real>& fam, const std::vector<TestFunction<Real>>& funcs,
                      const std::vector<Real>& radii, const CheckConfig<Real>& cfg) {
  detail::require_radii(radii);
  detail::GridMembers<Real> gm(fam);
  Verdict<Real> v("i");
  for (const auto& requested : radii) {
    Real r = nearest_continuity_radius(fam.limit, requested, cfg.geom_tol);
    auto window = complement_of(SetExpr<Real>::open_ball(fam.x0, r));
    for (const auto& f : funcs) {
      ProbeRow<Real> row;
      row.probe = detail::radius_label(requested, r) + ", f=" + f.name();
      row.region = SetExpr<Real>::open_ball(fam.x0, r);
      row.function = f.name();
      row.requested_radius = requested;
      row.radius = r;
      v.rows.push_back(detail::evaluate_row(
          fam, gm, [&](const AtomicMeasure<Real>& m) { return integrate(f, restrict(m, window), cfg.geom_tol); },
          detail::ResidualKind::TwoSided, cfg.rules, std::move(row)));
    }
  }
  detail::aggregate(v);
  return v;
}

/// (ii): weak convergence of the restrictions to X \ B(x0, r), tested on
/// every probe set A (plus X itself) whose boundary carries no mass of the
/// restricted limit; other probes are skipped and listed.
template <class Real>
Verdict<Real> check_ii(const MeasureFamily<Real>& fam, const std::vector<Real>& radii,
                       const std::vector<SetExpr<Real>>& probe_sets, const CheckConfig<Real>& cfg) {
  detail::require_radii(radii);
  detail::GridMembers<Real> gm(fam);
  Verdict<Real> v("ii");
  std::vector<SetExpr<Real>> probes{SetExpr<Real>::whole(fam.x0.dimension())};
  probes.insert(probes.end(), probe_sets.begin(), probe_sets.end());
  for (const auto& requested : radii) {
    Real r = nearest_continuity_radius(fam.limit, requested, cfg.geom_tol);
    auto window = complement_of(SetExpr<Real>::open_ball(fam.x0, r));
    for (const auto& a : probes) {
      std::string label = detail::radius_label(requested, r) + ", A=" + to_string(a);
      auto edge = boundary(a).set;
      if (!(mass_of(fam.limit, intersection_of(window, edge), cfg.geom_tol) == Real(0))) {
        v.skipped.push_back(label);
        continue;
      }
      ProbeRow<Real> row;
      row.probe = label;
      row.region = a;
      row.requested_radius = requested;
      row.radius = r;
      v.rows.push_back(detail::evaluate_row(
          fam, gm, [&](const AtomicMeasure<Real>& m) { return mass_of(restrict(m, window), a, cfg.geom_tol); },
          detail::ResidualKind::TwoSided, cfg.rules, std::move(row)));
    }
  }
  detail::aggregate(v);
  return v;
}

namespace detail {

template <class Real, class Pred>
Verdict<Real> integral_check(const char* name, const MeasureFamily<Real>& fam,
                             const std::vector<TestFunction<Real>>& funcs, const CheckConfig<Real>& cfg, Pred keep) {
  detail::GridMembers<Real> gm(fam);
  Verdict<Real> v(name);
  for (const auto& f : funcs) {
    if (!keep(f)) continue;
    ProbeRow<Real> row;
    row.probe = "f=" + f.name();
    row.function = f.name();
    v.rows.push_back(detail::evaluate_row(
        fam, gm, [&](const AtomicMeasure<Real>& m) { return integrate(f, m); }, detail::ResidualKind::TwoSided,
        cfg.rules, std::move(row)));
  }
  aggregate(v);
  return v;
}

}  // namespace detail

/// (iv): integrals of the corpus members that vanish near x0.
template <class Real>
Verdict<Real> check_iv(const MeasureFamily<Real>& fam, const std::vector<TestFunction<Real>>& funcs,
                       const CheckConfig<Real>& cfg) {
  return detail::integral_check("iv", fam, funcs, cfg, [](const auto& f) { return f.vanishes_near_center(); });
}

/// (v): integrals of the bounded Lipschitz corpus members vanishing near x0.
template <class Real>
Verdict<Real> check_v(const MeasureFamily<Real>& fam, const std::vector<TestFunction<Real>>& funcs,
                      const CheckConfig<Real>& cfg) {
  return detail::integral_check("v", fam, funcs, cfg, [](const auto& f) { return f.is_bounded_lipschitz(); });
}

/// (vi): (a) on open balls U and (b) on closed balls V around x0, with
/// limsup / liminf estimated by the trailing-window max / min. Radii are used
/// as given; no continuity requirement applies here.
template <class Real>
std::pair<Verdict<Real>, Verdict<Real>> check_vi(const MeasureFamily<Real>& fam, const std::vector<Real>& radii,
                                                 const CheckConfig<Real>& cfg) {
  detail::require_radii(radii);
  detail::GridMembers<Real> gm(fam);
  Verdict<Real> a("vi_a"), b("vi_b");
  for (const auto& r : radii) {
    ProbeRow<Real> open_row;
    open_row.region = SetExpr<Real>::open_ball(fam.x0, r);
    open_row.probe = "U=" + to_string(*open_row.region);
    open_row.radius = r;
    a.rows.push_back(detail::evaluate_row(
        fam, gm, [&](const AtomicMeasure<Real>& m) { return mass_outside(m, r, true, cfg.geom_tol); },
        detail::ResidualKind::Excess, cfg.rules, std::move(open_row)));

    ProbeRow<Real> closed_row;
    closed_row.region = SetExpr<Real>::closed_ball(fam.x0, r);
    closed_row.probe = "V=" + to_string(*closed_row.region);
    closed_row.radius = r;
    b.rows.push_back(detail::evaluate_row(
        fam, gm, [&](const AtomicMeasure<Real>& m) { return mass_outside(m, r, false, cfg.geom_tol); },
        detail::ResidualKind::Deficit, cfg.rules, std::move(closed_row)));
  }
  detail::aggregate(a);
  detail::aggregate(b);
  return {std::move(a), std::move(b)};
}

template <class Real>
bool is_bounded_family(const MeasureFamily<Real>& fam) {
  if (!fam.limit.is_finite()) return false;
  for (auto n : geometric_grid(fam.n_max))
    if (!fam.member(n).is_finite()) return false;
  return true;
}

namespace detail {

template <class Real>
Verdict<Real> bounded_probe_check(const char* name, const MeasureFamily<Real>& fam,
                                  const std::vector<SetExpr<Real>>& probes, bool open, const CheckConfig<Real>& cfg) {
  if (!is_bounded_family(fam))
    throw Error(ErrorCode::UnboundedRegion, std::string(name) + " needs finite measures throughout the family");
  detail::GridMembers<Real> gm(fam);
  Verdict<Real> v(name);
  for (const auto& s : probes) {
    auto ok = open ? is_open_set(s) : is_closed_set(s);
    if (!ok || !*ok)
      throw Error(ErrorCode::InvalidArgument, to_string(s) + (open ? " is not an open set" : " is not a closed set"));
    ProbeRow<Real> row;
    row.probe = (open ? "A=" : "F=") + to_string(s);
    row.region = s;
    v.rows.push_back(evaluate_row(
        fam, gm, [&](const AtomicMeasure<Real>& m) { return mass_of(m, s, cfg.geom_tol); },
        open ? ResidualKind::Deficit : ResidualKind::Excess, cfg.rules, std::move(row)));
  }
  aggregate(v);
  return v;
}

}  // namespace detail

/// Bounded-measure half: mu(A) <= liminf mu_n(A) for open A.
template <class Real>
Verdict<Real> check_open_liminf(const MeasureFamily<Real>& fam, const std::vector<SetExpr<Real>>& open_probes,
                                const CheckConfig<Real>& cfg) {
  return detail::bounded_probe_check("open_liminf", fam, open_probes, true, cfg);
}

/// Bounded-measure half: limsup mu_n(F) <= mu(F) for closed F.
template <class Real>
Verdict<Real> check_closed_limsup(const MeasureFamily<Real>& fam, const std::vector<SetExpr<Real>>& closed_probes,
                                  const CheckConfig<Real>& cfg) {
  return detail::bounded_probe_check("closed_limsup", fam, closed_probes, false, cfg);
}

template <class Real>
struct Report {
  std::vector<std::size_t> grid;
  std::vector<Verdict<Real>> conditions;  // i, ii, iii, iv, v, vi_a, vi_b
  Status vi = Status::Indeterminate;      // (a) and (b) combined
  std::optional<Verdict<Real>> open_liminf;
  std::optional<Verdict<Real>> closed_limsup;
  bool consistent = false;
  std::size_t probes = 0;
  std::size_t evaluations = 0;  // statistic evaluations, limits included

  const Verdict<Real>& condition(const std::string& name) const {
    for (const auto& v : conditions)
      if (v.condition == name) return v;
    throw Error(ErrorCode::InvalidArgument, "no condition named " + name);
  }

  /// Status of i..v and vi (combined) in that order.
  std::vector<std::pair<std::string, Status>> equivalence_statuses() const {
    std::vector<std::pair<std::string, Status>> out;
    for (const char* c : {"i", "ii", "iii", "iv", "v"}) out.emplace_back(c, condition(c).status);
    out.emplace_back("vi", vi);
    return out;
  }
};

inline Status combine_vi(Status a, Status b) {
  if (a == Status::Fails || b == Status::Fails) return Status::Fails;
  if (a == Status::Holds && b == Status::Holds) return Status::Holds;
  return Status::Indeterminate;
}

/// Runs every evaluator on shared probe corpora. The report is consistent
/// when all decided conditions (i)-(vi) agree, as the equivalence demands.
template <class Real>
Report<Real> cross_check(const MeasureFamily<Real>& fam, const CheckConfig<Real>& cfg) {
  Report<Real> rep;
  rep.grid = geometric_grid(fam.n_max);
  rep.conditions.push_back(check_i(fam, cfg.corpus, cfg.radii, cfg));
  rep.conditions.push_back(check_ii(fam, cfg.radii, cfg.probe_sets, cfg));
  rep.conditions.push_back(check_iii(fam, cfg.radii, cfg));
  rep.conditions.push_back(check_iv(fam, cfg.corpus, cfg));
  rep.conditions.push_back(check_v(fam, cfg.corpus, cfg));
  auto [a, b] = check_vi(fam, cfg.radii, cfg);
  rep.vi = combine_vi(a.status, b.status);
  rep.conditions.push_back(std::move(a));
  rep.conditions.push_back(std::move(b));
  if (is_bounded_family(fam)) {
    rep.open_liminf = check_open_liminf(fam, cfg.open_probes, cfg);
    rep.closed_limsup = check_closed_limsup(fam, cfg.closed_probes, cfg);
  }

  std::optional<Status> decided;
  rep.consistent = true;
  for (const auto& [name, status] : rep.equivalence_statuses()) {
    if (status == Status::Indeterminate) continue;
    if (decided && *decided != status) rep.consistent = false;
    decided = status;
  }
  auto count = [&](const Verdict<Real>& v) {
    rep.probes += v.rows.size();
    rep.evaluations += v.rows.size() * (rep.grid.size() + 1);
  };
  for (const auto& v : rep.conditions) count(v);
  if (rep.open_liminf) count(*rep.open_liminf);
  if (rep.closed_limsup) count(*rep.closed_limsup);
  return rep;
}

}  // namespace portmanteau
