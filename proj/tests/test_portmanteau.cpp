#include <gtest/gtest.h>

#include <vector>

#include "portmanteau/limits.hpp"
#include "portmanteau/portmanteau.hpp"
#include "portmanteau/power_law.hpp"

using namespace portmanteau;

namespace {

using P = Point<double>;
using M = AtomicMeasure<double>;
using S = SetExpr<double>;

const P origin{0.0};

M dirac(double at, double mass = 1.0) { return M::finite(origin, {{P{at}, mass}}, at == 0.0); }

MeasureFamily<double> family(std::function<M(std::size_t)> member, M limit, std::size_t n_max = 1 << 16) {
  return {origin, std::move(member), std::move(limit), n_max};
}

}  // namespace

TEST(Limits, GeometricGrid) {
  EXPECT_EQ(geometric_grid(1), std::vector<std::size_t>{1});
  EXPECT_EQ(geometric_grid(16), (std::vector<std::size_t>{1, 2, 4, 8, 16}));
  EXPECT_EQ(geometric_grid(20), (std::vector<std::size_t>{1, 2, 4, 8, 16, 20}));
  EXPECT_EQ(geometric_grid(1 << 16).size(), 17u);
  EXPECT_THROW(geometric_grid(0), Error);
}

TEST(Limits, Estimators) {
  auto c = limit_estimators(std::vector<double>(8, 3.0), 5);
  EXPECT_EQ(c.last, 3.0);
  EXPECT_EQ(c.limsup_estimate, 3.0);
  EXPECT_EQ(c.liminf_estimate, 3.0);
  EXPECT_EQ(c.trend, Trend::Constant);

  std::vector<double> dec;
  for (auto n : geometric_grid(1024)) dec.push_back(1.0 + 1.0 / n);
  auto d = limit_estimators(dec, 5);
  EXPECT_DOUBLE_EQ(d.last, 1.0 + 1.0 / 1024);
  EXPECT_EQ(d.trend, Trend::Decreasing);

  auto o = limit_estimators(std::vector<double>{0, 1, 0, 1, 0, 1, 0, 1}, 5);
  EXPECT_EQ(o.limsup_estimate, 1.0);
  EXPECT_EQ(o.liminf_estimate, 0.0);
  EXPECT_EQ(o.trend, Trend::Oscillating);

  auto inc = limit_estimators(std::vector<double>{1, 2, 3, 4, 5}, 5);
  EXPECT_EQ(inc.trend, Trend::Increasing);
  EXPECT_THROW(limit_estimators(std::vector<double>{1, 2}, 5), Error);
}

TEST(Limits, ResidualClassification) {
  VerdictRules<double> rules;
  std::vector<double> zero(17, 0.0);
  EXPECT_EQ(classify_residuals(zero, rules), Status::Holds);
  std::vector<double> eventually(17, 0.0);
  eventually[0] = eventually[1] = 1.0;
  EXPECT_EQ(classify_residuals(eventually, rules), Status::Holds);
  std::vector<double> stuck(17, 1.0);
  EXPECT_EQ(classify_residuals(stuck, rules), Status::Fails);
  std::vector<double> harmonic_rate;
  for (auto n : geometric_grid(1 << 16)) harmonic_rate.push_back(1.0 / n);
  EXPECT_EQ(classify_residuals(harmonic_rate, rules), Status::Holds);
  std::vector<double> slow;  // 1/log2(n+1) decays too slowly to be told apart from a plateau
  for (auto n : geometric_grid(1 << 16)) slow.push_back(1.0 / std::log2(n + 1.0));
  EXPECT_EQ(classify_residuals(slow, rules), Status::Fails);
  std::vector<double> wobble(17, 0.0);
  for (std::size_t i = 0; i < wobble.size(); ++i) wobble[i] = (i % 2) ? 1e-4 : 2e-4;
  EXPECT_EQ(classify_residuals(wobble, rules), Status::Indeterminate);
  std::vector<double> shrinking_failure;  // still large and halving each step
  for (std::size_t i = 0; i < 17; ++i) shrinking_failure.push_back(std::ldexp(1e6, -int(i)));
  EXPECT_EQ(classify_residuals(shrinking_failure, rules), Status::Indeterminate);
}

TEST(Evaluators, DiracShiftReproducesTheAsymmetry) {
  auto fam = family([](std::size_t) { return dirac(2.0); }, dirac(0.0));
  auto cfg = default_check_config(origin);
  auto [a, b] = check_vi(fam, cfg.radii, cfg);
  EXPECT_EQ(a.status, Status::Fails);
  EXPECT_EQ(b.status, Status::Holds);
  ASSERT_TRUE(a.witness_row());
  EXPECT_EQ(a.witness_row()->probe, "U=(-1, 1)");
  EXPECT_EQ(a.witness_row()->limsup_estimate, 1.0);
  EXPECT_EQ(a.witness_row()->limit_value, 0.0);
  for (const auto& row : b.rows) EXPECT_EQ(row.limit_value, 0.0);
  auto rep = cross_check(fam, cfg);
  EXPECT_TRUE(rep.consistent);
  for (const auto& [name, status] : rep.equivalence_statuses()) EXPECT_EQ(status, Status::Fails) << name;
  EXPECT_EQ(rep.open_liminf->status, Status::Fails);
  EXPECT_EQ(rep.closed_limsup->status, Status::Fails);
}

TEST(Evaluators, ScaledDiracBoundedHalves) {
  auto fam = family([](std::size_t n) { return dirac(1.0 / n, 2.0); }, dirac(0.0));
  auto cfg = default_check_config(origin);
  auto open = check_open_liminf(fam, cfg.open_probes, cfg);
  auto closed = check_closed_limsup(fam, cfg.closed_probes, cfg);
  EXPECT_EQ(open.status, Status::Holds);
  EXPECT_EQ(closed.status, Status::Fails);
  ASSERT_TRUE(closed.witness_row());
  EXPECT_EQ(closed.witness_row()->probe, "F=[-1, 1]");
  EXPECT_EQ(closed.witness_row()->limsup_estimate, 2.0);
  EXPECT_EQ(closed.witness_row()->limit_value, 1.0);
  EXPECT_THROW(check_open_liminf(fam, {S::closed_interval(-1, 1)}, cfg), Error);
  EXPECT_THROW(check_closed_limsup(fam, {S::open_interval(-1, 1)}, cfg), Error);
  auto rep = cross_check(fam, cfg);
  EXPECT_TRUE(rep.consistent);
  for (const auto& [name, status] : rep.equivalence_statuses()) EXPECT_EQ(status, Status::Holds) << name;
}

TEST(Evaluators, ConvergentFamiliesHoldEverywhere) {
  std::vector<MeasureFamily<double>> fams{
      family([](std::size_t) { return M::finite(origin, {{P{1.5}, 1.0}, {P{-2.2}, 0.5}, {P{0.3}, 2.0}}); },
             M::finite(origin, {{P{1.5}, 1.0}, {P{-2.2}, 0.5}, {P{0.3}, 2.0}})),
      family([](std::size_t n) { return dirac(1.0 + 1.0 / n); }, dirac(1.0)),
      family(
          [](std::size_t n) {
            std::vector<Atom<double>> atoms{{P{3.0}, 1.0 / n}};
            if (n > 1) atoms.push_back({P{1.0}, 1.0 - 1.0 / n});
            return M::finite(origin, atoms);
          },
          dirac(1.0)),
  };
  for (const auto& fam : fams) {
    auto rep = cross_check(fam, default_check_config(origin));
    EXPECT_TRUE(rep.consistent);
    for (const auto& [name, status] : rep.equivalence_statuses()) EXPECT_EQ(status, Status::Holds) << name;
  }
}

TEST(Evaluators, InfiniteFamilies) {
  PowerLawSpec<double> spec{origin, {1.0}};
  auto full = power_law_measure(spec);
  auto fam = family(
      [spec](std::size_t n) {
        auto t = spec;
        t.truncate = n;
        return power_law_measure(t);
      },
      full);
  auto cfg = default_check_config(origin);
  EXPECT_FALSE(is_bounded_family(fam));
  auto rep = cross_check(fam, cfg);
  EXPECT_TRUE(rep.consistent);
  EXPECT_FALSE(rep.open_liminf.has_value());
  for (const auto& [name, status] : rep.equivalence_statuses()) EXPECT_EQ(status, Status::Holds) << name;
  EXPECT_THROW(check_open_liminf(fam, cfg.open_probes, cfg), Error);
}

TEST(Evaluators, ProbeFilteringUsesOnlyContinuitySets) {
  PowerLawSpec<double> spec{origin, {1.0}};
  auto full = power_law_measure(spec);
  auto fam = family([full](std::size_t) { return full; }, full, 64);
  auto cfg = default_check_config(origin);
  auto ii = check_ii(fam, cfg.radii, cfg.probe_sets, cfg);
  EXPECT_FALSE(ii.skipped.empty());
  for (const auto& row : ii.rows) {
    auto window = complement_of(S::open_ball(origin, *row.radius));
    EXPECT_EQ(boundary_mass(restrict(full, window).base, intersection_of(window, boundary(*row.region).set)).mass, 0.0);
  }
  auto iii = check_iii(fam, cfg.radii, cfg);
  for (const auto& row : iii.rows) EXPECT_EQ(boundary_mass(full, S::open_ball(origin, *row.radius)).mass, 0.0);
}

TEST(Evaluators, IntegralChecksSelectFunctionClasses) {
  auto fam = family([](std::size_t n) { return dirac(1.0 + 1.0 / n); }, dirac(1.0), 256);
  auto cfg = default_check_config(origin);
  auto iv = check_iv(fam, cfg.corpus, cfg);
  auto v = check_v(fam, cfg.corpus, cfg);
  std::size_t vanishing = 0, lipschitz = 0;
  for (const auto& f : cfg.corpus) {
    vanishing += f.vanishes_near_center();
    lipschitz += f.is_bounded_lipschitz();
  }
  EXPECT_EQ(iv.rows.size(), vanishing);
  EXPECT_EQ(v.rows.size(), lipschitz);
  EXPECT_LT(v.rows.size(), iv.rows.size());
  auto i = check_i(fam, cfg.corpus, {1.0}, cfg);
  EXPECT_EQ(i.rows.size(), cfg.corpus.size());
}

TEST(Evaluators, ConfigurationErrors) {
  auto fam = family([](std::size_t) { return dirac(1.0); }, dirac(1.0), 4);
  auto cfg = default_check_config(origin);
  EXPECT_THROW(check_iii(fam, cfg.radii, cfg), Error);  // 3 grid points < window 5
  fam.n_max = 64;
  EXPECT_THROW(check_iii(fam, {}, cfg), Error);
  EXPECT_THROW(check_iii(fam, {-1.0}, cfg), Error);
  auto shifted = family([](std::size_t) { return M::finite(P{1.0}, {{P{2.0}, 1.0}}); }, dirac(1.0), 64);
  EXPECT_THROW(check_iii(shifted, cfg.radii, cfg), Error);
}

TEST(Evaluators, PlanarFamily) {
  P c{0.0, 0.0};
  MeasureFamily<double> fam{c,
                            [c](std::size_t n) { return M::finite(c, {{P{1.0 + 1.0 / n, 1.0}, 1.0}}); },
                            M::finite(c, {{P{1.0, 1.0}, 1.0}}), 1 << 12};
  auto rep = cross_check(fam, default_check_config(c));
  EXPECT_TRUE(rep.consistent);
  for (const auto& [name, status] : rep.equivalence_statuses()) EXPECT_EQ(status, Status::Holds) << name;
}
