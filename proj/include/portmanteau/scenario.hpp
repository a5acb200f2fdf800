#pragma once

// Scenario documents: JSON ingestion, validation and construction of the
// measure family and probe configuration they describe.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "portmanteau/error.hpp"
#include "portmanteau/measure.hpp"
#include "portmanteau/portmanteau.hpp"
#include "portmanteau/power_law.hpp"
#include "portmanteau/rational.hpp"
#include "portmanteau/set_expr.hpp"
#include "portmanteau/test_functions.hpp"

namespace portmanteau {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kDefaultLevyCutoff = 10000;

/// Command-line overrides applied on top of a scenario's config block.
struct ScenarioOverrides {
  std::optional<std::size_t> n_max;
  std::optional<double> tol;
  bool levy = false;
};

/// Condition keys an `expected` block may mention.
inline const std::vector<std::string>& expected_status_keys() {
  static const std::vector<std::string> keys{"i", "ii", "iii", "iv", "v", "vi", "vi_a", "vi_b", "open_liminf",
                                             "closed_limsup"};
  return keys;
}

/// Parses JSON text, reporting syntax errors by line and column.
inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw Error(ErrorCode::Parse,
                source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

namespace detail {

[[noreturn]] inline void invalid(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Validation, where + ": " + what);
}

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) invalid(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) invalid(where, std::string("missing field '") + key + "'");
  return *it;
}

inline void allow_fields(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) invalid(where, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      invalid(where, "unknown field '" + it.key() + "'");
}

inline std::pair<std::string, const Json*> tagged(const Json& node, const std::string& where) {
  if (!node.is_object() || node.size() != 1) invalid(where, "expected an object with exactly one tag");
  return {node.begin().key(), &node.begin().value()};
}

inline double parse_double_text(const std::string& s, const std::string& where) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) invalid(where, "not a number: '" + s + "'");
  return v;
}

/// A number, or a string holding a decimal / "p/q" literal.
template <class Real>
Real parse_real(const Json& v, const std::string& where) {
  if (v.is_number()) {
    double d = v.get<double>();
    if (!std::isfinite(d)) invalid(where, "non-finite number");
    return from_double<Real>(d);
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if constexpr (scalar_traits<Real>::exact) {
      try {
        return parse_rational(s);
      } catch (const Error& e) {
        invalid(where, e.what());
      }
    } else {
      if (auto slash = s.find('/'); slash != std::string::npos)
        return parse_double_text(s.substr(0, slash), where) / parse_double_text(s.substr(slash + 1), where);
      return parse_double_text(s, where);
    }
  }
  invalid(where, "expected a number");
}

template <class Real>
std::optional<Real> optional_real(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  return parse_real<Real>(*it, where + "." + key);
}

inline std::size_t parse_count(const Json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 1) invalid(where, "expected a positive integer");
  return v.get<std::size_t>();
}

inline bool parse_bool(const Json& obj, const char* key, bool fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) invalid(where + "." + key, "expected true or false");
  return it->get<bool>();
}

template <class Real>
std::vector<Real> parse_vector(const Json& v, const std::string& where) {
  if (!v.is_array()) invalid(where, "expected an array");
  std::vector<Real> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_real<Real>(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <class Real>
Point<Real> parse_point(const Json& v, std::size_t dimension, const std::string& where) {
  auto c = parse_vector<Real>(v, where);
  if (c.size() != dimension)
    invalid(where, "expected " + std::to_string(dimension) + " coordinates, got " + std::to_string(c.size()));
  return Point<Real>(std::move(c));
}

}  // namespace detail

/// SetExpr from tagged JSON nodes, e.g. {"open_ball": {"center": [0], "radius": 1}}.
template <class Real>
SetExpr<Real> parse_set(const Json& node, std::size_t dimension, const std::string& where) {
  auto [tag, body] = detail::tagged(node, where);
  const std::string at = where + "." + tag;
  try {
    if (tag == "open_ball" || tag == "closed_ball") {
      detail::allow_fields(*body, {"center", "radius"}, at);
      auto c = detail::parse_point<Real>(detail::field(*body, "center", at), dimension, at + ".center");
      auto r = detail::parse_real<Real>(detail::field(*body, "radius", at), at + ".radius");
      return tag == "open_ball" ? SetExpr<Real>::open_ball(c, r) : SetExpr<Real>::closed_ball(c, r);
    }
    if (tag == "interval") {
      if (dimension != 1) detail::invalid(at, "intervals need dimension 1");
      detail::allow_fields(*body, {"lo", "hi", "lo_closed", "hi_closed"}, at);
      Interval<Real> iv;
      const Json& lo = detail::field(*body, "lo", at);
      const Json& hi = detail::field(*body, "hi", at);
      if (!lo.is_null()) iv.lo = detail::parse_real<Real>(lo, at + ".lo");
      if (!hi.is_null()) iv.hi = detail::parse_real<Real>(hi, at + ".hi");
      iv.lo_closed = detail::parse_bool(*body, "lo_closed", true, at) && iv.lo.has_value();
      iv.hi_closed = detail::parse_bool(*body, "hi_closed", true, at) && iv.hi.has_value();
      return SetExpr<Real>::interval(iv);
    }
    if (tag == "whole") return SetExpr<Real>::whole(dimension);
    if (tag == "empty") return SetExpr<Real>::empty(dimension);
    if (tag == "complement") return SetExpr<Real>::complement(parse_set<Real>(*body, dimension, at));
    if (tag == "union" || tag == "intersection") {
      if (!body->is_array()) detail::invalid(at, "expected an array of sets");
      std::vector<SetExpr<Real>> parts;
      for (std::size_t i = 0; i < body->size(); ++i)
        parts.push_back(parse_set<Real>((*body)[i], dimension, at + "[" + std::to_string(i) + "]"));
      return tag == "union" ? SetExpr<Real>::unite(std::move(parts)) : SetExpr<Real>::intersect(std::move(parts));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Validation) throw;
    detail::invalid(at, e.what());
  }
  detail::invalid(where, "unknown set tag '" + tag + "'");
}

/// Corpus entry from JSON: bump, c2, custom_polynomial_capped, constant,
/// distance_capped or sqrt_capped.
template <class Real>
TestFunction<Real> parse_function(const Json& node, const Point<Real>& x0, const std::string& where) {
  auto [tag, body] = detail::tagged(node, where);
  const std::string at = where + "." + tag;
  auto real = [&](const char* key) { return detail::parse_real<Real>(detail::field(*body, key, at), at + "." + key); };
  try {
    if (tag == "bump") {
      detail::allow_fields(*body, {"inner_radius", "n0", "set"}, at);
      if (body->contains("set")) {
        if (body->contains("inner_radius")) detail::invalid(at, "give either 'set' or 'inner_radius'");
        return bump(parse_set<Real>((*body)["set"], x0.dimension(), at + ".set"), real("n0"), x0);
      }
      return ball_bump(x0, real("inner_radius"), real("n0"));
    }
    if (tag == "c2") {
      detail::allow_fields(*body, {"a", "scale"}, at);
      return c2_family(real("a"), x0, detail::optional_real<Real>(*body, "scale", at).value_or(Real(1)));
    }
    if (tag == "custom_polynomial_capped") {
      detail::allow_fields(*body, {"coeffs", "vanish_radius", "cap"}, at);
      return capped_polynomial(x0, detail::parse_vector<Real>(detail::field(*body, "coeffs", at), at + ".coeffs"),
                               real("vanish_radius"), real("cap"));
    }
    if (tag == "constant") {
      detail::allow_fields(*body, {"value"}, at);
      return constant_function(real("value"), x0);
    }
    if (tag == "distance_capped") {
      detail::allow_fields(*body, {"cap"}, at);
      return distance_capped(x0, real("cap"));
    }
    if (tag == "sqrt_capped") {
      detail::allow_fields(*body, {"a"}, at);
      if constexpr (scalar_traits<Real>::exact) detail::invalid(at, "not available in rational arithmetic");
      return sqrt_capped(x0, real("a"));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Validation) throw;
    detail::invalid(at, e.what());
  }
  detail::invalid(where, "unknown test function '" + tag + "'");
}

/// Measure from JSON: {"atoms": [...]}, {"power_law": {...}} or
/// {"builtin": "harmonic_levy" | "heavy_levy", "params": {...}}.
template <class Real>
AtomicMeasure<Real> parse_measure(const Json& node, const Point<Real>& x0, const std::string& where) {
  const std::size_t d = x0.dimension();
  try {
    if (node.contains("atoms")) {
      detail::allow_fields(node, {"atoms", "center_atoms_allowed"}, where);
      const Json& list = node["atoms"];
      if (!list.is_array()) detail::invalid(where + ".atoms", "expected an array");
      std::vector<Atom<Real>> atoms;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string at = where + ".atoms[" + std::to_string(i) + "]";
        detail::allow_fields(list[i], {"loc", "mass"}, at);
        auto loc = detail::parse_point<Real>(detail::field(list[i], "loc", at), d, at + ".loc");
        auto mass = detail::parse_real<Real>(detail::field(list[i], "mass", at), at + ".mass");
        if (!(Real(0) < mass)) detail::invalid(at + ".mass", "invariant violated: atom mass must be positive");
        atoms.push_back({std::move(loc), std::move(mass)});
      }
      return AtomicMeasure<Real>::finite(x0, std::move(atoms), detail::parse_bool(node, "center_atoms_allowed", false, where));
    }
    PowerLawSpec<Real> spec{x0, std::vector<Real>(d, Real(0))};
    spec.direction[0] = Real(1);
    const Json* params = nullptr;
    std::string at;
    if (node.contains("power_law")) {
      detail::allow_fields(node, {"power_law"}, where);
      params = &node["power_law"];
      at = where + ".power_law";
    } else if (node.contains("builtin")) {
      detail::allow_fields(node, {"builtin", "params"}, where);
      const Json& name = node["builtin"];
      if (!name.is_string()) detail::invalid(where + ".builtin", "expected a string");
      if (name == "heavy_levy") spec.mass_growth = Real(1);
      else if (name != "harmonic_levy") detail::invalid(where + ".builtin", "unknown measure '" + name.get<std::string>() + "'");
      static const Json no_params = Json::object();
      params = node.contains("params") ? &node["params"] : &no_params;
      at = where + ".params";
    } else {
      detail::invalid(where, "expected 'atoms', 'power_law' or 'builtin'");
    }
    detail::allow_fields(*params, {"direction", "scale", "decay", "mass_scale", "mass_growth", "tail_locator"}, at);
    if (params->contains("direction")) spec.direction = detail::parse_vector<Real>((*params)["direction"], at + ".direction");
    if (auto v = detail::optional_real<Real>(*params, "scale", at)) spec.scale = *v;
    if (auto v = detail::optional_real<Real>(*params, "decay", at)) spec.decay = *v;
    if (auto v = detail::optional_real<Real>(*params, "mass_scale", at)) spec.mass_scale = *v;
    if (auto v = detail::optional_real<Real>(*params, "mass_growth", at)) spec.mass_growth = *v;
    spec.tail_locator = detail::parse_bool(*params, "tail_locator", true, at);
    return power_law_measure(spec);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Validation) throw;
    detail::invalid(where, e.what());
  }
}

/// The first n atoms of eta.
template <class Real>
AtomicMeasure<Real> truncate_measure(const AtomicMeasure<Real>& eta, std::size_t n) {
  std::size_t count = eta.atom_count() ? std::min(n, *eta.atom_count()) : n;
  auto locator = [eta, count](const Real& r) { return std::min(eta.tail_index(r), count); };
  typename AtomicMeasure<Real>::TailLocator tl;
  if (eta.has_tail_locator()) tl = locator;
  return AtomicMeasure<Real>::countable(
      eta.center(), [eta](std::size_t k) { return eta.atom(k); }, count, std::move(tl),
      [](std::size_t) { return std::optional<Real>(Real(0)); }, eta.center_atoms_allowed());
}

/// Everything a scenario document describes, in the chosen arithmetic.
template <class Real>
struct ScenarioModel {
  Point<Real> x0;
  MeasureFamily<Real> family;
  CheckConfig<Real> config;
  std::optional<std::size_t> levy_cutoff;
};

namespace detail {

template <class Real>
MeasureFamily<Real> parse_family(const Json& node, const Point<Real>& x0, std::size_t n_max) {
  const std::string where = "family";
  const std::string kind = field(node, "kind", where).is_string() ? node["kind"].get<std::string>() : "";
  MeasureFamily<Real> fam{x0, {}, AtomicMeasure<Real>::zero(x0), n_max};
  const std::size_t d = x0.dimension();

  if (kind == "constant") {
    allow_fields(node, {"kind", "measure"}, where);
    fam.limit = parse_measure<Real>(field(node, "measure", where), x0, where + ".measure");
    fam.member = [lim = fam.limit](std::size_t) { return lim; };
    return fam;
  }
  if (kind == "truncation") {
    allow_fields(node, {"kind", "measure", "limit"}, where);
    auto full = parse_measure<Real>(field(node, "measure", where), x0, where + ".measure");
    fam.limit = node.contains("limit") ? parse_measure<Real>(node["limit"], x0, where + ".limit") : full;
    fam.member = [full](std::size_t n) { return truncate_measure(full, n); };
    return fam;
  }
  if (kind == "explicit") {
    allow_fields(node, {"kind", "members", "limit"}, where);
    fam.limit = parse_measure<Real>(field(node, "limit", where), x0, where + ".limit");
    const Json& list = field(node, "members", where);
    if (!list.is_array() || list.empty()) invalid(where + ".members", "expected a nonempty array");
    std::vector<std::pair<std::size_t, AtomicMeasure<Real>>> pieces;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = where + ".members[" + std::to_string(i) + "]";
      allow_fields(list[i], {"from", "measure"}, at);
      std::size_t from = parse_count(field(list[i], "from", at), at + ".from");
      if (i == 0 && from != 1) invalid(at + ".from", "the first piece must start at n = 1");
      if (i > 0 && from <= pieces.back().first) invalid(at + ".from", "pieces must start at increasing n");
      pieces.emplace_back(from, parse_measure<Real>(field(list[i], "measure", at), x0, at + ".measure"));
    }
    fam.member = [pieces](std::size_t n) {
      auto it = std::upper_bound(pieces.begin(), pieces.end(), n,
                                 [](std::size_t v, const auto& p) { return v < p.first; });
      return std::prev(it)->second;
    };
    return fam;
  }
  if (kind == "parametric") {
    // atom k of member n: loc_k + loc_drift_k * n + loc_rate_k / n, mass_k + mass_rate_k / n;
    // atoms whose mass is not positive at n are left out.
    allow_fields(node, {"kind", "atoms", "center_atoms_allowed", "limit"}, where);
    fam.limit = parse_measure<Real>(field(node, "limit", where), x0, where + ".limit");
    struct Moving {
      std::vector<Real> loc, drift, rate;
      Real mass, mass_rate;
    };
    std::vector<Moving> atoms;
    const Json& list = field(node, "atoms", where);
    if (!list.is_array()) invalid(where + ".atoms", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = where + ".atoms[" + std::to_string(i) + "]";
      allow_fields(list[i], {"loc", "loc_drift", "loc_rate", "mass", "mass_rate"}, at);
      Moving m{parse_point<Real>(field(list[i], "loc", at), d, at + ".loc").coordinates(), std::vector<Real>(d, Real(0)),
               std::vector<Real>(d, Real(0)), parse_real<Real>(field(list[i], "mass", at), at + ".mass"), Real(0)};
      if (list[i].contains("loc_drift"))
        m.drift = parse_point<Real>(list[i]["loc_drift"], d, at + ".loc_drift").coordinates();
      if (list[i].contains("loc_rate")) m.rate = parse_point<Real>(list[i]["loc_rate"], d, at + ".loc_rate").coordinates();
      if (auto v = optional_real<Real>(list[i], "mass_rate", at)) m.mass_rate = *v;
      atoms.push_back(std::move(m));
    }
    bool center_ok = parse_bool(node, "center_atoms_allowed", false, where);
    fam.member = [atoms, x0, center_ok](std::size_t n) {
      const Real nn(static_cast<long long>(n));
      std::vector<Atom<Real>> out;
      for (const auto& a : atoms) {
        Real mass = a.mass + a.mass_rate / nn;
        if (!(Real(0) < mass)) continue;
        std::vector<Real> c(a.loc.size());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = a.loc[j] + a.drift[j] * nn + a.rate[j] / nn;
        out.push_back({Point<Real>(std::move(c)), std::move(mass)});
      }
      return AtomicMeasure<Real>::finite(x0, std::move(out), center_ok);
    };
    return fam;
  }
  invalid(where + ".kind", "expected 'constant', 'truncation', 'explicit' or 'parametric'");
}

template <class Real>
std::vector<SetExpr<Real>> parse_set_list(const Json& v, std::size_t d, const std::string& where) {
  if (!v.is_array()) invalid(where, "expected an array");
  std::vector<SetExpr<Real>> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_set<Real>(v[i], d, where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline std::string scenario_arithmetic(const Json& doc) {
  if (!doc.is_object() || !doc.contains("arithmetic")) return "double";
  const Json& a = doc["arithmetic"];
  if (a == "double" || a == "rational") return a.get<std::string>();
  detail::invalid("arithmetic", "expected 'double' or 'rational'");
}

/// Builds the model described by `doc`; throws Error(Validation) on the
/// first problem found.
template <class Real>
ScenarioModel<Real> build_model(const Json& doc, const ScenarioOverrides& overrides = {}) {
  using detail::field;
  using detail::invalid;
  detail::allow_fields(doc, {"schema_version", "name", "description", "arithmetic", "space", "family", "config", "levy",
                             "expected"},
                       "scenario");
  const Json& version = field(doc, "schema_version", "scenario");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    invalid("schema_version", "expected " + std::to_string(kSchemaVersion));
  if (!field(doc, "name", "scenario").is_string()) invalid("name", "expected a string");
  if (doc.contains("description") && !doc["description"].is_string()) invalid("description", "expected a string");
  if (scalar_traits<Real>::exact != (scenario_arithmetic(doc) == "rational"))
    invalid("arithmetic", "model requested in the wrong arithmetic");

  const Json& space = field(doc, "space", "scenario");
  detail::allow_fields(space, {"dimension", "x0"}, "space");
  std::size_t d = detail::parse_count(field(space, "dimension", "space"), "space.dimension");
  if (scalar_traits<Real>::exact && d != 1) invalid("arithmetic", "rational arithmetic is limited to dimension 1");
  auto x0 = detail::parse_point<Real>(field(space, "x0", "space"), d, "space.x0");
  ScenarioModel<Real> model{x0, {x0, {}, AtomicMeasure<Real>::zero(x0)}, {}, std::nullopt};
  model.config = default_check_config(model.x0);

  std::size_t n_max = std::size_t{1} << 16;
  const Json empty = Json::object();
  const Json& cfg = doc.contains("config") ? doc["config"] : empty;
  detail::allow_fields(cfg,
                       {"n_max", "tol", "fail_threshold", "trend_window", "geom_tol", "radii", "probe_sets",
                        "open_probes", "closed_probes", "corpus"},
                       "config");
  if (cfg.contains("n_max")) n_max = detail::parse_count(cfg["n_max"], "config.n_max");
  if (overrides.n_max) n_max = *overrides.n_max;
  auto& rules = model.config.rules;
  if (auto v = detail::optional_real<Real>(cfg, "tol", "config")) rules.tol = *v;
  if (overrides.tol) rules.tol = from_double<Real>(*overrides.tol);
  if (auto v = detail::optional_real<Real>(cfg, "fail_threshold", "config")) rules.fail_threshold = *v;
  if (cfg.contains("trend_window")) rules.window = detail::parse_count(cfg["trend_window"], "config.trend_window");
  if (auto v = detail::optional_real<Real>(cfg, "geom_tol", "config")) model.config.geom_tol = *v;
  if (rules.tol < Real(0) || model.config.geom_tol < Real(0)) invalid("config", "tolerances must be nonnegative");
  if (!(rules.tol < rules.fail_threshold)) invalid("config", "tol must be below fail_threshold");
  if (rules.window < 2) invalid("config.trend_window", "must be at least 2");
  if (geometric_grid(n_max).size() < rules.window)
    invalid("config.trend_window", "exceeds the " + std::to_string(geometric_grid(n_max).size()) + "-point n-grid");
  if (cfg.contains("radii")) {
    model.config.radii = detail::parse_vector<Real>(cfg["radii"], "config.radii");
    if (model.config.radii.empty()) invalid("config.radii", "must be nonempty");
    for (const auto& r : model.config.radii)
      if (!(Real(0) < r)) invalid("config.radii", "radii must be positive");
  }
  if (cfg.contains("probe_sets")) model.config.probe_sets = detail::parse_set_list<Real>(cfg["probe_sets"], d, "config.probe_sets");
  if (cfg.contains("open_probes")) {
    model.config.open_probes = detail::parse_set_list<Real>(cfg["open_probes"], d, "config.open_probes");
    for (const auto& s : model.config.open_probes)
      if (is_open_set(s) != std::optional<bool>(true)) invalid("config.open_probes", to_string(s) + " is not open");
  }
  if (cfg.contains("closed_probes")) {
    model.config.closed_probes = detail::parse_set_list<Real>(cfg["closed_probes"], d, "config.closed_probes");
    for (const auto& s : model.config.closed_probes)
      if (is_closed_set(s) != std::optional<bool>(true)) invalid("config.closed_probes", to_string(s) + " is not closed");
  }
  if (cfg.contains("corpus")) {
    const Json& list = cfg["corpus"];
    if (!list.is_array() || list.empty()) invalid("config.corpus", "expected a nonempty array");
    model.config.corpus.clear();
    for (std::size_t i = 0; i < list.size(); ++i)
      model.config.corpus.push_back(parse_function<Real>(list[i], model.x0, "config.corpus[" + std::to_string(i) + "]"));
  }

  model.family = detail::parse_family<Real>(field(doc, "family", "scenario"), model.x0, n_max);

  if (doc.contains("levy")) {
    detail::allow_fields(doc["levy"], {"cutoff"}, "levy");
    model.levy_cutoff = doc["levy"].contains("cutoff") ? detail::parse_count(doc["levy"]["cutoff"], "levy.cutoff")
                                                       : kDefaultLevyCutoff;
  }
  if (overrides.levy && !model.levy_cutoff) model.levy_cutoff = kDefaultLevyCutoff;

  if (doc.contains("expected")) {
    const Json& exp = doc["expected"];
    if (!exp.is_object()) invalid("expected", "expected an object");
    for (auto it = exp.begin(); it != exp.end(); ++it) {
      const auto& keys = expected_status_keys();
      if (std::find(keys.begin(), keys.end(), it.key()) != keys.end()) {
        if (!(it.value() == "HOLDS" || it.value() == "FAILS" || it.value() == "INDETERMINATE"))
          invalid("expected." + it.key(), "expected HOLDS, FAILS or INDETERMINATE");
      } else if (it.key() == "consistent" || it.key() == "levy") {
        if (!it.value().is_boolean()) invalid("expected." + it.key(), "expected true or false");
        if (it.key() == "levy" && !doc.contains("levy")) invalid("expected.levy", "needs a levy block");
      } else {
        invalid("expected." + it.key(), "not a defined condition");
      }
    }
  }
  return model;
}

namespace detail {

/// Standing-hypothesis spot check: K(r) must exist and every atom from
/// index K(r) on (sampled over a stretch) must lie strictly inside B(x0, r).
template <class Real>
void spot_check_tail(const AtomicMeasure<Real>& eta, const std::string& label, std::vector<std::string>& out) {
  if (eta.is_finite()) return;
  if (!eta.has_tail_locator()) {
    out.push_back(label + ": infinite measure without tail_locator; the standing finiteness hypothesis cannot be certified");
    return;
  }
  for (double rd : {1e-3, 1e-1, 1.0}) {
    Real r = from_double<Real>(rd);
    std::size_t k = eta.tail_index(r);
    for (std::size_t j = k; j < k + 64; ++j) {
      if (!(distance(eta.atom(j).location, eta.center()) < r)) {
        out.push_back(label + ": tail locator K(" + num(r) + ") = " + std::to_string(k) + " but atom " +
                      std::to_string(j) + " lies outside B(x0, " + num(r) + ")");
        break;
      }
    }
  }
}

template <class Real>
std::vector<std::string> validate_model(const Json& doc) {
  std::vector<std::string> out;
  ScenarioModel<Real> model = build_model<Real>(doc);
  auto check_member = [&](const std::string& label, auto&& make) {
    try {
      auto m = make();
      spot_check_tail(m, label, out);
    } catch (const Error& e) {
      out.push_back(label + ": " + e.what());
    }
  };
  check_member("family.limit", [&] { return model.family.limit; });
  for (auto n : geometric_grid(model.family.n_max))
    check_member("family member n=" + std::to_string(n), [&] { return model.family.member(n); });
  return out;
}

}  // namespace detail

/// Diagnostics for a scenario document; empty means valid.
inline std::vector<std::string> validate_scenario(const Json& doc) {
  try {
    if (scenario_arithmetic(doc) == "rational") return detail::validate_model<Rational>(doc);
    return detail::validate_model<double>(doc);
  } catch (const Error& e) {
    return {e.what()};
  }
}

}  // namespace portmanteau
