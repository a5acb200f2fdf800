#pragma once

// Report documents: assembly from a cross-check run, deterministic JSON
// serialization and the human-readable text rendering.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "portmanteau/builtins.hpp"
#include "portmanteau/portmanteau.hpp"
#include "portmanteau/scenario.hpp"

namespace portmanteau {

inline constexpr const char* kDisclaimer =
    "Verdicts are probe-based numerical judgments on a finite n-grid, not proofs. HOLDS means every probe "
    "residual is within tolerance at n_max (or contracting below fail_threshold) with a plausible trend.";

struct RunResult {
  Json report;
  bool consistent = false;
  bool expected_match = true;  // vacuously true without an expected block
};

namespace detail {

inline void write_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "\"nan\"";
  } else if (std::isinf(v)) {
    out += v > 0 ? "\"inf\"" : "\"-inf\"";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  }
}

inline void write_json(std::string& out, const Json& j, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map keeps keys sorted
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write_json(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalars = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += scalars ? ", " : ",";
        if (!scalars) newline(depth + 1);
        write_json(out, j[i], indent, depth + 1);
      }
      if (!scalars) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: write_number(out, j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

}  // namespace detail

/// Sorted keys, 17 significant digits for every float, non-finite values as
/// strings. Identical documents always produce identical bytes.
inline std::string serialize_json(const Json& j, int indent = 2) {
  std::string out;
  detail::write_json(out, j, indent, 0);
  out += '\n';
  return out;
}

namespace detail {

template <class Real>
Json real_json(const Real& v) {
  return to_double(v);
}

template <class Real>
Json series_json(const std::vector<Real>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_double(x));
  return a;
}

template <class Real>
Json row_json(const ProbeRow<Real>& row) {
  Json j{{"probe", row.probe},
         {"status", to_string(row.status)},
         {"values", series_json(row.values)},
         {"residuals", series_json(row.residuals)},
         {"limit_value", real_json(row.limit_value)},
         {"limsup_estimate", real_json(row.limsup_estimate)},
         {"liminf_estimate", real_json(row.liminf_estimate)}};
  if (row.function) j["function"] = *row.function;
  if (row.radius) j["radius"] = real_json(*row.radius);
  if (row.requested_radius) j["requested_radius"] = real_json(*row.requested_radius);
  if (row.region) j["region"] = to_string(*row.region);
  return j;
}

template <class Real>
Json verdict_json(const Verdict<Real>& v) {
  Json j{{"status", to_string(v.status)}, {"witness", nullptr}};
  Json rows = Json::array();
  for (const auto& r : v.rows) rows.push_back(row_json(r));
  j["probes"] = std::move(rows);
  if (!v.skipped.empty()) j["skipped"] = v.skipped;
  if (const auto* w = v.witness_row()) {
    Json wj{{"probe", w->probe},
            {"status", to_string(w->status)},
            {"limit_value", real_json(w->limit_value)},
            {"limsup_estimate", real_json(w->limsup_estimate)},
            {"liminf_estimate", real_json(w->liminf_estimate)},
            {"value_at_n_max", real_json(w->values.back())},
            {"residual_at_n_max", real_json(w->residuals.back())}};
    if constexpr (scalar_traits<Real>::exact) {
      wj["exact"] = {{"limit_value", scalar_traits<Real>::to_string(w->limit_value)},
                     {"limsup_estimate", scalar_traits<Real>::to_string(w->limsup_estimate)},
                     {"liminf_estimate", scalar_traits<Real>::to_string(w->liminf_estimate)}};
    }
    j["witness"] = std::move(wj);
  }
  return j;
}

template <class Real>
RunResult run_model(const Json& doc, const ScenarioModel<Real>& model) {
  Report<Real> rep = cross_check(model.family, model.config);
  const auto& rules = model.config.rules;
  Json out{{"schema_version", kSchemaVersion},
           {"disclaimer", kDisclaimer},
           {"scenario", doc},
           {"consistent", rep.consistent}};
  Json grid = Json::array();
  for (auto n : rep.grid) grid.push_back(n);
  out["settings"] = {{"arithmetic", scenario_arithmetic(doc)},
                     {"n_max", model.family.n_max},
                     {"grid", grid},
                     {"tol", real_json(rules.tol)},
                     {"fail_threshold", real_json(rules.fail_threshold)},
                     {"trend_window", rules.window},
                     {"decay_ratio", real_json(rules.decay_ratio)},
                     {"stall_ratio", real_json(rules.stall_ratio)},
                     {"geom_tol", real_json(model.config.geom_tol)},
                     {"radii", series_json(model.config.radii)},
                     {"corpus", [&] {
                        Json names = Json::array();
                        for (const auto& f : model.config.corpus) names.push_back(f.name());
                        return names;
                      }()}};
  Json conds = Json::object();
  for (const auto& v : rep.conditions) conds[v.condition] = verdict_json(v);
  conds["vi"] = {{"status", to_string(rep.vi)}, {"combines", {"vi_a", "vi_b"}}};
  out["conditions"] = std::move(conds);
  if (rep.open_liminf) {
    out["bounded"] = {{"open_liminf", verdict_json(*rep.open_liminf)},
                      {"closed_limsup", verdict_json(*rep.closed_limsup)}};
  }
  std::size_t skipped = 0;
  for (const auto& v : rep.conditions) skipped += v.skipped.size();
  out["stats"] = {{"probes", rep.probes}, {"evaluations", rep.evaluations}, {"skipped_probes", skipped}};

  std::optional<bool> levy;
  if (model.levy_cutoff) {
    auto lc = is_levy_measure(model.family.limit, *model.levy_cutoff, model.config.geom_tol);
    levy = lc.is_levy;
    Json lj{{"is_levy", lc.is_levy},
            {"cutoff", *model.levy_cutoff},
            {"value", real_json(lc.value)},
            {"error_bound", lc.error_bound ? real_json(*lc.error_bound) : Json("inf")},
            {"center_atom", lc.center_atom},
            {"atoms_summed", lc.atoms_summed}};
    out["levy_check"] = std::move(lj);
  }

  RunResult result{{}, rep.consistent, true};
  if (doc.contains("expected")) {
    Json mismatches = Json::array();
    const Json& exp = doc["expected"];
    auto status_of = [&](const std::string& key) -> std::optional<std::string> {
      if (key == "vi") return std::string(to_string(rep.vi));
      if (key == "open_liminf")
        return rep.open_liminf ? std::optional<std::string>(to_string(rep.open_liminf->status)) : std::nullopt;
      if (key == "closed_limsup")
        return rep.closed_limsup ? std::optional<std::string>(to_string(rep.closed_limsup->status)) : std::nullopt;
      return std::string(to_string(rep.condition(key).status));
    };
    for (auto it = exp.begin(); it != exp.end(); ++it) {
      Json got;
      if (it.key() == "consistent") got = rep.consistent;
      else if (it.key() == "levy") got = levy ? Json(*levy) : Json(nullptr);
      else if (auto s = status_of(it.key())) got = *s;
      else got = "not evaluated";
      if (got != it.value()) mismatches.push_back({{"key", it.key()}, {"expected", it.value()}, {"actual", got}});
    }
    result.expected_match = mismatches.empty();
    out["expected_check"] = {{"match", result.expected_match}, {"mismatches", mismatches}};
  }
  result.report = std::move(out);
  return result;
}

}  // namespace detail

/// Runs the cross-check (and the Levy check when configured) for a scenario
/// document. Throws Error(Validation) for invalid documents.
inline RunResult run_scenario(const Json& doc, const ScenarioOverrides& overrides = {}) {
  if (auto diags = validate_scenario(doc); !diags.empty()) throw Error(ErrorCode::Validation, diags.front());
  if (scenario_arithmetic(doc) == "rational") return detail::run_model(doc, build_model<Rational>(doc, overrides));
  return detail::run_model(doc, build_model<double>(doc, overrides));
}

namespace detail {

inline std::string fmt_number(const Json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

inline void text_verdict(std::ostringstream& os, const std::string& label, const Json& v) {
  os << "  " << label << std::string(label.size() < 16 ? 16 - label.size() : 1, ' ') << v["status"].get<std::string>();
  if (!v["witness"].is_null()) {
    const Json& w = v["witness"];
    os << "  witness " << w["probe"].get<std::string>() << ": limsup " << fmt_number(w["limsup_estimate"])
       << ", liminf " << fmt_number(w["liminf_estimate"]) << ", limit " << fmt_number(w["limit_value"])
       << ", residual at n_max " << fmt_number(w["residual_at_n_max"]);
  }
  os << "  (" << v["probes"].size() << " probes";
  if (v.contains("skipped")) os << ", " << v["skipped"].size() << " skipped";
  os << ")\n";
}

}  // namespace detail

/// Human-readable rendering of a report document.
inline std::string render_text(const Json& report) {
  std::ostringstream os;
  const Json& sc = report["scenario"];
  const Json& st = report["settings"];
  os << "scenario: " << sc["name"].get<std::string>() << "\n";
  if (sc.contains("description")) os << "  " << sc["description"].get<std::string>() << "\n";
  os << "note: " << report["disclaimer"].get<std::string>() << "\n";
  os << "arithmetic " << st["arithmetic"].get<std::string>() << ", n_max " << st["n_max"].dump() << ", tol "
     << detail::fmt_number(st["tol"]) << ", fail_threshold " << detail::fmt_number(st["fail_threshold"]) << ", window "
     << st["trend_window"].dump() << "\n\nconditions\n";
  const Json& c = report["conditions"];
  for (const char* k : {"i", "ii", "iii", "iv", "v", "vi_a", "vi_b"}) detail::text_verdict(os, k, c[k]);
  os << "  vi              " << c["vi"]["status"].get<std::string>() << "\n";
  if (report.contains("bounded")) {
    os << "\nbounded measures\n";
    detail::text_verdict(os, "open_liminf", report["bounded"]["open_liminf"]);
    detail::text_verdict(os, "closed_limsup", report["bounded"]["closed_limsup"]);
  }
  os << "\nconsistent: " << (report["consistent"].get<bool>() ? "yes" : "no") << "\n";
  if (report.contains("levy_check")) {
    const Json& l = report["levy_check"];
    os << "levy: " << (l["is_levy"].get<bool>() ? "yes" : "no") << ", integral of min(x^2, 1) ~ "
       << detail::fmt_number(l["value"]) << " (tail bound " << detail::fmt_number(l["error_bound"]) << ", "
       << l["atoms_summed"].dump() << " atoms" << (l["center_atom"].get<bool>() ? ", atom at x0" : "") << ")\n";
  }
  if (report.contains("expected_check")) {
    const Json& e = report["expected_check"];
    os << "expected verdicts: " << (e["match"].get<bool>() ? "match" : "MISMATCH") << "\n";
    for (const auto& m : e["mismatches"])
      os << "  " << m["key"].get<std::string>() << ": expected " << m["expected"].dump() << ", got "
         << m["actual"].dump() << "\n";
  }
  const Json& s = report["stats"];
  os << "stats: " << s["probes"].dump() << " probes, " << s["evaluations"].dump() << " evaluations, "
     << s["skipped_probes"].dump() << " skipped\n";
  return os.str();
}

}  // namespace portmanteau
