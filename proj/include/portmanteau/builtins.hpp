#pragma once

// Built-in scenario registry. Each entry is an ordinary scenario document;
// its `expected` block records the analytic verdicts.

#include <filesystem>
#include <string>
#include <vector>

#include "portmanteau/error.hpp"
#include "portmanteau/scenario.hpp"

namespace portmanteau {

struct Builtin {
  std::string name;
  std::string summary;
  std::string document;  // JSON text
};

inline const std::vector<Builtin>& builtin_scenarios() {
  static const std::vector<Builtin> registry{
      {"remark_dirac_shift",
       "counterexample: eta_n = delta_2 against eta_0 = delta_0; (vi)(b) holds while (vi)(a) fails",
       R"({
  "schema_version": 1,
  "name": "remark_dirac_shift",
  "description": "eta_n = delta_2 for every n against eta_0 = delta_0 on R with x0 = 0. Mass outside every closed neighbourhood is 1 >= 0, yet limsup eta_n(R \\ (-1, 1)) = 1 > 0 = eta_0(R \\ (-1, 1)); the family does not converge.",
  "space": {"dimension": 1, "x0": [0]},
  "family": {
    "kind": "parametric",
    "atoms": [{"loc": [2], "mass": 1}],
    "limit": {"atoms": [{"loc": [0], "mass": 1}], "center_atoms_allowed": true}
  },
  "expected": {
    "i": "FAILS", "ii": "FAILS", "iii": "FAILS", "iv": "FAILS", "v": "FAILS",
    "vi": "FAILS", "vi_a": "FAILS", "vi_b": "HOLDS",
    "open_liminf": "FAILS", "closed_limsup": "FAILS",
    "consistent": true
  }
})"},
      {"remark_scaled_dirac",
       "counterexample: mu_n = 2 delta_{1/n} against mu = delta_0; open half holds, closed half fails at [-1, 1]",
       R"({
  "schema_version": 1,
  "name": "remark_scaled_dirac",
  "description": "mu_n = 2 delta_{1/n} against mu = delta_0 on R with x0 = 0. Away from x0 both vanish eventually, so the unbounded conditions hold; as bounded measures mu(A) <= liminf mu_n(A) for open A, but limsup mu_n([-1, 1]) = 2 > 1 = mu([-1, 1]).",
  "space": {"dimension": 1, "x0": [0]},
  "family": {
    "kind": "parametric",
    "atoms": [{"loc": [0], "loc_rate": [1], "mass": 2}],
    "limit": {"atoms": [{"loc": [0], "mass": 1}], "center_atoms_allowed": true}
  },
  "expected": {
    "i": "HOLDS", "ii": "HOLDS", "iii": "HOLDS", "iv": "HOLDS", "v": "HOLDS",
    "vi": "HOLDS", "vi_a": "HOLDS", "vi_b": "HOLDS",
    "open_liminf": "HOLDS", "closed_limsup": "FAILS",
    "consistent": true
  }
})"},
      {"constant_family", "eta_n = eta_0, three atoms; every condition holds trivially",
       R"({
  "schema_version": 1,
  "name": "constant_family",
  "description": "eta_n = eta_0 = delta_{1.5} + 0.5 delta_{-2.2} + 2 delta_{0.3} for every n.",
  "space": {"dimension": 1, "x0": [0]},
  "family": {
    "kind": "constant",
    "measure": {"atoms": [
      {"loc": [1.5], "mass": 1},
      {"loc": [-2.2], "mass": 0.5},
      {"loc": [0.3], "mass": 2}
    ]}
  },
  "expected": {
    "i": "HOLDS", "ii": "HOLDS", "iii": "HOLDS", "iv": "HOLDS", "v": "HOLDS",
    "vi": "HOLDS", "vi_a": "HOLDS", "vi_b": "HOLDS",
    "open_liminf": "HOLDS", "closed_limsup": "HOLDS",
    "consistent": true
  }
})"},
      {"moving_atom", "delta_{1+1/n} -> delta_1; convergence at rate 1/n",
       R"({
  "schema_version": 1,
  "name": "moving_atom",
  "description": "eta_n = delta_{1+1/n} converging to eta_0 = delta_1.",
  "space": {"dimension": 1, "x0": [0]},
  "family": {
    "kind": "parametric",
    "atoms": [{"loc": [1], "loc_rate": [1], "mass": 1}],
    "limit": {"atoms": [{"loc": [1], "mass": 1}]}
  },
  "expected": {
    "i": "HOLDS", "ii": "HOLDS", "iii": "HOLDS", "iv": "HOLDS", "v": "HOLDS",
    "vi": "HOLDS", "vi_a": "HOLDS", "vi_b": "HOLDS",
    "open_liminf": "HOLDS", "closed_limsup": "HOLDS",
    "consistent": true
  }
})"},
      {"mass_split", "(1 - 1/n) delta_1 + (1/n) delta_3 -> delta_1; vanishing mass far from x0",
       R"({
  "schema_version": 1,
  "name": "mass_split",
  "description": "eta_n = (1 - 1/n) delta_1 + (1/n) delta_3 converging to eta_0 = delta_1.",
  "space": {"dimension": 1, "x0": [0]},
  "family": {
    "kind": "parametric",
    "atoms": [
      {"loc": [1], "mass": 1, "mass_rate": -1},
      {"loc": [3], "mass": 0, "mass_rate": 1}
    ],
    "limit": {"atoms": [{"loc": [1], "mass": 1}]}
  },
  "expected": {
    "i": "HOLDS", "ii": "HOLDS", "iii": "HOLDS", "iv": "HOLDS", "v": "HOLDS",
    "vi": "HOLDS", "vi_a": "HOLDS", "vi_b": "HOLDS",
    "open_liminf": "HOLDS", "closed_limsup": "HOLDS",
    "consistent": true
  }
})"},
      {"harmonic_levy",
       "Levy measure on R: sum_k delta_{1/k}, K(r) = ceil(1/r), integral of min(x^2, 1) equal to pi^2/6",
       R"({
  "schema_version": 1,
  "name": "harmonic_levy",
  "description": "Truncations eta_n = sum_{k <= n} delta_{1/k} of the infinite measure eta_0 = sum_k delta_{1/k}, which is finite outside every neighbourhood of 0 and satisfies the Levy integrability condition.",
  "space": {"dimension": 1, "x0": [0]},
  "family": {"kind": "truncation", "measure": {"builtin": "harmonic_levy"}},
  "levy": {"cutoff": 10000},
  "expected": {
    "i": "HOLDS", "ii": "HOLDS", "iii": "HOLDS", "iv": "HOLDS", "v": "HOLDS",
    "vi": "HOLDS", "vi_a": "HOLDS", "vi_b": "HOLDS",
    "consistent": true, "levy": true
  }
})"},
      {"heavy_levy", "sum_k k delta_{1/k}: finite away from 0 but not a Levy measure",
       R"({
  "schema_version": 1,
  "name": "heavy_levy",
  "description": "Truncations of eta_0 = sum_k k delta_{1/k}. The family converges away from 0, but the integral of min(x^2, 1) diverges like the harmonic series.",
  "space": {"dimension": 1, "x0": [0]},
  "family": {"kind": "truncation", "measure": {"builtin": "heavy_levy"}},
  "levy": {"cutoff": 10000},
  "expected": {
    "i": "HOLDS", "ii": "HOLDS", "iii": "HOLDS", "iv": "HOLDS", "v": "HOLDS",
    "vi": "HOLDS", "vi_a": "HOLDS", "vi_b": "HOLDS",
    "consistent": true, "levy": false
  }
})"},
      {"vanishing_to_center", "delta_{1/n} -> 0; unit mass escapes into x0",
       R"({
  "schema_version": 1,
  "name": "vanishing_to_center",
  "description": "eta_n = delta_{1/n} against the zero measure. Away from x0 the family converges; as bounded measures the mass absorbed at x0 breaks the closed-set inequality at [-1, 1].",
  "space": {"dimension": 1, "x0": [0]},
  "family": {
    "kind": "parametric",
    "atoms": [{"loc": [0], "loc_rate": [1], "mass": 1}],
    "limit": {"atoms": []}
  },
  "expected": {
    "i": "HOLDS", "ii": "HOLDS", "iii": "HOLDS", "iv": "HOLDS", "v": "HOLDS",
    "vi": "HOLDS", "vi_a": "HOLDS", "vi_b": "HOLDS",
    "open_liminf": "HOLDS", "closed_limsup": "FAILS",
    "consistent": true
  }
})"},
      {"unit_dirac_to_center", "delta_{1/n} -> delta_0; converges both away from x0 and as bounded measures",
       R"({
  "schema_version": 1,
  "name": "unit_dirac_to_center",
  "description": "eta_n = delta_{1/n} against eta_0 = delta_0.",
  "space": {"dimension": 1, "x0": [0]},
  "family": {
    "kind": "parametric",
    "atoms": [{"loc": [0], "loc_rate": [1], "mass": 1}],
    "limit": {"atoms": [{"loc": [0], "mass": 1}], "center_atoms_allowed": true}
  },
  "expected": {
    "i": "HOLDS", "ii": "HOLDS", "iii": "HOLDS", "iv": "HOLDS", "v": "HOLDS",
    "vi": "HOLDS", "vi_a": "HOLDS", "vi_b": "HOLDS",
    "open_liminf": "HOLDS", "closed_limsup": "HOLDS",
    "consistent": true
  }
})"},
      {"escape_to_infinity", "delta_n -> 0; mass escapes to infinity, every condition fails except (vi)(b)",
       R"({
  "schema_version": 1,
  "name": "escape_to_infinity",
  "description": "eta_n = delta_n against the zero measure. Mass outside every neighbourhood of x0 stays 1, so the family does not converge; on bounded probes it vanishes.",
  "space": {"dimension": 1, "x0": [0]},
  "family": {
    "kind": "parametric",
    "atoms": [{"loc": [0], "loc_drift": [1], "mass": 1}],
    "limit": {"atoms": []}
  },
  "expected": {
    "i": "FAILS", "ii": "FAILS", "iii": "FAILS", "iv": "FAILS", "v": "FAILS",
    "vi": "FAILS", "vi_a": "FAILS", "vi_b": "HOLDS",
    "open_liminf": "HOLDS", "closed_limsup": "HOLDS",
    "consistent": true
  }
})"},
  };
  return registry;
}

inline const Builtin* find_builtin(const std::string& name) {
  for (const auto& b : builtin_scenarios())
    if (b.name == name) return &b;
  return nullptr;
}

inline Json builtin_document(const std::string& name) {
  const Builtin* b = find_builtin(name);
  if (!b) throw Error(ErrorCode::NotFound, "no builtin scenario named '" + name + "'");
  return parse_json_text(b->document, "builtin:" + name);
}

/// Resolves `target` as an existing file first, then as a builtin name.
inline Json load_scenario_document(const std::string& target) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(target, ec)) return read_json_file(target);
  if (find_builtin(target)) return builtin_document(target);
  throw Error(ErrorCode::NotFound, "'" + target + "' is neither a readable file nor a builtin scenario");
}

}  // namespace portmanteau
