// portmanteau: run, list, validate and show convergence scenarios.
//
// Exit codes: 0 success, 1 error (parse, validation, I/O), 2 the run was
// inconsistent or disagreed with the scenario's expected verdicts.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "portmanteau.hpp"

namespace {

int cmd_run(const std::string& target, const portmanteau::ScenarioOverrides& overrides, const std::string& format,
            const std::string& out_path) {
  auto doc = portmanteau::load_scenario_document(target);
  auto result = portmanteau::run_scenario(doc, overrides);
  std::string text = format == "text" ? portmanteau::render_text(result.report)
                                      : portmanteau::serialize_json(result.report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw portmanteau::Error(portmanteau::ErrorCode::NotFound, "cannot write " + out_path);
    out << text;
  }
  if (!result.consistent) std::cerr << "inconsistent verdicts among conditions (i)-(vi)\n";
  if (!result.expected_match) std::cerr << "verdicts differ from the scenario's expected block\n";
  return result.consistent && result.expected_match ? 0 : 2;
}

int cmd_list() {
  for (const auto& b : portmanteau::builtin_scenarios()) std::cout << b.name << " - " << b.summary << "\n";
  return 0;
}

int cmd_validate(const std::string& target) {
  portmanteau::Json doc;
  try {
    doc = portmanteau::load_scenario_document(target);
  } catch (const portmanteau::Error& e) {
    std::cout << e.what() << "\n";
    return 1;
  }
  auto diags = portmanteau::validate_scenario(doc);
  if (diags.empty()) {
    std::cout << "ok\n";
    return 0;
  }
  for (const auto& d : diags) std::cout << d << "\n";
  return 1;
}

int cmd_show(const std::string& name) {
  const auto* b = portmanteau::find_builtin(name);
  if (!b) throw portmanteau::Error(portmanteau::ErrorCode::NotFound, "no builtin scenario named '" + name + "'");
  std::cout << b->document << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of the portmanteau equivalences for measures finite away from a point"};
  app.require_subcommand(1);

  std::string target, format = "json", out_path;
  std::optional<std::size_t> n_max;
  std::optional<double> tol;
  bool levy = false;
  auto* run = app.add_subcommand("run", "Run a scenario file or builtin and emit a report");
  run->add_option("scenario", target, "Scenario file or builtin name")->required();
  run->add_option("--n-max", n_max, "Largest n on the geometric grid")->check(CLI::PositiveNumber);
  run->add_option("--tol", tol, "Convergence tolerance")->check(CLI::NonNegativeNumber);
  run->add_option("--out", out_path, "Write the report to this file");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  run->add_flag("--levy", levy, "Also run the Levy-measure check on the limit");

  auto* list = app.add_subcommand("list", "List builtin scenarios");

  std::string validate_target;
  auto* validate = app.add_subcommand("validate", "Check a scenario file or builtin");
  validate->add_option("scenario", validate_target, "Scenario file or builtin name")->required();

  std::string show_name;
  auto* show = app.add_subcommand("show", "Print a builtin scenario document");
  show->add_option("name", show_name, "Builtin name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(target, {n_max, tol, levy}, format, out_path);
    if (*list) return cmd_list();
    if (*validate) return cmd_validate(validate_target);
    if (*show) return cmd_show(show_name);
  } catch (const portmanteau::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
