#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "portmanteau.hpp"

using namespace portmanteau;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(PORTMANTEAU_CLI) + " " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "portmanteau_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_scratch(const std::string& name, const std::string& text) {
  auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = R"({
  "schema_version": 1, "name": "minimal",
  "space": {"dimension": 1, "x0": [0]},
  "family": {"kind": "constant", "measure": {"atoms": [{"loc": [1], "mass": 1}]}}
})";

std::string validation_error(const std::string& text) {
  auto diags = validate_scenario(parse_json_text(text, "t"));
  return diags.empty() ? "" : diags.front();
}

}  // namespace

TEST(Json, ParseErrorsCarryLineAndColumn) {
  try {
    parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}", "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("bad.json:3:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(read_json_file("/nonexistent/x.json"), Error);
}

TEST(Json, SerializerIsStableAndRoundTrips) {
  Json j{{"b", 0.1}, {"a", {1, 2, 3}}, {"c", {{"z", nullptr}, {"y", true}}}, {"d", 1e-9}};
  std::string s = serialize_json(j);
  EXPECT_EQ(s, "{\n  \"a\": [1, 2, 3],\n  \"b\": 0.10000000000000001,\n  \"c\": {\n    \"y\": true,\n    \"z\": null\n  },\n"
               "  \"d\": 1.0000000000000001e-09\n}\n");
  EXPECT_EQ(Json::parse(s), j);
  EXPECT_EQ(serialize_json(Json{{"x", INFINITY}}), "{\n  \"x\": \"inf\"\n}\n");
}

TEST(Validation, DiagnosticsNameTheOffendingField) {
  EXPECT_EQ(validation_error(kMinimal), "");
  auto bad_mass = std::string(kMinimal);
  bad_mass.replace(bad_mass.find("\"mass\": 1"), 9, "\"mass\": 0");
  EXPECT_NE(validation_error(bad_mass).find("atom mass must be positive"), std::string::npos);
  auto extra = std::string(kMinimal);
  extra.replace(extra.find("\"name\""), 6, "\"colour\": 1, \"name\"");
  EXPECT_NE(validation_error(extra).find("colour"), std::string::npos);
  auto version = std::string(kMinimal);
  version.replace(version.find("\"schema_version\": 1"), 19, "\"schema_version\": 9");
  EXPECT_NE(validation_error(version), "");
  EXPECT_NE(validation_error(R"({"schema_version": 1, "name": "q", "arithmetic": "rational",
    "space": {"dimension": 2, "x0": [0, 0]},
    "family": {"kind": "constant", "measure": {"atoms": [{"loc": [1, 0], "mass": 1}]}}})"), "");
  EXPECT_NE(validation_error(R"({"schema_version": 1, "name": "t",
    "space": {"dimension": 1, "x0": [0]},
    "family": {"kind": "constant", "measure": {"power_law": {"direction": [1], "tail_locator": false}}}})")
                .find("tail_locator"),
            std::string::npos);
  EXPECT_NE(validation_error(R"({"schema_version": 1, "name": "c",
    "space": {"dimension": 1, "x0": [0]},
    "family": {"kind": "constant", "measure": {"atoms": [{"loc": [1], "mass": 1}]}},
    "config": {"tol": 0.1, "fail_threshold": 0.01}})"), "");
}

TEST(Builtins, EveryBuiltinMatchesItsDeclaredVerdicts) {
  ASSERT_GE(builtin_scenarios().size(), 8u);
  for (const auto& b : builtin_scenarios()) {
    auto doc = builtin_document(b.name);
    ASSERT_TRUE(doc.contains("expected")) << b.name;
    auto res = run_scenario(doc);
    EXPECT_TRUE(res.consistent) << b.name;
    EXPECT_TRUE(res.expected_match) << b.name << ": " << serialize_json(res.report["expected_check"]);
    for (const auto& key : {"i", "ii", "iii", "iv", "v", "vi_a", "vi_b"})
      EXPECT_NE(res.report["conditions"][key]["status"], "INDETERMINATE") << b.name << " " << key;
  }
}

TEST(Builtins, ReportsAreDeterministic) {
  for (const auto& b : builtin_scenarios()) {
    auto doc = builtin_document(b.name);
    EXPECT_EQ(serialize_json(run_scenario(doc).report), serialize_json(run_scenario(doc).report)) << b.name;
  }
}

TEST(Builtins, OverridesAndTextRendering) {
  auto res = run_scenario(builtin_document("moving_atom"), {std::size_t(1024), std::nullopt, false});
  EXPECT_EQ(res.report["settings"]["n_max"], 1024);
  EXPECT_EQ(res.report["settings"]["grid"].size(), 11u);
  auto text = render_text(run_scenario(builtin_document("remark_dirac_shift")).report);
  EXPECT_NE(text.find("U=(-1, 1)"), std::string::npos);
  EXPECT_NE(text.find("FAILS"), std::string::npos);
  EXPECT_THROW(builtin_document("nope"), Error);
  EXPECT_THROW(load_scenario_document("nope"), Error);
}

TEST(Cli, ListShowAndScenarioExports) {
  auto list = cli("list");
  EXPECT_EQ(list.code, 0);
  for (const auto& b : builtin_scenarios()) {
    EXPECT_NE(list.out.find(b.name + " - "), std::string::npos) << b.name;
    auto shown = cli("show " + b.name);
    EXPECT_EQ(shown.code, 0);
    fs::path exported = fs::path(PORTMANTEAU_SOURCE_DIR) / "scenarios" / (b.name + ".json");
    ASSERT_TRUE(fs::exists(exported)) << exported;
    EXPECT_EQ(Json::parse(shown.out), Json::parse(slurp(exported))) << b.name;
  }
  EXPECT_EQ(cli("show nope").code, 1);
}

TEST(Cli, ExitCodes) {
  auto out = scratch("dirac.json");
  auto ok = cli("run remark_dirac_shift --out " + out.string());
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_EQ(slurp(out), serialize_json(run_scenario(builtin_document("remark_dirac_shift")).report));

  auto text = cli("run moving_atom --format text --n-max 4096");
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("HOLDS"), std::string::npos);

  EXPECT_EQ(cli("validate remark_scaled_dirac").code, 0);
  EXPECT_EQ(cli("run nope").code, 1);
  EXPECT_EQ(cli("run moving_atom --format xml").code, 1);
  EXPECT_EQ(cli("bogus").code, 1);
  EXPECT_EQ(cli("--help").code, 0);

  auto syntax = write_scratch("syntax.json", "{\n  \"schema_version\": 1,\n  \"name\": ,\n}");
  auto parse = cli("run " + syntax.string());
  EXPECT_EQ(parse.code, 1);
  EXPECT_NE(parse.out.find("syntax.json:3:"), std::string::npos) << parse.out;

  std::string zero(kMinimal);
  zero.replace(zero.find("\"mass\": 1"), 9, "\"mass\": 0");
  auto invalid = cli("validate " + write_scratch("zero.json", zero).string());
  EXPECT_EQ(invalid.code, 1);
  EXPECT_NE(invalid.out.find("atom mass must be positive"), std::string::npos);

  auto doc = builtin_document("constant_family");
  doc["expected"]["i"] = "FAILS";
  auto mismatch = cli("run " + write_scratch("mismatch.json", doc.dump()).string());
  EXPECT_EQ(mismatch.code, 2);
}

TEST(Cli, LevyFlag) {
  auto res = cli("run " + write_scratch("plain.json", kMinimal).string() + " --levy");
  EXPECT_EQ(res.code, 0);
  auto report = Json::parse(res.out);
  EXPECT_TRUE(report["levy_check"]["is_levy"]);
  EXPECT_EQ(report["levy_check"]["value"], 1.0);
}
