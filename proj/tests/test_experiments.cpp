#include "ahlab/errors.hpp"
#include "ahlab/experiments.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ahlab;
using namespace ahlab::cli;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ahlab_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Errc config_code(const std::string& experiment, const Json& user) {
  try {
    resolve_config(experiment, user);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::precondition;
}

}  // namespace

TEST(Config, DefaultsResolveForEveryExperiment) {
  for (const auto& e : experiments()) {
    const ExperimentConfig c = resolve_config(e.id, Json());
    EXPECT_EQ(c.experiment, e.id);
    EXPECT_TRUE(c.parameters.is_object());
    EXPECT_EQ(c.resolved()["schema_version"], kSchemaVersion);
  }
  EXPECT_EQ(resolve_config("compare", Json()).seed, 20240601u);
}

TEST(Config, OverridesAndPrecedence) {
  const Json user{{"seed", 5}, {"output_dir", "a"}, {"parameters", {{"lambda0", 2.5}}}, {"tolerances", {{"tol", 1e-8}}}};
  const ExperimentConfig c = resolve_config("riccati", user, 9, std::filesystem::path("b"));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.output_dir, std::filesystem::path("b"));
  EXPECT_EQ(c.parameters["lambda0"], 2.5);
  EXPECT_EQ(c.parameters["r1"], 20.0);
  EXPECT_EQ(c.tolerances["tol"], 1e-8);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_EQ(config_code("riccati", Json{{"tolerances", {{"tol", -1.0}}}}), Errc::config);
  EXPECT_EQ(config_code("riccati", Json{{"bogus", 1}}), Errc::config);
  EXPECT_EQ(config_code("riccati", Json{{"parameters", {{"bogus", 1}}}}), Errc::config);
  EXPECT_EQ(config_code("riccati", Json{{"parameters", {{"samples", 2.5}}}}), Errc::config);
  EXPECT_EQ(config_code("riccati", Json{{"schema_version", 2}}), Errc::config);
  EXPECT_EQ(config_code("riccati", Json{{"experiment", "compare"}}), Errc::config);
  EXPECT_EQ(config_code("riccati", Json{{"seed", -3}}), Errc::config);
  EXPECT_EQ(config_code("riccati", Json::array()), Errc::config);
  EXPECT_EQ(config_code("compactify", Json{{"parameters", {{"y", {0.3}}}}}), Errc::config);
  EXPECT_EQ(config_code("full-suite", Json{{"parameters", {{"criteria", {11}}}}}), Errc::config);
  EXPECT_EQ(config_code("nope", Json()), Errc::config);
}

TEST(Run, ExitCodesAndManifest) {
  const auto dir = scratch("codes");
  std::ostringstream log;
  EXPECT_EQ(run_command("riccati", std::nullopt, dir, std::nullopt, log), ExitCode::ok);
  const Json manifest = Json::parse(slurp(dir / "riccati" / "manifest.json"));
  EXPECT_EQ(manifest["version"], library_version());
  EXPECT_EQ(manifest["config"]["parameters"]["lambda0"], 3.0);
  EXPECT_TRUE(manifest["pass"].get<bool>());
  EXPECT_EQ(manifest["artifacts"].size(), 2u);

  std::ofstream(dir / "bad.json") << R"({"tolerances": {"tol": -1}})";
  EXPECT_EQ(run_command("riccati", dir / "bad.json", dir, std::nullopt, log), ExitCode::schema);
  std::ofstream(dir / "broken.json") << "{";
  EXPECT_EQ(run_command("riccati", dir / "broken.json", dir, std::nullopt, log), ExitCode::schema);
  std::ofstream(dir / "hyp.json") << R"({"parameters": {"envelope_constant": 0.1}})";
  EXPECT_EQ(run_command("riccati", dir / "hyp.json", dir, std::nullopt, log), ExitCode::schema);
  // The Omega = -2 model run grows like e^r, above the 2 + Omega bound.
  std::ofstream(dir / "omega.json") << R"({"parameters": {"Omega": -2}})";
  EXPECT_EQ(run_command("model-system", dir / "omega.json", dir, std::nullopt, log), ExitCode::check_failed);
  // A cap far below the solution's size halts the run: a failed check, not an error.
  std::ofstream(dir / "cap.json") << R"({"parameters": {"cap": 10}})";
  EXPECT_EQ(run_command("model-system", dir / "cap.json", dir, std::nullopt, log), ExitCode::check_failed);
  std::filesystem::remove_all(dir);
}

TEST(Run, RepeatedRunsGiveIdenticalCsv) {
  const auto a = scratch("rep_a"), b = scratch("rep_b");
  std::ostringstream log;
  for (const char* e : {"riccati", "shape-metric", "model-system"}) {
    ASSERT_EQ(run_command(e, std::nullopt, a, std::nullopt, log), ExitCode::ok) << e;
    ASSERT_EQ(run_command(e, std::nullopt, b, std::nullopt, log), ExitCode::ok) << e;
  }
  std::size_t compared = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    const auto rel = std::filesystem::relative(entry.path(), a);
    EXPECT_EQ(slurp(entry.path()), slurp(b / rel)) << rel;
    ++compared;
  }
  EXPECT_GE(compared, 4u);
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(Run, CompareUsesTheSeed) {
  const auto dir = scratch("seed");
  std::ostringstream log;
  std::ofstream(dir / "c.json") << R"({"parameters": {"instances": 5}})";
  ASSERT_EQ(run_command("compare", dir / "c.json", dir, 77, log), ExitCode::ok);
  const Json fuzz = Json::parse(slurp(dir / "compare" / "fuzz.json"));
  EXPECT_EQ(fuzz["seed"], 77u);
  EXPECT_EQ(fuzz["records"].size(), 5u);
  std::filesystem::remove_all(dir);
}

TEST(Run, CounterexampleAuditOnCoarseGrid) {
  const auto dir = scratch("audit");
  std::ostringstream log;
  std::ofstream(dir / "a.json") << R"({"parameters": {"per_decade": 6, "y_samples": 16}})";
  ASSERT_EQ(run_command("counterexample-audit", dir / "a.json", dir, std::nullopt, log), ExitCode::ok) << log.str();
  const Json lip = Json::parse(slurp(dir / "counterexample-audit" / "lipschitz.json"));
  EXPECT_EQ(lip["verdict"], "LOG_BLOWUP");
  std::ofstream(dir / "b.json") << R"({"parameters": {"rho_min": 0.5, "rho_max": 0.1}})";
  EXPECT_EQ(run_command("counterexample-audit", dir / "b.json", dir, std::nullopt, log), ExitCode::schema);
  std::filesystem::remove_all(dir);
}

TEST(Selftest, Passes) {
  std::ostringstream log;
  EXPECT_EQ(selftest(log), ExitCode::ok) << log.str();
  EXPECT_EQ(log.str().find("[FAIL]"), std::string::npos);
}
