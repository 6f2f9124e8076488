#include "ahlab/acceptance.hpp"
#include "ahlab/errors.hpp"
#include "ahlab/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace ahlab;

namespace {

std::string render(const CsvTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

}  // namespace

TEST(Csv, HeaderCommentThenRows) {
  CsvTable t{"demo", {"r [1]", "q [m]"}, {{0.5, 1.0 / 3.0}, {1.0, std::numeric_limits<double>::quiet_NaN()}}};
  const std::string s = render(t);
  std::istringstream in(s);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# demo: r [1], q [m]");
  std::getline(in, line);
  EXPECT_EQ(line, "0.5,0.33333333333333331");
  std::getline(in, line);
  EXPECT_EQ(line, "1,nan");
  EXPECT_FALSE(std::getline(in, line));
}

TEST(Csv, RoundTripPrecision) {
  const double v = std::exp(1.2345);
  CsvTable t{"x", {"v [1]"}, {{v}}};
  const std::string s = render(t);
  EXPECT_EQ(std::stod(s.substr(s.find('\n') + 1)), v);
}

TEST(Csv, TrajectoryExportsAreDeterministic) {
  ModelSystemParams p;
  ModelRunOptions o;
  o.cap = 1e30;
  const std::string a = render(to_csv(solve_model_system(p, 10.0, o)));
  const std::string b = render(to_csv(solve_model_system(p, 10.0, o)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("# model system: r [1], u [1], v [1]\n", 0), 0u);
}

TEST(Csv, EnvelopeColumnsInactiveBeforeHalf) {
  ScalarRiccatiProblem p;
  p.f = [](double) { return 1.0; };
  p.lambda0 = 0.1;
  p.r1 = 5.0;
  const ScalarTrajectory t = integrate_scalar_riccati(p);
  const EnvelopeReport rep = lemma_decay_envelope_check(t, 0.0, 0.1);
  const CsvTable table = to_csv(t, rep);
  ASSERT_EQ(table.rows.size(), t.r.size());
  EXPECT_TRUE(std::isnan(table.rows.front()[3]));
  EXPECT_FALSE(std::isnan(table.rows.back()[3]));
  EXPECT_DOUBLE_EQ(table.rows.front()[2], 1.0 + rep.k_upper);
}

TEST(Csv, GbarGridRowsPerComponent) {
  const CompactifiedMetric m = make_counterexample_metric(CounterexampleMetric{});
  const GbarDerivativeGrid g = gbar_derivative_grid(m, {{0.0, 0.0}, {0.5, 0.0}}, {0.1, 0.01});
  const CsvTable t = to_csv(g);
  // 4 cells, 3 directions, 3 upper-triangular entries each.
  EXPECT_EQ(t.rows.size(), 4u * 3u * 3u);
  EXPECT_EQ(t.columns.size(), 1u + 2u + 4u);
}

TEST(Json, LipschitzReportFields) {
  const LipschitzReport rep = lipschitz_verdict({1e-3, 1e-2, 1e-1}, {2 * std::log(1e3), 2 * std::log(1e2), 2 * std::log(10.0)});
  const Json j = to_json(rep);
  EXPECT_EQ(j["verdict"], "LOG_BLOWUP");
  EXPECT_NEAR(j["slope"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(j["window"].size(), 2u);
  EXPECT_TRUE(j.contains("bound"));
  EXPECT_TRUE(j.contains("r_squared"));
}

TEST(Json, FuzzSummaryCarriesSeedParametersAndVerdicts) {
  const FuzzSummary s = fuzz_ode_compare(11, 3);
  const Json j = to_json(s);
  EXPECT_EQ(j["seed"], 11u);
  EXPECT_EQ(j["records"].size(), 3u);
  EXPECT_EQ(j["records"][0]["coefficients"].size(), 18u);
  EXPECT_EQ(j["records"][0]["verdict"], "holds");
  EXPECT_EQ(to_json(fuzz_ode_compare(11, 3)).dump(), j.dump());
}

TEST(Json, NonFiniteBecomesNull) {
  DecayFit f;
  f.exponent = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(to_json(f)["exponent"].is_null());
}

TEST(Json, WritesFilesAndCreatesDirectories) {
  const auto dir = std::filesystem::temp_directory_path() / "ahlab_report_test";
  std::filesystem::remove_all(dir);
  write_json(dir / "sub" / "x.json", Json{{"a", 1}});
  write_csv(dir / "t.csv", CsvTable{"t", {"a [1]"}, {{1.0}}});
  std::ifstream in(dir / "sub" / "x.json");
  EXPECT_EQ(Json::parse(in)["a"], 1);
  EXPECT_TRUE(std::filesystem::exists(dir / "t.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Acceptance, CheapCriterionAndFormatting) {
  const CriterionResult r = run_criterion(3);
  EXPECT_TRUE(r.pass) << r.details;
  EXPECT_EQ(format_line(r).rfind("[PASS] 3 decay fitting", 0), 0u);
  EXPECT_THROW(run_criterion(0), Error);
  EXPECT_THROW(run_criterion(11), Error);
}
