#include <doctest.h>

#include <numeric>
#include <sstream>

#include "abext/suites.hpp"

using namespace abext;

namespace {

SuiteConfig config(const std::string& suite, int trials = -1, unsigned seed = 1) {
  SuiteConfig c;
  c.suite = suite;
  c.trials = trials;
  c.seed = seed;
  return c;
}

int csv_rows(const std::string& csv) { return static_cast<int>(std::count(csv.begin(), csv.end(), '\n')) - 1; }

}  // namespace

TEST_CASE("ce2-all passes and its report is deterministic") {
  const Report a = run_suite(config("ce2-all", 10, 7));
  const Report b = run_suite(config("ce2-all", 10, 7));
  CHECK(a.passed());
  CHECK(a.checks.size() == 2 * builtin_cocycle_names().size());
  CHECK(report_to_json(a, false).dump() == report_to_json(b, false).dump());
  CHECK(report_to_json(a, true).contains("timing"));
  CHECK_FALSE(report_to_json(a, false).contains("timing"));
  CHECK(std::is_sorted(a.checks.begin(), a.checks.end(), [](const Check& x, const Check& y) { return x.name < y.name; }));
  CHECK(report_to_json(a, false)["schema_version"] == 1);

  // histogram counts add up to the number of trials
  const std::string csv = emit_plot_data(a, PlotKind::ResidualHistogram);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "log10_lo,log10_hi,count");
  long total = 0;
  while (std::getline(in, line)) total += std::stol(line.substr(line.rfind(',') + 1));
  CHECK(total == 10 * static_cast<long>(builtin_cocycle_names().size()));

  // another seed changes the residuals
  CHECK(report_to_json(run_suite(config("ce2-all", 10, 8)), false).dump() != report_to_json(a, false).dump());
}

TEST_CASE("perturbed cocycle fails with a named check") {
  const Report r = run_suite(config("ce2-perturbed", 5));
  CHECK_FALSE(r.passed());
  const auto it = std::find_if(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.name == "ce2/sigma1+perturbed"; });
  REQUIRE(it != r.checks.end());
  CHECK_FALSE(it->pass);

  SuiteConfig c = config("ce2-all", 5);
  c.perturb = 1e-2;
  CHECK_FALSE(run_suite(c).passed());
}

TEST_CASE("zero trials and empty reports") {
  const Report r = run_suite(config("holonomy", 0));
  CHECK(r.checks.empty());
  CHECK(r.passed());
  REQUIRE(r.warnings.size() == 1);
  CHECK(emit_plot_data(r, PlotKind::ResidualHistogram) == "log10_lo,log10_hi,count\n");
  CHECK(emit_plot_data(r, PlotKind::FluxPathTrace) == "t\n");
  // a nonempty report without the series
  CHECK_THROWS_AS(emit_plot_data(run_suite(config("spot-values")), PlotKind::FluxPathTrace), std::invalid_argument);
}

TEST_CASE("flux-path-trace has one row per interval") {
  SuiteConfig c = config("flux-trace");
  c.steps = 12;
  const Report r = run_suite(c);
  CHECK(r.passed());
  const std::string csv = emit_plot_data(r, PlotKind::FluxPathTrace);
  CHECK(csv.substr(0, csv.find('\n')) == "t,x,y,fiber0");
  CHECK(csv_rows(csv) == 12);
}

TEST_CASE("tolerance scale multiplies every tolerance") {
  SuiteConfig c = config("spot-values");
  c.tolerance_scale = 10.0;
  const Report r = run_suite(c);
  for (const Check& k : r.checks) CHECK(k.tolerance == doctest::Approx(1e-9));
}

TEST_CASE("config and input schemas") {
  CHECK_THROWS_AS(run_suite(config("nope")), std::invalid_argument);
  CHECK_THROWS_AS(default_trials("nope"), std::invalid_argument);
  CHECK_THROWS_AS(plot_kind_from_string("pie"), std::invalid_argument);

  const SuiteConfig c = suite_config_from_json(json::parse(R"({"suite":"holonomy","seed":4,"trials":3,"steps":16})"));
  CHECK(c.suite == "holonomy");
  CHECK(c.seed == 4);
  CHECK(c.trials == 3);
  CHECK(c.steps == 16);
  CHECK_THROWS_AS(suite_config_from_json(json::parse(R"({"suite":"x","sed":4})")), SchemaError);
  CHECK_THROWS_AS(suite_config_from_json(json::parse(R"({"seed":"four"})")), SchemaError);
  CHECK_THROWS_AS(suite_config_from_json(json::parse(R"([1,2])")), SchemaError);
  CHECK_THROWS_AS(suite_config_from_json(json::parse(R"({"tolerance_scale":0})")), SchemaError);

  CHECK_THROWS_AS(chart_from_json(json::parse(R"({"mode":"twisted"})")), SchemaError);
  CHECK_THROWS_AS(chart_from_json(json::parse(R"({"mode":"magnetic"})")), SchemaError);
  const BundleChart ch = chart_from_json(
      json::parse(R"({"mode":"magnetic","omega":{"base":"T2","degree":2,"vdim":1,"components":[[2.0]]}})"));
  CHECK(ch.lattice().basis()(0, 0) == doctest::Approx(2.0));

  CHECK_THROWS_AS(loop_from_json(json::parse(R"({"polygon":[[0,0]]})")), SchemaError);
  CHECK_THROWS_AS(loop_from_json(json::parse(R"({"polygon":[[0,0,1],[1,1]]})")), SchemaError);
  CHECK_THROWS_AS(loop_from_json(json::parse(R"({"spiral":{}})")), SchemaError);
  const Loop sq = loop_from_json(json::parse(R"({"polygon":[[0,0],[0.5,0],[0.5,0.5],[0,0.5]]})"));
  CHECK(holonomy(ch, sq).stokes(0) == doctest::Approx(-0.5).epsilon(1e-12));

  CHECK_THROWS_AS(path_from_json(json::parse(R"({"base":"T2"})"), 1, 8), SchemaError);
  CHECK_THROWS_AS(path_from_json(json::parse(R"({"translation":[1,0],"generator":[[0,1],[1,0]]})"), 1, 8), SchemaError);
  const PathInput p = path_from_json(json::parse(R"({"translation":[0.5,0.25]})"), 1, 8);
  CHECK(p.phi.grid().intervals() == 8);
}
