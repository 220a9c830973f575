#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abext/extension.hpp"
#include "abext/io.hpp"

namespace abext {

struct SchemaError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input files of the CLI.
BundleChart chart_from_json(const json& j);
/// {"polygon": [[x,y],..]}, {"circle": {"center", "radius"}} or
/// {"trig_curve": {"origin", "drift", "px", "py"}}.
Loop loop_from_json(const json& j);

/// Diffeomorphism path plus GL(V) path read from {"base", "field" | "translation", "generator"?}.
struct PathInput {
  DiffeoPath phi;
  GLPath u;
};
PathInput path_from_json(const json& j, int vdim, int steps);

struct SuiteConfig {
  std::string suite;
  std::map<std::string, std::string> inputs;  // named input files
  double tolerance_scale = 1.0;
  unsigned seed = 1;
  int trials = -1;      // -1 picks the suite default
  int steps = 32;       // time intervals K of generated paths
  double perturb = 0.0; // added to the circle cocycles of ce2 suites
};

SuiteConfig suite_config_from_json(const json& j);

struct Check {
  std::string name;
  std::string anchor;  // which identity the check exercises
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  static constexpr int kSchemaVersion = 1;
  std::string suite;
  unsigned seed = 1;
  double tolerance_scale = 1.0;
  int trials = 0;
  std::vector<Check> checks;              // sorted by name
  std::map<std::string, Series> series;   // "residuals", "flux-path-trace"
  std::vector<std::string> warnings;
  double seconds = 0.0;

  bool passed() const;
  void add(std::string name, std::string anchor, double residual, double tolerance);
};

std::vector<std::string> suite_names();
int default_trials(const std::string& suite);

/// Runs a named suite. Throws std::invalid_argument for an unknown suite.
Report run_suite(const SuiteConfig& config);

/// Report schema v1. Timing lives under "timing" and is omitted when `timing` is false.
json report_to_json(const Report& r, bool timing = true);

enum class PlotKind { ResidualHistogram, FluxPathTrace };
PlotKind plot_kind_from_string(const std::string& s);

/// CSV with a header row. An empty report gives the header only; a missing
/// series in a nonempty report throws std::invalid_argument.
std::string emit_plot_data(const Report& r, PlotKind kind);

}  // namespace abext
