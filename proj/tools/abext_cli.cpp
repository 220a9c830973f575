#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "abext/suites.hpp"

using namespace abext;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

struct Common {
  std::string out;
  double tolerance_scale = 1.0;
  int steps = 32;
};

EquiPair circle_pair(const json& e) {
  Diffeo phi = Diffeo::identity(Base::S1);
  if (e.contains("displacement")) phi = Diffeo::from_displacement(trigpoly_from_json(e.at("displacement")));
  if (e.contains("rotation")) phi = Diffeo::rotation(e.at("rotation").get<double>()) * phi;
  return {phi, Eigen::MatrixXd::Constant(1, 1, e.value("u", 1.0))};
}

ExactChart circle_chart(const json& cfg, const Tolerances& tol) {
  VForm alpha = VForm::one_form(Base::S1, {TrigPoly2::from_x(TrigPoly::cos_mode(1))});
  if (cfg.contains("alpha")) alpha = vform_from_json(cfg.at("alpha"));
  return ExactChart(BundleChart::trivial(alpha), Point(cfg.value("x0", 0.0), 0.0), cfg.value("budget", 32), tol);
}

json obstructions_json(const std::string& toy, double sigma) {
  ToyGroup g = ToyGroup::symplectic(toy == "torus" ? ToyKind::Torus : ToyKind::Rn);
  g.sigma[0] *= sigma;
  const Obstructions o = obstructions(g);
  json flux = json::array();
  for (const auto& f : o.flux) flux.push_back(to_json(Eigen::MatrixXd(f)));
  return {{"toy", toy},
          {"sigma", sigma},
          {"period_group", json::array()},
          {"loops", o.loops},
          {"flux", flux},
          {"ce_residual", o.ce_residual},
          {"verdict", o.verdict}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cocycle, flux, holonomy and extension verification"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--out", common.out, "output file (default stdout)");
  app.add_option("--tolerance-scale", common.tolerance_scale, "multiply every tolerance")->check(CLI::PositiveNumber);
  app.add_option("--steps", common.steps, "time intervals K of paths")->check(CLI::PositiveNumber);

  // verify
  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  std::string suite, config_path, plot, plot_out;
  unsigned seed = 1;
  int trials = -1;
  bool no_timing = false, list = false;
  verify->add_option("--suite", suite, "suite name");
  verify->add_option("--config", config_path, "suite configuration (JSON)");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--trials", trials, "trial count (suite default when omitted)");
  verify->add_option("--plot", plot, "residual-histogram or flux-path-trace");
  verify->add_option("--plot-out", plot_out, "CSV destination for --plot");
  verify->add_flag("--no-timing", no_timing, "omit timing fields from the report");
  verify->add_flag("--list", list, "print suite names");

  // flux
  auto* flux = app.add_subcommand("flux", "flux class of a path");
  std::string path_file, chart_file, mode = "eq";
  flux->add_option("--path", path_file, "path file (JSON)")->required();
  flux->add_option("--chart", chart_file, "chart file (JSON)")->required();
  flux->add_option("--mode", mode, "eq or invariant")->check(CLI::IsMember({"eq", "invariant"}));
  flux->add_option("--plot-out", plot_out, "flux-path-trace CSV");

  // holonomy
  auto* hol = app.add_subcommand("holonomy", "holonomy of a loop by transport and by Stokes");
  std::string loop_file;
  hol->add_option("--chart", chart_file, "chart file (JSON)")->required();
  hol->add_option("--loop", loop_file, "loop file (JSON)")->required();

  // extension
  auto* ext = app.add_subcommand("extension", "group 2-cocycle and extension group law");
  ext->require_subcommand(1);
  ext->fallthrough();
  auto* mult = ext->add_subcommand("mult", "multiply extension elements in order");
  auto* coc = ext->add_subcommand("cocycle", "c(g1, g2) with its spread and cocycle defect");
  auto* eobs = ext->add_subcommand("obstructions", "integration obstructions of a toy group");
  for (auto* s : {mult, coc}) s->add_option("--config", config_path, "elements file (JSON)")->required();
  std::string toy = "rn";
  double sigma = 1.0;
  auto* obs = app.add_subcommand("obstructions", "integration obstructions of a toy group");
  for (auto* s : {eobs, obs}) {
    s->add_option("--toy", toy, "rn or torus")->check(CLI::IsMember({"rn", "torus"}));
    s->add_option("--sigma", sigma, "sigma(e1, e2)");
  }

  CLI11_PARSE(app, argc, argv);
  const Tolerances tol = default_tolerances().scaled(common.tolerance_scale);

  try {
    if (*verify) {
      if (list) {
        for (const auto& n : suite_names()) std::cout << n << "\n";
        return 0;
      }
      SuiteConfig cfg;
      if (!config_path.empty()) cfg = suite_config_from_json(read_json(config_path));
      if (!suite.empty()) cfg.suite = suite;
      if (cfg.suite.empty()) throw std::invalid_argument("no suite given");
      if (verify->count("--seed")) cfg.seed = seed;
      if (verify->count("--trials")) cfg.trials = trials;
      if (app.count("--tolerance-scale")) cfg.tolerance_scale = common.tolerance_scale;
      if (app.count("--steps")) cfg.steps = common.steps;
      const Report r = run_suite(cfg);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      for (const auto& c : r.checks)
        if (!c.pass) std::cerr << "FAIL " << c.name << ": residual " << c.residual << " > " << c.tolerance << "\n";
      write_json(common.out, report_to_json(r, !no_timing));
      if (!plot.empty()) write_text(plot_out, emit_plot_data(r, plot_kind_from_string(plot)));
      return r.passed() ? 0 : 1;
    }
    if (*flux) {
      const BundleChart chart = chart_from_json(read_json(chart_file));
      const PathInput p = path_from_json(read_json(path_file), chart.vdim(), common.steps);
      json j = {{"mode", mode}};
      if (mode == "eq") {
        const CohClass1 c = flux_eq_path(p.phi, p.u, chart);
        j["loops"] = c.loops;
        j["evaluations"] = to_json(c.evaluations);
        j["reduced"] = to_json(c.reduced());
        json lat = json::array();
        for (const auto& l : c.lattices) lat.push_back(to_json(l.basis()));
        j["lattices"] = lat;
        if (!plot_out.empty()) {
          Report r;
          Series s;
          s.columns = {"t"};
          for (const auto& l : c.loops) s.columns.push_back(l);
          const auto trace = flux_eq_trace(p.phi, p.u, chart);
          for (std::size_t k = 1; k < trace.size(); ++k)
            for (Eigen::Index v = 0; v < trace[k].second.rows(); ++v) {
              std::vector<double> row{trace[k].first};
              for (Eigen::Index i = 0; i < trace[k].second.cols(); ++i) row.push_back(trace[k].second(v, i));
              s.rows.push_back(row);
            }
          r.series["flux-path-trace"] = s;
          write_text(plot_out, emit_plot_data(r, PlotKind::FluxPathTrace));
        }
      } else {
        const InvariantFlux f = flux_invariant_path(p.phi, chart.omega(), {}, tol);
        j["loops"] = f.right.loops;
        j["evaluations"] = to_json(f.right.evaluations);
        j["reduced"] = to_json(f.right.reduced());
        j["left_right_agreement"] = f.agreement;
        j["invariance"] = f.invariance;
      }
      write_json(common.out, j);
      return 0;
    }
    if (*hol) {
      const BundleChart chart = chart_from_json(read_json(chart_file));
      const Loop loop = loop_from_json(read_json(loop_file));
      const Holonomy h = holonomy(chart, loop, tol, std::max(common.steps, 256));
      write_json(common.out, {{"transport", to_json(h.transport)},
                              {"stokes", to_json(h.stokes)},
                              {"winding", {h.winding.x(), h.winding.y()}},
                              {"discrepancy", h.discrepancy}});
      return 0;
    }
    if (*ext) {
      if (*eobs) {
        write_json(common.out, obstructions_json(toy, sigma));
        return 0;
      }
      const json cfg = read_json(config_path);
      const ExactChart chart = circle_chart(cfg, tol);
      std::vector<ExtElement> els;
      for (const auto& e : cfg.at("elements"))
        els.push_back(ext_element(circle_pair(e), Eigen::VectorXd::Constant(1, e.value("a", 0.0)), chart));
      if (els.empty()) throw SchemaError("elements: at least one element required");
      if (*mult) {
        ExtElement p = els.front();
        for (std::size_t i = 1; i < els.size(); ++i) p = ext_multiply(p, els[i], chart);
        json j = {{"u", p.g.u(0, 0)}, {"a", p.a(0)}, {"phi_at_0", p.g.phi(Point::Zero()).x()}};
        if (els.size() == 3) {
          const ExtElement q = ext_multiply(els[0], ext_multiply(els[1], els[2], chart), chart);
          j["associativity"] = ext_distance(p, q);
        }
        write_json(common.out, j);
        return 0;
      }
      if (els.size() < 2) throw SchemaError("elements: c needs two elements");
      const CocycleSpread s = group_2cocycle_spread(els[0].g, els[1].g, chart);
      json j = {{"c", s.value(0)}, {"spread", s.spread}};
      if (els.size() >= 3) {
        const auto c = [&](const EquiPair& a, const EquiPair& b) { return group_2cocycle(a, b, chart, chart.x0()); };
        j["cocycle_defect"] = group_cocycle_defect(c, els[0].g, els[1].g, els[2].g)(0);
      }
      write_json(common.out, j);
      return 0;
    }
    if (*obs) {
      write_json(common.out, obstructions_json(toy, sigma));
      return 0;
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
