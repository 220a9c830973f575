#include "abext/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace abext {

// ------------------------------------------------------------------ inputs

namespace {

Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw SchemaError("point: expected [x, y]");
  return Point(j[0].get<double>(), j[1].get<double>());
}

template <class F>
auto schema(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

BundleChart chart_from_json(const json& j) {
  return schema("chart", [&] {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "trivial") {
      const VForm alpha = vform_from_json(j.at("alpha"));
      if (alpha.degree() != 1) throw SchemaError("chart: alpha must be a 1-form");
      if (j.contains("lattice")) return BundleChart::trivial(alpha, LatticeGroup(matrix_from_json(j.at("lattice"))));
      return BundleChart::trivial(alpha);
    }
    if (mode == "magnetic") {
      const VForm omega = vform_from_json(j.at("omega"));
      if (omega.degree() != 2) throw SchemaError("chart: omega must be a 2-form");
      return BundleChart::magnetic(omega);
    }
    throw SchemaError("chart: unknown mode '" + mode + "'");
  });
}

Loop loop_from_json(const json& j) {
  return schema("loop", [&] {
    if (j.contains("polygon")) {
      std::vector<Point> v;
      for (const auto& p : j.at("polygon")) v.push_back(point_from_json(p));
      if (v.size() < 2) throw SchemaError("loop: polygon needs two vertices");
      return Loop::polygon(v, j.value("close", true));
    }
    if (j.contains("circle")) {
      const auto& c = j.at("circle");
      return Loop::circle(point_from_json(c.at("center")), c.at("radius").get<double>(), c.value("turns", 1));
    }
    if (j.contains("trig_curve")) {
      const auto& c = j.at("trig_curve");
      return Loop::trig_curve(point_from_json(c.at("origin")), point_from_json(c.value("drift", json::array({0, 0}))),
                              trigpoly_from_json(c.at("px")), trigpoly_from_json(c.at("py")));
    }
    throw SchemaError("loop: expected polygon, circle or trig_curve");
  });
}

PathInput path_from_json(const json& j, int vdim, int steps) {
  return schema("path", [&] {
    PathInput p;
    steps = j.value("steps", steps);
    if (steps < 1) throw SchemaError("path: steps must be positive");
    if (j.contains("translation")) {
      const Base b = base_from_string(j.value("base", std::string("T2")));
      const Point s = point_from_json(j.at("translation"));
      p.phi = DiffeoPath::family([&](double t) { return Diffeo::translation(b, t * s); }, steps);
    } else if (j.contains("field")) {
      p.phi = DiffeoPath::flow(TimeField::autonomous(vector_field_from_json(j.at("field"))), steps);
    } else {
      throw SchemaError("path: expected translation or field");
    }
    if (j.contains("generator")) {
      const Eigen::MatrixXd g = matrix_from_json(j.at("generator"));
      if (g.rows() != vdim || g.cols() != vdim) throw SchemaError("path: generator must be vdim x vdim");
      p.u = GLPath::sample([&](double t) { return Eigen::MatrixXd((t * g).exp()); }, steps);
    } else {
      p.u = GLPath::constant(Eigen::MatrixXd::Identity(vdim, vdim), steps);
    }
    return p;
  });
}

SuiteConfig suite_config_from_json(const json& j) {
  return schema("config", [&] {
    if (!j.is_object()) throw SchemaError("config: expected an object");
    static const std::vector<std::string> known = {"suite", "inputs", "tolerance_scale", "seed", "trials", "steps",
                                                   "perturb"};
    for (const auto& [k, v] : j.items())
      if (std::find(known.begin(), known.end(), k) == known.end()) throw SchemaError("config: unknown key '" + k + "'");
    SuiteConfig c;
    c.suite = j.value("suite", std::string());
    if (j.contains("inputs")) c.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    c.tolerance_scale = j.value("tolerance_scale", 1.0);
    c.seed = j.value("seed", 1u);
    c.trials = j.value("trials", -1);
    c.steps = j.value("steps", 32);
    c.perturb = j.value("perturb", 0.0);
    if (c.tolerance_scale <= 0.0) throw SchemaError("config: tolerance_scale must be positive");
    if (c.steps < 1) throw SchemaError("config: steps must be positive");
    return c;
  });
}

// ------------------------------------------------------------------ report

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void Report::add(std::string name, std::string anchor, double residual, double tolerance) {
  tolerance *= tolerance_scale;
  // NaN residuals fail
  checks.push_back({std::move(name), std::move(anchor), residual, tolerance, residual <= tolerance});
}

json report_to_json(const Report& r, bool timing) {
  json checks = json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"anchor", c.anchor},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  json series = json::object();
  for (const auto& [name, s] : r.series) series[name] = {{"columns", s.columns}, {"rows", s.rows}};
  json j = {{"schema_version", Report::kSchemaVersion},
            {"suite", r.suite},
            {"seed", r.seed},
            {"tolerance_scale", r.tolerance_scale},
            {"trials", r.trials},
            {"passed", r.passed()},
            {"checks", checks},
            {"series", series},
            {"warnings", r.warnings}};
  if (timing) j["timing"] = {{"seconds", r.seconds}};
  return j;
}

PlotKind plot_kind_from_string(const std::string& s) {
  if (s == "residual-histogram") return PlotKind::ResidualHistogram;
  if (s == "flux-path-trace") return PlotKind::FluxPathTrace;
  throw std::invalid_argument("unknown plot kind '" + s + "'");
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string emit_plot_data(const Report& r, PlotKind kind) {
  const bool empty = r.checks.empty();
  if (kind == PlotKind::ResidualHistogram) {
    // decades of the relative residual; zero lands in the lowest bin
    constexpr int lo = -20, hi = 2;
    std::string out = "log10_lo,log10_hi,count\n";
    if (empty) return out;
    const auto it = r.series.find("residuals");
    if (it == r.series.end()) throw std::invalid_argument("report has no residual series");
    const auto col = std::find(it->second.columns.begin(), it->second.columns.end(), "residual");
    const auto c = static_cast<std::size_t>(col - it->second.columns.begin());
    std::vector<long> counts(hi - lo, 0);
    for (const auto& row : it->second.rows) {
      const double l = row[c] > 0.0 ? std::log10(row[c]) : double(lo);
      const int bin = std::clamp(static_cast<int>(std::floor(l)), lo, hi - 1) - lo;
      ++counts[static_cast<std::size_t>(bin)];
    }
    for (int b = 0; b < hi - lo; ++b)
      out += std::to_string(lo + b) + "," + std::to_string(lo + b + 1) + "," + std::to_string(counts[b]) + "\n";
    return out;
  }
  const auto it = r.series.find("flux-path-trace");
  if (it == r.series.end()) {
    if (empty) return "t\n";
    throw std::invalid_argument("report has no flux-path-trace series");
  }
  std::string out = join(it->second.columns) + "\n";
  for (const auto& row : it->second.rows) {
    std::vector<std::string> cells;
    for (double x : row) cells.push_back(fmt_double(x));
    out += join(cells) + "\n";
  }
  return out;
}

// ------------------------------------------------------------------ suites

namespace {

constexpr double kPi = kTwoPi / 2;

VForm area(double c) { return VForm::area_form(TrigPoly2::constant(c)); }

VForm rotation_omega() {
  return VForm::stack({VForm::area_form(TrigPoly2::from_x(TrigPoly::sin_mode(1))),
                       VForm::area_form(TrigPoly2::from_x(TrigPoly::cos_mode(1)))});
}

VForm cos_alpha() { return VForm::one_form(Base::S1, {TrigPoly2::from_x(TrigPoly::cos_mode(1))}); }

VectorField hamiltonian_field(const TrigPoly2& psi) { return VectorField::on_torus(psi.dy(), -1.0 * psi.dx()); }

Eigen::Matrix2d rot(double t) {
  Eigen::Matrix2d m;
  m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return m;
}

std::vector<Point> grid_points(Base base, int n) {
  std::vector<Point> s;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < (base == Base::S1 ? 1 : n); ++j) s.emplace_back((i + 0.31) / n, (j + 0.17) / n);
  return s;
}

struct Ctx {
  const SuiteConfig& cfg;
  Report& r;
  Rng rng;
  int trials;
};

void add_residual_rows(Report& r, double index, const std::vector<double>& res) {
  auto& s = r.series["residuals"];
  if (s.columns.empty()) s.columns = {"cocycle", "trial", "residual"};
  for (std::size_t t = 0; t < res.size(); ++t) s.rows.push_back({index, double(t), res[t]});
}

void ce2_suite(Ctx& c, const std::vector<std::string>& names, double perturb) {
  const auto all = builtin_cocycle_names();
  for (const auto& name : names) {
    Cocycle2 s = builtin_cocycle(name);
    std::string label = name;
    if (perturb != 0.0 && s.algebra == AlgebraKind::VectorFieldsS1) {
      s = perturbed_cocycle(s, perturb);
      label += "+perturbed";
    }
    const CE2Report rep = verify_ce2(s, c.trials, 4, c.rng);
    c.r.add("ce2/" + label, "CE closedness of " + name, rep.max_residual, 1e-8);
    c.r.add("antisymmetry/" + label, "antisymmetry of " + name, rep.max_antisymmetry, 1e-9);
    const auto idx = std::find(all.begin(), all.end(), name) - all.begin();
    add_residual_rows(c.r, double(idx), rep.residuals);
  }
}

void spot_values(Ctx& c) {
  const VectorField s = VectorField::on_circle(TrigPoly::sin_mode(1));
  const VectorField co = VectorField::on_circle(TrigPoly::cos_mode(1));
  const double s0 = builtin_cocycle("sigma0")(s, co).comp(0)(0.3, 0.0);
  const double b0 = builtin_cocycle("barsigma0")(s, co).comp(0)(0.3, 0.0);
  c.r.add("spot/sigma0", "sigma0(sin, cos) = -8 pi^3", std::abs(s0 / (-8 * kPi * kPi * kPi) - 1.0), 1e-10);
  c.r.add("spot/barsigma0", "barsigma0(sin, cos) = -2 pi", std::abs(b0 / (-2 * kPi) - 1.0), 1e-10);
}

void flux_closed_form(Ctx& c) {
  const BundleChart ch = BundleChart::trivial(cos_alpha());
  double worst = 0.0;
  for (int t = 0; t < c.trials; ++t) {
    const double a = uniform(c.rng, -1.0, 1.0);
    const VectorField x = VectorField::on_circle(random_trigpoly(c.rng, 3, 0.1));
    const DiffeoPath phi = DiffeoPath::flow(TimeField::autonomous(x), c.cfg.steps);
    const GLPath u = GLPath::sample([&](double s) { return Eigen::MatrixXd::Constant(1, 1, std::exp(a * s)); }, c.cfg.steps);
    const CohClass1 path = flux_eq_path(phi, u, ch);
    worst = std::max(worst, path.distance(flux_eq_closed_form(phi.nodes().back(), u.nodes.back(), ch)));
  }
  c.r.add("flux/closed-form", "path flux equals q^*[phi^* alpha - u alpha]", worst, 1e-6);
}

void flux_loops(Ctx& c) {
  const BundleChart symp = BundleChart::magnetic(area(1.0));
  const int k = std::max(c.cfg.steps, 48);
  const GLPath one = GLPath::constant(Eigen::MatrixXd::Identity(1, 1), k);
  double to_lattice = 0.0, to_expected = 0.0;
  for (int t = 0; t < c.trials; ++t) {
    const int m = static_cast<int>(std::floor(uniform(c.rng, -2.0, 3.0)));
    const int n = static_cast<int>(std::floor(uniform(c.rng, -2.0, 3.0)));
    const auto field = std::make_shared<const TimeField>(
        TimeField::autonomous(hamiltonian_field(random_trigpoly2(c.rng, 2, 2, 0.005))));
    const DiffeoPath loop = DiffeoPath::family(
        [&](double s) {
          return Diffeo::translation(Base::T2, Point(s * m, s * n)) * Diffeo::flow(field, 0.0, 4.0 * s * (1.0 - s), 32);
        },
        k);
    const CohClass1 f = flux_eq_path(loop, one, symp);
    to_lattice = std::max(to_lattice, f.norm());
    Eigen::MatrixXd expect(1, 3);
    expect << -n, m, 0.0;
    to_expected = std::max(to_expected, (f.evaluations - expect).cwiseAbs().maxCoeff());
  }
  c.r.add("flux/loop-lattice", "flux of a loop lies in the period lattice", to_lattice, 1e-6);
  c.r.add("flux/loop-winding", "flux of a loop equals its translation winding", to_expected, 1e-6);
}

void flux_trace(Ctx& c) {
  const BundleChart symp = BundleChart::magnetic(area(1.0));
  const Point s(0.5, 0.25);
  const DiffeoPath tr = DiffeoPath::family([&](double t) { return Diffeo::translation(Base::T2, t * s); }, c.cfg.steps);
  const auto trace = flux_eq_trace(tr, GLPath::constant(Eigen::MatrixXd::Identity(1, 1), c.cfg.steps), symp);
  Series out;
  out.columns = {"t"};
  for (const auto& l : chart_loop_names(symp)) out.columns.push_back(l);
  double worst = 0.0;
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const auto& [t, ev] = trace[k];
    std::vector<double> row{t};
    for (Eigen::Index i = 0; i < ev.cols(); ++i) row.push_back(ev(0, i));
    out.rows.push_back(row);
    worst = std::max({worst, std::abs(ev(0, 0) + t * s.y()), std::abs(ev(0, 1) - t * s.x())});
  }
  c.r.series["flux-path-trace"] = out;
  c.r.add("flux/translation-trace", "flux of a translation path is linear in t", worst, 1e-12);
}

void holonomy_suite(Ctx& c) {
  const VForm w = area(2.0);
  const BundleChart chart = BundleChart::magnetic(w);
  double worst = 0.0, wind = 0.0;
  for (int t = 0; t < c.trials; ++t) {
    const Point o(uniform(c.rng, -1, 1), uniform(c.rng, -1, 1));
    const Loop l = Loop::trig_curve(o, Point(0, 0), random_trigpoly(c.rng, 3, 0.15), random_trigpoly(c.rng, 3, 0.15));
    const Holonomy h = holonomy(chart, l);
    worst = std::max(worst, h.discrepancy);
    wind = std::max(wind, double(h.winding.cwiseAbs().maxCoeff()));
  }
  const PeriodGroup pg = period_group(w);
  const double gamma = pg.discrete() && pg.lattice->rank() == 1 ? std::abs(std::abs(pg.lattice->basis()(0, 0)) - 2.0)
                                                                 : 1.0;
  c.r.add("holonomy/transport-vs-stokes", "parallel transport equals -int omega on contractible loops", worst, 1e-6);
  c.r.add("holonomy/contractible", "generated loops have zero winding", wind, 0.0);
  c.r.add("holonomy/period-group", "period group of 2 dx^dy is 2Z", gamma, 0.0);
}

void bracket_defect(Ctx& c) {
  const BundleChart chart = BundleChart::magnetic(area(1.0));
  double worst = 0.0;
  for (int t = 0; t < c.trials; ++t) {
    const VForm f1 = VForm::scalar_function(Base::T2, random_trigpoly2(c.rng, 2, 2, 0.5));
    const VForm f2 = VForm::scalar_function(Base::T2, random_trigpoly2(c.rng, 2, 2, 0.5));
    const SouriauField s1 = souriau_field(chart, f1), s2 = souriau_field(chart, f2);
    for (const Point& x0 : {Point(0.0, 0.0), Point(0.3, 0.7), Point(0.81, 0.45)}) {
      const BracketDefect d = quantomorphism_bracket_defect(chart, f1, f2, x0);
      const Eigen::Vector2d e1 = s1.eta(x0), e2 = s2.eta(x0);
      const double expected = -(e1.x() * e2.y() - e1.y() * e2.x());
      worst = std::max({worst, std::abs(d.value(0) - expected), d.horizontal});
    }
  }
  c.r.add("bracket/defect", "[s(eta1), s(eta2)] - s([eta1, eta2]) = -omega(eta1, eta2)(x0)", worst, 1e-5);
}

EquiPair random_circle_pair(Rng& rng) {
  TrigPoly p = random_trigpoly(rng, 2, 0.015);
  p.coeffs()[0] = uniform(rng, -0.5, 0.5);
  return {Diffeo::from_displacement(p), Eigen::MatrixXd::Constant(1, 1, uniform(rng, 0.5, 2.0))};
}

void group_cocycle(Ctx& c) {
  const ExactChart chart(BundleChart::trivial(cos_alpha()));
  const EquiPair two{Diffeo::identity(Base::S1), Eigen::MatrixXd::Constant(1, 1, 2.0)};
  const EquiPair quarter{Diffeo::rotation(0.25), Eigen::MatrixXd::Ones(1, 1)};
  c.r.add("group/example", "c((id,2),(R_1/4,1)) = 1/(2 pi)",
          std::abs(group_2cocycle(two, quarter, chart, chart.x0())(0) - 1.0 / kTwoPi), 1e-9);

  double spread = 0.0, identity = 0.0, assoc = 0.0, coboundary = 0.0;
  const auto cfun = [&](const EquiPair& a, const EquiPair& b) { return group_2cocycle(a, b, chart, chart.x0()); };
  for (int t = 0; t < c.trials; ++t) {
    const EquiPair g1 = random_circle_pair(c.rng), g2 = random_circle_pair(c.rng), g3 = random_circle_pair(c.rng);
    spread = std::max(spread, group_2cocycle_spread(g1, g2, chart).spread);
    identity = std::max(identity, group_cocycle_defect(cfun, g1, g2, g3).cwiseAbs().maxCoeff());
    auto el = [&](const EquiPair& g) { return ext_element(g, Eigen::VectorXd::Constant(1, uniform(c.rng, -1, 1)), chart); };
    const ExtElement a = el(g1), b = el(g2), d = el(g3);
    assoc = std::max(assoc, ext_distance(ext_multiply(ext_multiply(a, b, chart), d, chart),
                                         ext_multiply(a, ext_multiply(b, d, chart), chart)));
    coboundary = std::max(coboundary, normalization_coboundary_residual(g1, g2, chart, Point(0.37, 0.0)));
  }
  c.r.add("group/spread", "c(g1, g2) does not depend on x", spread, 1e-8);
  c.r.add("group/cocycle-identity", "group 2-cocycle identity", identity, 1e-6);
  c.r.add("group/associativity", "extension group law is associative", assoc, 1e-6);
  c.r.add("group/normalization", "moving x0 changes c by a coboundary", coboundary, 1e-8);
}

void obstruction_suite(Ctx& c) {
  auto verdict = [](const std::string& got, const std::string& want) { return got == want ? 0.0 : 1.0; };
  const Obstructions rn = obstructions(ToyGroup::symplectic(ToyKind::Rn));
  c.r.add("obstructions/rn-verdict", "R^2 with the symplectic cocycle integrates", verdict(rn.verdict, "integrates"), 0.0);

  const HeisenbergLaw law = heisenberg_law(ToyGroup::symplectic(ToyKind::Rn));
  double oracle = 0.0;
  std::vector<Eigen::VectorXd> pts;
  for (int t = 0; t < c.trials; ++t) {
    auto pt = [&] { return Eigen::Vector3d(uniform(c.rng, -2, 2), uniform(c.rng, -2, 2), uniform(c.rng, -1, 1)); };
    const Eigen::VectorXd p = pt(), q = pt();
    oracle = std::max(oracle, (law.multiply(p, q) - transport_multiply(law, p, q)).cwiseAbs().maxCoeff());
    pts.push_back(p);
  }
  c.r.add("obstructions/heisenberg-oracle", "Heisenberg law matches the transport oracle", oracle, 1e-6);
  c.r.add("obstructions/heisenberg-peq", "d p^eq = -sigma^eq on G x V", peq_check(law, pts), 1e-8);

  const Obstructions t2 = obstructions(ToyGroup::symplectic(ToyKind::Torus));
  double flux = 1.0;
  if (t2.flux.size() == 2)
    flux = std::max((t2.flux[0] - Eigen::RowVector2d(0, 1)).cwiseAbs().maxCoeff(),
                    (t2.flux[1] - Eigen::RowVector2d(-1, 0)).cwiseAbs().maxCoeff());
  c.r.add("obstructions/torus-flux", "I_gamma1(X) = x2 and I_gamma2(X) = -x1", flux, 1e-8);
  c.r.add("obstructions/torus-verdict", "T^2 with the symplectic cocycle does not integrate",
          verdict(t2.verdict, "does not integrate"), 0.0);

  ToyGroup zero = ToyGroup::symplectic(ToyKind::Torus);
  zero.sigma[0].setZero();
  c.r.add("obstructions/zero-verdict", "sigma = 0 gives the trivial extension",
          verdict(obstructions(zero).verdict, "trivial extension"), 0.0);
}

void rotation_example(Ctx& c) {
  const VForm w = rotation_omega();
  const auto eta = std::make_shared<const TimeField>(
      TimeField::autonomous(VectorField::constant(Base::T2, Eigen::Vector2d(-1.0 / kTwoPi, 0.0))));
  const std::vector<double> times = {0.3, 1.0, 2.5};
  double worst = 0.0;
  for (int k = 0; k < std::min<int>(c.trials, 3); ++k) {
    const double t = times[static_cast<std::size_t>(k)];
    const Diffeo phi = Diffeo::flow(eta, 0.0, t, c.cfg.steps);
    const VForm expect = apply_linear(Eigen::MatrixXd(rot(t)), w);
    worst = std::max(worst, (pullback(phi, w, 8) - expect).sup_norm());
    for (const Point& p : grid_points(Base::T2, 7))
      worst = std::max(worst, (pullback_at(phi, w, p) - expect(p)).cwiseAbs().maxCoeff());
  }
  c.r.add("rotation/pullback", "phi_t^* omega = R(t) omega for the flow of -(1/2pi) d_x", worst, 1e-6);
}

void appendix(Ctx& c) {
  double rela = 0.0, leib = 0.0, mc = 0.0, rho = 0.0;
  const BundleChart mag = BundleChart::magnetic(area(2.0));
  for (int t = 0; t < c.trials; ++t) {
    const Matrix a0 = random_matrix(c.rng, 2, 1.0), a1 = random_matrix(c.rng, 2, 1.0), a2 = random_matrix(c.rng, 2, 1.0);
    const GLPath h = GLPath::flow([&](double s) { return Matrix(a0 + std::sin(3 * s) * a1); }, 64);
    const RelaResidual r = rela_check(h);
    rela = std::max({rela, r.adjoint, r.inverse});
    const GLPath h2 = GLPath::flow([&](double s) { return Matrix(a2 * std::cos(2 * s)); }, 64);
    leib = std::max(leib, leibniz_check(h, h2));
    const MaurerCartanResidual m =
        maurer_cartan_check([&](double s, double u) { return Matrix((s * a0).exp() * (u * a1).exp()); }, 32);
    mc = std::max({mc, m.right, m.left});
    ChartFunction f = ChartFunction::zero(1);
    f.periodic[0] = random_trigpoly2(c.rng, 2, 2, 0.5);
    const RhoPullback rp = rho_pullback_check(mag, f, chart_samples(mag, 4, c.rng));
    rho = std::max({rho, rp.residual, rp.transition});
  }
  c.r.add("appendix/left-right", "delta^r h = Ad(h) delta^l h = -delta^l(h^-1)", rela, 1e-6);
  c.r.add("appendix/leibniz", "Leibniz rule for delta^r", leib, 1e-6);
  c.r.add("appendix/maurer-cartan", "Maurer-Cartan equation", mc, 1e-6);
  c.r.add("appendix/rho-pullback", "rho(f)^* theta = theta + delta^l f", rho, 1e-6);
}

using SuiteFn = std::function<void(Ctx&)>;

const std::map<std::string, std::pair<int, SuiteFn>>& registry() {
  static const std::map<std::string, std::pair<int, SuiteFn>> r = {
      {"ce2-all", {100, [](Ctx& c) { ce2_suite(c, builtin_cocycle_names(), c.cfg.perturb); }}},
      {"ce2-perturbed",
       {20, [](Ctx& c) { ce2_suite(c, {"sigma1"}, c.cfg.perturb != 0.0 ? c.cfg.perturb : 1e-3); }}},
      {"spot-values", {1, spot_values}},
      {"flux-closed-form", {20, flux_closed_form}},
      {"flux-loops", {10, flux_loops}},
      {"flux-trace", {1, flux_trace}},
      {"holonomy", {20, holonomy_suite}},
      {"bracket-defect", {10, bracket_defect}},
      {"group-cocycle", {50, group_cocycle}},
      {"obstructions", {10, obstruction_suite}},
      {"rotation-example", {3, rotation_example}},
      {"appendix", {20, appendix}},
  };
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> n;
  for (const auto& [k, v] : registry()) n.push_back(k);
  return n;
}

int default_trials(const std::string& suite) {
  const auto it = registry().find(suite);
  if (it == registry().end()) throw std::invalid_argument("unknown suite '" + suite + "'");
  return it->second.first;
}

Report run_suite(const SuiteConfig& config) {
  const auto it = registry().find(config.suite);
  if (it == registry().end()) throw std::invalid_argument("unknown suite '" + config.suite + "'");
  Report r;
  r.suite = config.suite;
  r.seed = config.seed;
  r.tolerance_scale = config.tolerance_scale;
  r.trials = config.trials < 0 ? it->second.first : config.trials;
  const auto start = std::chrono::steady_clock::now();
  if (r.trials == 0) {
    r.warnings.push_back("zero trials requested, no checks run");
  } else {
    Ctx ctx{config, r, Rng(config.seed), r.trials};
    it->second.second(ctx);
  }
  std::sort(r.checks.begin(), r.checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace abext
