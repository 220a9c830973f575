#include "abext/extension.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>

#include "abext/random.hpp"

namespace abext {

// ------------------------------------------------------------ 1-cocycles

MatrixCocycle1 MatrixCocycle1::zero(int wdim) {
  return {wdim, [wdim](const Eigen::MatrixXd&) { return Eigen::VectorXd::Zero(wdim); },
          [](const Eigen::MatrixXd&, const Eigen::VectorXd& w) { return w; }};
}

MatrixCocycle1 MatrixCocycle1::trace() {
  return {1, [](const Eigen::MatrixXd& x) { return Eigen::VectorXd::Constant(1, x.trace()); },
          [](const Eigen::MatrixXd&, const Eigen::VectorXd& w) { return w; }};
}

MatrixCocycle1 MatrixCocycle1::commutator(const Eigen::MatrixXd& b) {
  const int n = static_cast<int>(b.rows());
  auto flat = [](const Eigen::MatrixXd& m) { return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(m.data(), m.size())); };
  return {n * n, [b, flat](const Eigen::MatrixXd& x) { return flat(x * b - b * x); },
          [n, flat](const Eigen::MatrixXd& g, const Eigen::VectorXd& w) {
            const Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(w.data(), n, n);
            return flat(g * m * g.inverse());
          }};
}

MatrixCocycle1 MatrixCocycle1::trace_pairing(const Eigen::MatrixXd& b) {
  return {1, [b](const Eigen::MatrixXd& x) { return Eigen::VectorXd::Constant(1, (x * b).trace()); },
          [](const Eigen::MatrixXd&, const Eigen::VectorXd& w) { return w; }};
}

namespace {

// g_k . alpha(delta^l g_k) per segment and node of the segment.
std::vector<std::vector<Eigen::VectorXd>> cocycle_integrand(const MatrixCocycle1& a, const GLPath& g) {
  const auto dl = log_derivative(g, Side::Left);
  const auto segs = g.grid.segments();
  std::vector<std::vector<Eigen::VectorXd>> out;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    std::vector<Eigen::VectorXd> v;
    for (int k = segs[s].first; k <= segs[s].second; ++k) v.push_back(a.act(g.nodes[k], a.alpha(dl[s][k - segs[s].first])));
    out.push_back(std::move(v));
  }
  return out;
}

Eigen::VectorXd integrate_nodes(const MatrixCocycle1& a, const GLPath& g, int order) {
  const auto vals = cocycle_integrand(a, g);
  const auto w = g.grid.quadrature_weights(order);
  const auto segs = g.grid.segments();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(a.wdim);
  for (std::size_t s = 0; s < segs.size(); ++s)
    for (int k = segs[s].first; k <= segs[s].second; ++k) r += w[s][k] * vals[s][k - segs[s].first];
  return r;
}

std::optional<GLPath> halved(const GLPath& g) {
  const int k = g.grid.intervals();
  if (k % 2 != 0 || k < 16) return std::nullopt;
  std::vector<int> br;
  for (int b : g.grid.breaks()) {
    if (b % 2 != 0) return std::nullopt;
    br.push_back(b / 2);
  }
  GLPath h{TimeGrid(k / 2, br), {}};
  for (int i = 0; i <= k; i += 2) h.nodes.push_back(g.nodes[i]);
  return h;
}

}  // namespace

Eigen::VectorXd integrate_1cocycle(const MatrixCocycle1& a, const GLPath& g, int order, const Tolerances& tol) {
  if (g.grid.intervals() < 2) throw CoarsePath("integrate_1cocycle: need at least two intervals");
  const Eigen::VectorXd r = integrate_nodes(a, g, order);
  if (const auto h = halved(g)) {
    const double diff = (integrate_nodes(a, *h, order) - r).cwiseAbs().maxCoeff();
    if (diff > tol.ode * std::max(1.0, r.cwiseAbs().maxCoeff()))
      throw CoarsePath("integrate_1cocycle: halving the grid changes the value by " + std::to_string(diff));
  }
  return r;
}

std::vector<std::pair<double, Eigen::VectorXd>> integrate_1cocycle_trace(const MatrixCocycle1& a, const GLPath& g,
                                                                         int order) {
  const auto vals = cocycle_integrand(a, g);
  const auto segs = g.grid.segments();
  std::vector<std::pair<double, Eigen::VectorXd>> out;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(a.wdim);
  out.emplace_back(0.0, acc);
  for (int i = 0; i < g.grid.intervals(); ++i) {
    const int s = g.grid.segment_of_interval(i);
    for (const auto& [k, wk] : g.grid.interval_quadrature(i, order)) acc += wk * vals[s][k - segs[s].first];
    out.emplace_back(g.grid.t(i + 1), acc);
  }
  return out;
}

// ---------------------------------------------------- exact charts and c

double equivariance_residual(const VForm& omega, const EquiPair& g) {
  if (omega.structurally_zero()) return 0.0;
  double r = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      const Point p((i + 0.25) / 7, (j + 0.5) / 7);
      r = std::max(r, (pullback_at(g.phi, omega, p) - omega(p) * g.u.transpose()).cwiseAbs().maxCoeff());
    }
  return r / std::max(1.0, omega.sup_norm());
}

namespace {

std::atomic<unsigned long> chart_counter{1};

Eigen::VectorXd value_at(const VForm& f, const Point& p) { return f(p).row(0).transpose(); }

std::vector<Point> sample_points(Base base, int per_axis) {
  std::vector<Point> pts;
  if (base == Base::S1) {
    for (int i = 0; i < per_axis * per_axis; ++i) pts.emplace_back((i + 0.37) / (per_axis * per_axis), 0.0);
  } else {
    for (int i = 0; i < per_axis; ++i)
      for (int j = 0; j < per_axis; ++j) pts.emplace_back((i + 0.37) / per_axis, (j + 0.71) / per_axis);
  }
  return pts;
}

}  // namespace

ExactChart::ExactChart(const BundleChart& chart, const Point& x0, int budget, const Tolerances& tol)
    : chart_(chart), x0_(x0), budget_(budget), tol_(tol), id_(chart_counter++) {
  if (chart.mode() == ChartMode::Magnetic && chart.flux_density().cwiseAbs().maxCoeff() > tol.coeff)
    throw std::invalid_argument("ExactChart: omega has nonzero periods, so it is not exact");
  if (chart.base() == Base::S1) x0_.y() = 0.0;
}

ExactChart ExactChart::renormalized(const Point& x1) const { return ExactChart(chart_, x1, budget_, tol_); }

namespace {

std::string budget_message(double residual, int budget) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "primitive_map: residual %.3e at Fourier degree %d", residual, budget);
  return buf;
}

}  // namespace

PrimitiveMap primitive_map(const EquiPair& g, const ExactChart& chart) {
  const VForm& alpha = chart.alpha();
  const int n = chart.vdim();
  if (g.phi.base() != chart.base() || g.u.rows() != n || g.u.cols() != n)
    throw std::invalid_argument("primitive_map: pair does not match the chart");
  const VForm& omega = chart.chart().omega();
  if (equivariance_residual(omega, g) > chart.tol().quad)
    throw std::invalid_argument("primitive_map: (phi, u) is not omega-equivariant");

  const VForm pb = pullback(g.phi, alpha, chart.budget());
  const double scale = std::max(1.0, alpha.sup_norm() * std::max(1.0, g.u.cwiseAbs().maxCoeff()));
  // truncation of phi^* alpha would otherwise show up as spurious periods
  double trunc = 0.0;
  for (const Point& p : sample_points(chart.base(), 7))
    trunc = std::max(trunc, (pb(p) - pullback_at(g.phi, alpha, p)).cwiseAbs().maxCoeff());
  if (trunc > chart.tol().quad * scale) throw DegreeBudgetExceeded(budget_message(trunc, chart.budget()));

  const VForm beta = apply_linear(g.u, alpha) - pb;
  const Primitive pr = solve_primitive(beta);
  if (pr.periods.cwiseAbs().maxCoeff() > chart.tol().quad * scale)
    throw NotExact("primitive_map: u alpha - phi^* alpha has nonzero periods", pr.periods.transpose());

  PrimitiveMap r;
  r.f = pr.function;
  const Eigen::VectorXd f0 = value_at(r.f, chart.x0());
  for (int a = 0; a < n; ++a) r.f.comp(0, a) -= TrigPoly2::constant(f0(a));

  const VForm df = exterior_derivative(r.f);
  for (const Point& p : sample_points(chart.base(), 5)) {
    const Eigen::MatrixXd exact = alpha(p) * g.u.transpose() - pullback_at(g.phi, alpha, p);
    r.residual = std::max(r.residual, (df(p) - exact).cwiseAbs().maxCoeff());
  }
  if (r.residual > chart.tol().quad * scale)
    throw DegreeBudgetExceeded(budget_message(r.residual, chart.budget()));
  return r;
}

Eigen::VectorXd group_2cocycle(const EquiPair& g1, const EquiPair& g2, const ExactChart& chart, const Point& x) {
  const VForm f1 = primitive_map(g1, chart).f, f2 = primitive_map(g2, chart).f, f12 = primitive_map(g1 * g2, chart).f;
  return g1.u * value_at(f2, x) - value_at(f12, x) + value_at(f1, g2.phi(x));
}

CocycleSpread group_2cocycle_spread(const EquiPair& g1, const EquiPair& g2, const ExactChart& chart) {
  const VForm f1 = primitive_map(g1, chart).f, f2 = primitive_map(g2, chart).f, f12 = primitive_map(g1 * g2, chart).f;
  CocycleSpread r;
  bool first = true;
  for (const Point& x : sample_points(chart.base(), 4)) {
    const Eigen::VectorXd c = g1.u * value_at(f2, x) - value_at(f12, x) + value_at(f1, g2.phi(x));
    if (first) {
      r.value = c;
      first = false;
    }
    r.spread = std::max(r.spread, (c - r.value).cwiseAbs().maxCoeff());
  }
  return r;
}

Eigen::VectorXd group_cocycle_defect(const std::function<Eigen::VectorXd(const EquiPair&, const EquiPair&)>& c,
                                     const EquiPair& g1, const EquiPair& g2, const EquiPair& g3) {
  return g1.u * c(g2, g3) - c(g1 * g2, g3) + c(g1, g2 * g3) - c(g1, g2);
}

double normalization_coboundary_residual(const EquiPair& g1, const EquiPair& g2, const ExactChart& chart,
                                         const Point& x1) {
  const ExactChart other = chart.renormalized(x1);
  auto b = [&](const EquiPair& g) { return value_at(primitive_map(g, chart).f, x1); };
  const Eigen::VectorXd c0 = group_2cocycle(g1, g2, chart, chart.x0());
  const Eigen::VectorXd c1 = group_2cocycle(g1, g2, other, chart.x0());
  const Eigen::VectorXd db = g1.u * b(g2) - b(g1 * g2) + b(g1);
  return (c1 - c0 + db).cwiseAbs().maxCoeff();
}

// -------------------------------------------------------- group law

namespace {

std::optional<LatticeGroup> fiber_lattice(const ExactChart& chart) {
  if (chart.chart().lattice().rank() == 0) return std::nullopt;
  return chart.chart().lattice();
}

void check_chart(const ExtElement& e, const ExactChart& chart) {
  if (e.chart_id != chart.id()) throw std::invalid_argument("extension: element belongs to another chart");
}

}  // namespace

ExtElement ext_identity(const ExactChart& chart) {
  return {EquiPair::identity(chart.base(), chart.vdim()), Eigen::VectorXd::Zero(chart.vdim()), fiber_lattice(chart),
          chart.id()};
}

ExtElement ext_element(const EquiPair& g, const Eigen::VectorXd& a, const ExactChart& chart) {
  if (a.size() != chart.vdim()) throw std::invalid_argument("ext_element: fiber dimension mismatch");
  return {g, a, fiber_lattice(chart), chart.id()};
}

ExtElement ext_multiply(const ExtElement& e1, const ExtElement& e2, const ExactChart& chart) {
  check_chart(e1, chart);
  check_chart(e2, chart);
  ExtElement r = e1;
  r.g = e1.g * e2.g;
  r.a = e1.a + e1.g.u * e2.a + group_2cocycle(e1.g, e2.g, chart, chart.x0());
  if (r.lattice) r.a = r.lattice->reduce(r.a);
  return r;
}

ExtElement ext_inverse(const ExtElement& e, const ExactChart& chart) {
  check_chart(e, chart);
  ExtElement r = e;
  r.g = e.g.inverse();
  r.a = -r.g.u * (e.a + group_2cocycle(e.g, r.g, chart, chart.x0()));
  if (r.lattice) r.a = r.lattice->reduce(r.a);
  return r;
}

double ext_distance(const ExtElement& e1, const ExtElement& e2) {
  const Eigen::VectorXd da = e1.a - e2.a;
  double d = e1.lattice ? e1.lattice->distance(da) : da.cwiseAbs().maxCoeff();
  d = std::max(d, (e1.g.u - e2.g.u).cwiseAbs().maxCoeff());
  for (const Point& p : sample_points(e1.g.phi.base(), 3)) d = std::max(d, (e1.g.phi(p) - e2.g.phi(p)).cwiseAbs().maxCoeff());
  return d;
}

// ------------------------------------------ actions of R^k and pullbacks

ToyAction ToyAction::translations(int vdim) {
  ToyAction a;
  a.gdim = 2;
  a.element = [vdim](const Eigen::VectorXd& g) {
    return EquiPair{Diffeo::translation(Base::T2, Point(g(0), g(1))), Eigen::MatrixXd::Identity(vdim, vdim)};
  };
  a.eta = {VectorField::constant(Base::T2, Point(1, 0)), VectorField::constant(Base::T2, Point(0, 1))};
  a.gamma.assign(2, Eigen::MatrixXd::Zero(vdim, vdim));
  return a;
}

ToyAction ToyAction::rotations() {
  ToyAction a;
  a.gdim = 2;
  a.element = [](const Eigen::VectorXd& g) {
    Eigen::Matrix2d r;
    r << std::cos(g(0)), -std::sin(g(0)), std::sin(g(0)), std::cos(g(0));
    return EquiPair{Diffeo::translation(Base::T2, Point(-g(0) / kTwoPi, g(1))), Eigen::MatrixXd(r)};
  };
  a.eta = {VectorField::constant(Base::T2, Point(-1.0 / kTwoPi, 0)), VectorField::constant(Base::T2, Point(0, 1))};
  Eigen::Matrix2d j;
  j << 0, -1, 1, 0;
  a.gamma = {Eigen::MatrixXd(j), Eigen::MatrixXd::Zero(2, 2)};
  return a;
}

ToyAction ToyAction::trivial(Base base, int gdim, int vdim) {
  ToyAction a;
  a.gdim = gdim;
  a.element = [base, vdim](const Eigen::VectorXd&) { return EquiPair::identity(base, vdim); };
  a.eta.assign(gdim, VectorField::zero(base));
  a.gamma.assign(gdim, Eigen::MatrixXd::Zero(vdim, vdim));
  return a;
}

Eigen::VectorXd section_function(const BundleChart& chart, const EquiPair& g, const Point& x0, const Point& x) {
  const int d = base_dim(chart.base());
  std::vector<double> gn, gw;
  gauss_legendre_unit(2, gn, gw);
  Point dir = x - x0;
  if (chart.base() == Base::S1) dir.y() = 0.0;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(chart.vdim());
  for (std::size_t q = 0; q < gn.size(); ++q) {
    const Point p = x0 + gn[q] * dir;
    Eigen::Matrix2d j;
    const Point lp = g.phi.value_and_jacobian(p, j);
    const Eigen::MatrixXd pulled = j.topLeftCorner(d, d).transpose() * chart.potential(lp);
    const Eigen::MatrixXd diff = chart.potential(p) * g.u.transpose() - pulled;
    r += gw[q] * diff.transpose() * dir.head(d);
  }
  return r;
}

PullbackExtension pullback_extension(const BundleChart& chart, const ToyAction& action, PullbackOptions opt,
                                     const Tolerances& tol) {
  const int n = chart.vdim(), k = action.gdim;
  if (static_cast<int>(action.eta.size()) != k || static_cast<int>(action.gamma.size()) != k)
    throw std::invalid_argument("pullback_extension: one generator per group direction required");
  std::vector<CohClass1> classes;
  bool obstructed = false;
  for (int i = 0; i < k; ++i) {
    if (equivariance_residual(chart, action.eta[i], action.gamma[i]) > tol.quad)
      throw std::invalid_argument("pullback_extension: generator " + std::to_string(i) + " is not omega-equivariant");
    if (opt.cover) continue;
    classes.push_back(flux_eq_infinitesimal(action.eta[i], action.gamma[i], chart, tol));
    obstructed = obstructed || classes.back().norm() > tol.quad;
  }
  if (obstructed) throw NotEquiHamiltonian("pullback_extension: the action is not equi-hamiltonian", classes);

  PullbackExtension r;
  const Point x0 = opt.x0;
  const auto element = action.element;
  r.cocycle = [chart, element, x0](const Eigen::VectorXd& g1, const Eigen::VectorXd& g2) {
    return section_function(chart, element(g1), x0, element(g2).phi(x0));
  };

  const double h = opt.fd_step;
  auto e = [k](int i, double s) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(k);
    v(i) = s;
    return v;
  };
  auto second = [&](int i, int j) {
    return Eigen::VectorXd((r.cocycle(e(i, h), e(j, h)) - r.cocycle(e(i, h), e(j, -h)) - r.cocycle(e(i, -h), e(j, h)) +
                            r.cocycle(e(i, -h), e(j, -h))) /
                           (4.0 * h * h));
  };
  r.lie.assign(n, Eigen::MatrixXd::Zero(k, k));
  r.expected.assign(n, Eigen::MatrixXd::Zero(k, k));
  const Eigen::MatrixXd w = chart.base() == Base::T2 ? chart.omega()(x0) : Eigen::MatrixXd::Zero(1, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const Eigen::VectorXd lij = second(i, j) - second(j, i);
      const Point a = action.eta[i](x0), b = action.eta[j](x0);
      const double area = chart.base() == Base::T2 ? a.x() * b.y() - a.y() * b.x() : 0.0;
      for (int v = 0; v < n; ++v) {
        r.lie[v](i, j) = lij(v);
        r.expected[v](i, j) = -area * w(0, v);
        r.lie_raw_error = std::max(r.lie_raw_error, std::abs(r.lie[v](i, j) - r.expected[v](i, j)));
      }
    }

  // Both cocycles depend on choices (section, x0); compare them modulo
  // coboundaries gamma_i l_j - gamma_j l_i of linear maps l: R^k -> V.
  const int pairs = k * (k - 1) / 2;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(pairs * n, k * n);
  Eigen::VectorXd d(pairs * n);
  int row = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j, row += n) {
      m.block(row, j * n, n, n) += action.gamma[i];
      m.block(row, i * n, n, n) -= action.gamma[j];
      for (int v = 0; v < n; ++v) d(row + v) = r.lie[v](i, j) - r.expected[v](i, j);
    }
  r.coboundary = Eigen::MatrixXd::Zero(n, k);
  if (pairs > 0) {
    const Eigen::VectorXd l = m.completeOrthogonalDecomposition().solve(d);
    r.coboundary = Eigen::Map<const Eigen::MatrixXd>(l.data(), n, k);
    r.lie_error = (d - m * l).cwiseAbs().maxCoeff();
  }

  Rng rng(opt.seed);
  auto random_g = [&] {
    Eigen::VectorXd g(k);
    for (int i = 0; i < k; ++i) g(i) = uniform(rng, -1.0, 1.0);
    return g;
  };
  for (int t = 0; t < opt.samples; ++t) {
    const Eigen::VectorXd g1 = random_g(), g2 = random_g(), g3 = random_g();
    const Eigen::MatrixXd b1 = element(g1).u;
    const Eigen::VectorXd defect =
        b1 * r.cocycle(g2, g3) - r.cocycle(g1 + g2, g3) + r.cocycle(g1, g2 + g3) - r.cocycle(g1, g2);
    r.cocycle_identity = std::max(r.cocycle_identity, defect.cwiseAbs().maxCoeff());

    // (g, a)(h, a') = (g + h, a + b_g a' + c(g, h))
    Eigen::VectorXd a1(n), a2(n), a3(n);
    for (int v = 0; v < n; ++v) {
      a1(v) = uniform(rng, -1.0, 1.0);
      a2(v) = uniform(rng, -1.0, 1.0);
      a3(v) = uniform(rng, -1.0, 1.0);
    }
    auto mul = [&](const Eigen::VectorXd& g, const Eigen::VectorXd& a, const Eigen::VectorXd& gg, const Eigen::VectorXd& aa) {
      return Eigen::VectorXd(a + element(g).u * aa + r.cocycle(g, gg));
    };
    const Eigen::VectorXd left = mul(g1 + g2, mul(g1, a1, g2, a2), g3, a3);
    const Eigen::VectorXd right = mul(g1, a1, g2 + g3, mul(g2, a2, g3, a3));
    r.associativity = std::max(r.associativity, (left - right).cwiseAbs().maxCoeff());

    r.normalization = std::max({r.normalization, r.cocycle(g1, Eigen::VectorXd::Zero(k)).cwiseAbs().maxCoeff(),
                                r.cocycle(Eigen::VectorXd::Zero(k), g1).cwiseAbs().maxCoeff()});
  }
  return r;
}

// ------------------------------------------------------- toy groups

ToyGroup ToyGroup::symplectic(ToyKind kind) {
  ToyGroup t;
  t.kind = kind;
  t.n = 2;
  Eigen::Matrix2d s;
  s << 0, 1, -1, 0;
  t.sigma = {Eigen::MatrixXd(s)};
  return t;
}

Obstructions obstructions(const ToyGroup& toy, const Tolerances& tol) {
  const int n = toy.n, m = toy.vdim();
  if (m == 0) throw std::invalid_argument("obstructions: sigma needs at least one V component");
  for (const auto& s : toy.sigma)
    if (s.rows() != n || s.cols() != n || (s + s.transpose()).cwiseAbs().maxCoeff() > 0.0)
      throw std::invalid_argument("obstructions: sigma must be an antisymmetric n x n array");

  Obstructions r;
  r.period_generators = Eigen::MatrixXd::Zero(m, 0);

  // d sigma(x, y, z) = -sigma([x,y],z) + sigma([x,z],y) - sigma([y,z],x); the algebra is abelian, the module trivial
  auto bracket = [n](const Eigen::VectorXd&, const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(n).eval(); };
  Rng rng(17);
  for (int t = 0; t < 8; ++t) {
    Eigen::VectorXd x(n), y(n), z(n);
    for (int i = 0; i < n; ++i) {
      x(i) = uniform(rng, -1, 1);
      y(i) = uniform(rng, -1, 1);
      z(i) = uniform(rng, -1, 1);
    }
    for (const auto& s : toy.sigma) {
      const double d = -bracket(x, y).dot(s * z) + bracket(x, z).dot(s * y) - bracket(y, z).dot(s * x);
      r.ce_residual = std::max(r.ce_residual, std::abs(d));
    }
  }

  bool zero_sigma = true;
  for (const auto& s : toy.sigma) zero_sigma = zero_sigma && s.cwiseAbs().maxCoeff() == 0.0;

  double flux_size = 0.0;
  if (toy.kind == ToyKind::Torus) {
    std::vector<double> gn, gw;
    gauss_legendre_unit(1, gn, gw);
    for (int l = 0; l < n; ++l) {
      r.loops.push_back("gamma" + std::to_string(l + 1));
      Eigen::VectorXd vel = Eigen::VectorXd::Zero(n);
      vel(l) = 1.0;
      Eigen::MatrixXd f = Eigen::MatrixXd::Zero(m, n);
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        x(i) = 1.0;
        // sigma^eq is translation invariant, so X^r is the constant field X and the integrand is constant along gamma
        for (std::size_t q = 0; q < gn.size(); ++q)
          for (int v = 0; v < m; ++v) f(v, i) -= gw[q] * x.dot(toy.sigma[v] * vel);
      }
      flux_size = std::max(flux_size, f.cwiseAbs().maxCoeff());
      r.flux.push_back(f);
    }
  }
  if (zero_sigma)
    r.verdict = "trivial extension";
  else if (flux_size > tol.quad)
    r.verdict = "does not integrate";
  else
    r.verdict = "integrates";
  return r;
}

HeisenbergLaw heisenberg_law(const ToyGroup& toy) {
  if (toy.kind != ToyKind::Rn || toy.n != 2) throw std::invalid_argument("heisenberg_law: G = R^2 required");
  std::vector<VForm> comps;
  for (const auto& s : toy.sigma) comps.push_back(VForm::area_form(TrigPoly2::constant(-s(0, 1))));
  HeisenbergLaw law{toy, BundleChart::magnetic(VForm::stack(comps)), {}};
  PullbackOptions opt;
  opt.cover = true;
  opt.samples = 0;
  law.cocycle = pullback_extension(law.chart, ToyAction::translations(toy.vdim()), opt).cocycle;
  return law;
}

Eigen::VectorXd HeisenbergLaw::multiply(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const {
  const Eigen::VectorXd g = p.head(2), h = q.head(2);
  Eigen::VectorXd r(p.size());
  r.head(2) = g + h;
  r.tail(p.size() - 2) = p.tail(p.size() - 2) + q.tail(q.size() - 2) + cocycle(g, h);
  return r;
}

Eigen::VectorXd HeisenbergLaw::inverse(const Eigen::VectorXd& p) const {
  const Eigen::VectorXd g = p.head(2);
  Eigen::VectorXd r(p.size());
  r.head(2) = -g;
  r.tail(p.size() - 2) = -p.tail(p.size() - 2) - cocycle(g, -g);
  return r;
}

Eigen::VectorXd transport_multiply(const HeisenbergLaw& law, const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                                   int steps) {
  const int n = static_cast<int>(p.size()) - 2;
  const Point g = p.head(2), h = q.head(2), x0 = Point::Zero();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  // psi_h(y0) = (x0 + h, 0); psi_g moves it along the image of the segment x0 -> x0 + h
  const Eigen::VectorXd w = parallel_transport(law.chart, Loop::segment(x0, x0 + h), zero, steps);
  const Eigen::VectorXd moved = parallel_transport(law.chart, Loop::segment(x0 + g, x0 + g + h), zero, steps);
  Eigen::VectorXd r(p.size());
  r.head(2) = g + h;
  r.tail(n) = p.tail(n) + q.tail(n) + moved - w;
  return r;
}

double peq_check(const HeisenbergLaw& law, const std::vector<Eigen::VectorXd>& points, double h) {
  const int dim = static_cast<int>(points.empty() ? 0 : points.front().size()), n = dim - 2;
  // theta_p(e_j) = V part of d/dt L_{p^-1}(p + t e_j)
  auto theta = [&](const Eigen::VectorXd& p, int j) {
    const Eigen::VectorXd pi = law.inverse(p);
    return central_derivative(
        [&](double t) {
          Eigen::VectorXd q = p;
          q(j) += t;
          return Eigen::VectorXd(law.multiply(pi, q).tail(n));
        },
        0.0, h);
  };
  double r = 0.0;
  for (const auto& p : points)
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        auto along = [&](int a, int b) {
          return central_derivative(
              [&](double s) {
                Eigen::VectorXd q = p;
                q(a) += s;
                return theta(q, b);
              },
              0.0, h);
        };
        const Eigen::VectorXd dtheta = along(i, j) - along(j, i);
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(n);
        if (i < 2 && j < 2)
          for (int v = 0; v < n; ++v) expected(v) = -law.toy.sigma[v](i, j);
        r = std::max(r, (dtheta - expected).cwiseAbs().maxCoeff());
      }
  return r;
}

}  // namespace abext
