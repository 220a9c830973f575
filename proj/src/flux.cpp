#include "abext/flux.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace abext {

// -------------------------------------------------------------- classes

Eigen::MatrixXd CohClass1::reduced() const {
  Eigen::MatrixXd r = evaluations;
  for (int j = 0; j < r.cols(); ++j) r.col(j) = lattices[j].reduce(r.col(j));
  return r;
}

double CohClass1::distance(const CohClass1& o) const {
  if (o.evaluations.rows() != evaluations.rows() || o.evaluations.cols() != evaluations.cols())
    throw std::invalid_argument("CohClass1::distance: loop bases differ");
  double d = 0.0;
  for (int j = 0; j < evaluations.cols(); ++j)
    d = std::max(d, lattices[j].distance(evaluations.col(j) - o.evaluations.col(j)));
  return d;
}

double CohClass1::norm() const {
  double d = 0.0;
  for (int j = 0; j < evaluations.cols(); ++j) d = std::max(d, lattices[j].distance(evaluations.col(j)));
  return d;
}

namespace {

std::vector<Loop> base_loops(Base b) {
  std::vector<Loop> l = {Loop::segment(Point(0, 0), Point(1, 0))};
  if (b == Base::T2) l.push_back(Loop::segment(Point(0, 0), Point(0, 1)));
  return l;
}

CohClass1 empty_class(const BundleChart& chart, bool quotient) {
  CohClass1 c;
  c.loops = chart_loop_names(chart);
  c.evaluations = Eigen::MatrixXd::Zero(chart.vdim(), static_cast<int>(c.loops.size()));
  c.lattices.assign(c.loops.size(), quotient ? chart.lattice() : LatticeGroup::zero(chart.vdim()));
  return c;
}

// q^* i_eta omega - gamma beta: the base part of the flux representative.
VForm representative(const VectorField& eta, const Eigen::MatrixXd& gamma, const BundleChart& chart) {
  VForm r = -apply_linear(gamma, chart.beta());
  if (chart.base() == Base::T2) r += interior(eta, chart.omega());
  return r;
}

// i_X omega paired with a tangent vector, omega = h dx^dy.
Eigen::VectorXd contract_area(const VForm& omega, const Point& p, const Point& x, const Point& t) {
  const Eigen::MatrixXd h = omega(p);
  return (x.x() * t.y() - x.y() * t.x()) * h.row(0).transpose();
}

void check_grids(const DiffeoPath& phi, const GLPath& u) {
  if (phi.grid().intervals() != u.grid.intervals() || phi.grid().breaks() != u.grid.breaks())
    throw std::invalid_argument("flux: diffeomorphism and linear paths must share a time grid");
}

// Per segment, per node of the segment: the integrand evaluated on every basis loop.
std::vector<std::vector<Eigen::MatrixXd>> flux_integrand(const DiffeoPath& phi, const GLPath& u, const BundleChart& chart,
                                                         const FluxOptions& opt) {
  check_grids(phi, u);
  if (phi.base() != chart.base()) throw std::invalid_argument("flux_eq_path: base mismatch");
  const int n = chart.vdim();
  if (u.dim() != n) throw std::invalid_argument("flux_eq_path: u_t must act on V");
  std::vector<double> gn, gw;
  gauss_legendre_unit(opt.loop_quadrature.panels, gn, gw);
  const auto loops = base_loops(chart.base());
  const int nl = static_cast<int>(chart_loop_names(chart).size());
  const auto segs = phi.grid().segments();

  std::vector<std::vector<Eigen::MatrixXd>> out;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    const auto [a, b] = segs[s];
    const std::vector<Matrix> du = time_derivative(u, s);
    std::vector<Eigen::MatrixXd> vals(b - a + 1, Eigen::MatrixXd::Zero(n, nl));
    for (std::size_t l = 0; l < loops.size(); ++l) {
      const CurvePiece& c = loops[l].pieces().front();
      for (std::size_t q = 0; q < gn.size(); ++q) {
        const Point p = c.position(gn[q]), t = c.velocity(gn[q]);
        const Eigen::MatrixXd ap = chart.potential(p);
        Eigen::VectorXd th = t.x() * ap.row(0).transpose();
        if (chart.base() == Base::T2) th += t.y() * ap.row(1).transpose();
        std::vector<Point> xl;
        if (chart.base() == Base::T2) xl = phi.left_log_all(s, p);
        for (int k = a; k <= b; ++k) {
          Eigen::VectorXd v = -du[k - a] * th;
          if (chart.base() == Base::T2) v += u.nodes[k] * contract_area(chart.omega(), p, xl[k - a], t);
          vals[k - a].col(static_cast<int>(l)) += gw[q] * v;
        }
      }
    }
    for (int g = 0; g < chart.lattice().rank(); ++g)
      for (int k = a; k <= b; ++k)
        vals[k - a].col(static_cast<int>(loops.size()) + g) = -du[k - a] * chart.lattice().basis().col(g);
    out.push_back(std::move(vals));
  }
  return out;
}

}  // namespace

std::vector<std::string> chart_loop_names(const BundleChart& chart) {
  std::vector<std::string> names = {"x"};
  if (chart.base() == Base::T2) names.push_back("y");
  for (int g = 0; g < chart.lattice().rank(); ++g) names.push_back("fiber" + std::to_string(g));
  return names;
}

double equivariance_residual(const BundleChart& chart, const VectorField& eta, const Eigen::MatrixXd& gamma) {
  double r = 0.0;
  if (gamma.rows() != chart.vdim() || gamma.cols() != chart.vdim())
    throw std::invalid_argument("equivariance_residual: gamma must be a linear map of V");
  if (chart.base() == Base::T2) {
    const VForm& w = chart.omega();
    r = (lie_derivative(eta, w) - apply_linear(gamma, w)).sup_norm() / std::max(1.0, w.sup_norm());
  }
  if (chart.lattice().rank() > 0) r = std::max(r, (gamma * chart.lattice().basis()).cwiseAbs().maxCoeff());
  return r;
}

CohClass1 flux_eq_infinitesimal(const VectorField& eta, const Eigen::MatrixXd& gamma, const BundleChart& chart,
                                const Tolerances& tol) {
  if (equivariance_residual(chart, eta, gamma) > tol.quad)
    throw std::invalid_argument("flux_eq_infinitesimal: (eta, gamma) is not omega-equivariant");
  const VForm rep = representative(eta, gamma, chart);
  CohClass1 c = empty_class(chart, false);
  c.closedness = exterior_derivative(rep).max_abs_coeff();
  const auto loops = base_loops(chart.base());
  for (std::size_t l = 0; l < loops.size(); ++l) c.evaluations.col(static_cast<int>(l)) = integrate_along(rep, loops[l]);
  for (int g = 0; g < chart.lattice().rank(); ++g)
    c.evaluations.col(static_cast<int>(loops.size()) + g) = -gamma * chart.lattice().basis().col(g);
  return c;
}

CohClass1 flux_eq_path(const DiffeoPath& phi, const GLPath& u, const BundleChart& chart, FluxOptions opt) {
  const auto vals = flux_integrand(phi, u, chart, opt);
  const auto w = phi.grid().quadrature_weights(opt.order);
  const auto segs = phi.grid().segments();
  CohClass1 c = empty_class(chart, true);
  for (std::size_t s = 0; s < segs.size(); ++s)
    for (int k = segs[s].first; k <= segs[s].second; ++k) c.evaluations += w[s][k] * vals[s][k - segs[s].first];
  return c;
}

std::vector<std::pair<double, Eigen::MatrixXd>> flux_eq_trace(const DiffeoPath& phi, const GLPath& u,
                                                              const BundleChart& chart, FluxOptions opt) {
  const auto vals = flux_integrand(phi, u, chart, opt);
  const TimeGrid& g = phi.grid();
  const auto segs = g.segments();
  std::vector<std::pair<double, Eigen::MatrixXd>> out;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(vals[0][0].rows(), vals[0][0].cols());
  out.emplace_back(0.0, acc);
  for (int i = 0; i < g.intervals(); ++i) {
    const int s = g.segment_of_interval(i);
    for (const auto& [k, wk] : g.interval_quadrature(i, opt.order)) acc += wk * vals[s][k - segs[s].first];
    out.emplace_back(g.t(i + 1), acc);
  }
  return out;
}

CohClass1 flux_eq_closed_form(const Diffeo& phi, const Eigen::MatrixXd& u, const BundleChart& chart, QuadratureOptions q) {
  if (chart.mode() != ChartMode::Trivial) throw std::invalid_argument("flux_eq_closed_form: trivial chart required");
  const VForm& alpha = chart.beta();
  const int n = chart.vdim();
  const PathIntegrand pulled = [&](const Point& p, const Point& t) {
    Eigen::Matrix2d j;
    const Point y = phi.value_and_jacobian(p, j);
    return alpha.pair(y, j * t);
  };
  CohClass1 c = empty_class(chart, true);
  const auto loops = base_loops(chart.base());
  for (std::size_t l = 0; l < loops.size(); ++l)
    c.evaluations.col(static_cast<int>(l)) = integrate_along(pulled, n, loops[l], q) - u * integrate_along(alpha, loops[l], q);
  return c;
}

InvariantFlux flux_invariant_path(const DiffeoPath& phi, const VForm& omega, FluxOptions opt, const Tolerances& tol) {
  if (omega.degree() != 2 || omega.base() != phi.base()) throw std::invalid_argument("flux_invariant_path: 2-form on the path base required");
  const int n = omega.vdim();
  const PeriodGroup pg = period_group(omega, tol);
  if (!pg.discrete()) throw std::invalid_argument("flux_invariant_path: period group is not discrete");
  InvariantFlux r;
  const auto names = phi.base() == Base::T2 ? std::vector<std::string>{"x", "y"} : std::vector<std::string>{"x"};
  for (CohClass1* c : {&r.right, &r.left}) {
    c->loops = names;
    c->evaluations = Eigen::MatrixXd::Zero(n, static_cast<int>(names.size()));
    c->lattices.assign(names.size(), *pg.lattice);
  }
  if (phi.base() == Base::S1) return r;

  for (const auto& node : phi.nodes())
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const Point p((i + 0.3) / 6, (j + 0.6) / 6);
        r.invariance = std::max(r.invariance, (pullback_at(node, omega, p) - omega(p)).cwiseAbs().maxCoeff());
      }
  if (r.invariance > tol.quad * std::max(1.0, omega.sup_norm()))
    throw std::invalid_argument("flux_invariant_path: a node does not preserve omega");

  std::vector<double> gn, gw;
  gauss_legendre_unit(opt.loop_quadrature.panels, gn, gw);
  const auto w = phi.grid().quadrature_weights(opt.order);
  const auto segs = phi.grid().segments();
  const auto loops = base_loops(Base::T2);
  for (std::size_t l = 0; l < loops.size(); ++l) {
    const CurvePiece& c = loops[l].pieces().front();
    for (std::size_t q = 0; q < gn.size(); ++q) {
      const Point p = c.position(gn[q]), t = c.velocity(gn[q]);
      for (std::size_t s = 0; s < segs.size(); ++s) {
        const auto [a, b] = segs[s];
        const auto xl = phi.left_log_all(static_cast<int>(s), p);
        for (int k = a; k <= b; ++k) {
          const Point xr = phi.right_log(k, static_cast<int>(s), p);
          r.right.evaluations.col(static_cast<int>(l)) += gw[q] * w[s][k] * contract_area(omega, p, xr, t);
          r.left.evaluations.col(static_cast<int>(l)) += gw[q] * w[s][k] * contract_area(omega, p, xl[k - a], t);
        }
      }
    }
  }
  r.agreement = r.right.distance(r.left);
  return r;
}

EquiHamiltonian equi_hamiltonian_solve(const VectorField& eta, const Eigen::MatrixXd& gamma, const BundleChart& chart,
                                       const Point& x0, int budget, const Tolerances& tol) {
  EquiHamiltonian r;
  r.obstruction = flux_eq_infinitesimal(eta, gamma, chart, tol);
  const VForm rep = representative(eta, gamma, chart);
  if (r.obstruction.norm() > tol.quad * std::max(1.0, rep.sup_norm())) return r;
  if (rep.max_degree() > budget)
    throw DegreeBudgetExceeded("equi_hamiltonian_solve: data of degree " + std::to_string(rep.max_degree()) +
                               " exceeds the budget " + std::to_string(budget));
  const Primitive pr = solve_primitive(rep);
  r.residual = pr.residual;
  if (r.residual > tol.quad) throw DegreeBudgetExceeded("equi_hamiltonian_solve: primitive residual too large");
  ChartFunction h = ChartFunction::from_form(pr.function);
  h.vlin = -gamma;
  const Eigen::VectorXd h0 = h({x0, Eigen::VectorXd::Zero(chart.vdim())});
  for (int a = 0; a < chart.vdim(); ++a) h.periodic[a] -= TrigPoly2::constant(h0(a));
  r.h = h;
  r.exact = true;
  return r;
}

}  // namespace abext
