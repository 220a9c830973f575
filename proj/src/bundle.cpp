#include "abext/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace abext {

// ----------------------------------------------------------------- lattices

LatticeGroup::LatticeGroup(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  if (rank() == 0) {
    min_norm_ = std::numeric_limits<double>::infinity();
    return;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis_);
  min_norm_ = svd.singularValues()(rank() - 1);
  if (rank() > vdim() || min_norm_ <= 1e-12 * std::max(1.0, svd.singularValues()(0)))
    throw std::invalid_argument("LatticeGroup: basis vectors are linearly dependent");
}

namespace {

// Best rational approximation p/q of r with q <= qmax, by continued fractions.
bool rational_approx(double r, long qmax, double tol, long& p, long& q) {
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = r;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(x);
    const long ai = static_cast<long>(a);
    const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > qmax) break;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    if (std::abs(r - double(p1) / double(q1)) <= tol) {
      p = p1, q = q1;
      return true;
    }
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return false;
}

}  // namespace

std::optional<LatticeGroup> LatticeGroup::from_generators(const Eigen::MatrixXd& gens, const Tolerances& tol) {
  std::vector<Eigen::VectorXd> cols;
  for (int j = 0; j < gens.cols(); ++j)
    if (gens.col(j).norm() > tol.disc) cols.push_back(gens.col(j));
  const int n = static_cast<int>(gens.rows());
  if (cols.empty()) return LatticeGroup::zero(n);
  Eigen::MatrixXd g(n, static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) g.col(static_cast<int>(j)) = cols[j];

  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  lu.setThreshold(1e-10);
  if (lu.rank() == g.cols()) return LatticeGroup(g);
  if (lu.rank() != 1) throw std::invalid_argument("from_generators: dependent generators of rank > 1 are not supported");

  // Rank one: t_j d with a common direction; discrete iff all ratios are rational.
  const Eigen::VectorXd d = g.col(0).normalized();
  std::vector<double> t(g.cols());
  for (int j = 0; j < g.cols(); ++j) t[j] = d.dot(g.col(j));
  long lcm_q = 1;
  std::vector<std::pair<long, long>> ratios;
  for (double tj : t) {
    long p = 0, q = 1;
    if (!rational_approx(tj / t[0], 1000000, 1e-12 * std::max(1.0, std::abs(tj / t[0])), p, q)) return std::nullopt;
    ratios.emplace_back(p, q);
    lcm_q = std::lcm(lcm_q, q);
  }
  long gcd_n = 0;
  for (auto [p, q] : ratios) gcd_n = std::gcd(gcd_n, std::abs(p * (lcm_q / q)));
  return LatticeGroup(Eigen::MatrixXd(d * (t[0] * double(gcd_n) / double(lcm_q))));
}

Eigen::VectorXd LatticeGroup::nearest(const Eigen::VectorXd& v) const {
  if (rank() == 0) return Eigen::VectorXd::Zero(v.size());
  const Eigen::VectorXd c = basis_.colPivHouseholderQr().solve(v);
  return basis_ * c.array().round().matrix();
}

PeriodGroup period_group(const VForm& omega, const Tolerances& tol) {
  if (omega.degree() != 2) throw std::invalid_argument("period_group: 2-form required");
  PeriodGroup r;
  if (omega.base() == Base::S1) {
    r.generators = Eigen::MatrixXd::Zero(omega.vdim(), 0);
    r.lattice = LatticeGroup::zero(omega.vdim());
    return r;
  }
  if (!exterior_derivative(omega).structurally_zero()) throw std::invalid_argument("period_group: omega is not closed");
  r.generators = integrate_base(omega);
  r.lattice = LatticeGroup::from_generators(r.generators, tol);
  return r;
}

// ----------------------------------------------------------- chart functions

ChartFunction ChartFunction::zero(int vdim) {
  ChartFunction f;
  f.periodic.assign(vdim, TrigPoly2(0, 0));
  f.xcoef = f.ycoef = f.periodic;
  f.vlin = Eigen::MatrixXd::Zero(vdim, vdim);
  return f;
}

ChartFunction ChartFunction::from_form(const VForm& f) {
  if (f.degree() != 0) throw std::invalid_argument("ChartFunction::from_form: 0-form required");
  ChartFunction r = zero(f.vdim());
  for (int a = 0; a < f.vdim(); ++a) r.periodic[a] = f.comp(0, a);
  return r;
}

Eigen::VectorXd ChartFunction::operator()(const ChartPoint& p) const {
  const double x = p.x.x(), y = p.x.y();
  Eigen::VectorXd r = vlin * p.v;
  for (int a = 0; a < vdim(); ++a) r(a) += periodic[a](x, y) + x * xcoef[a](x, y) + y * ycoef[a](x, y);
  return r;
}

Eigen::MatrixXd ChartFunction::gradient(const ChartPoint& p) const {
  const int n = vdim();
  const double x = p.x.x(), y = p.x.y();
  Eigen::MatrixXd g(n, 2 + n);
  for (int a = 0; a < n; ++a) {
    double px, py, qx, qy, rx, ry;
    periodic[a].eval_grad(x, y, px, py);
    const double q = xcoef[a].eval_grad(x, y, qx, qy);
    const double r = ycoef[a].eval_grad(x, y, rx, ry);
    g(a, 0) = px + q + x * qx + y * rx;
    g(a, 1) = py + x * qy + r + y * ry;
  }
  g.rightCols(n) = vlin;
  return g;
}

ChartFunction& ChartFunction::operator+=(const ChartFunction& o) {
  if (o.vdim() != vdim()) throw std::invalid_argument("ChartFunction: dimension mismatch");
  for (int a = 0; a < vdim(); ++a) {
    periodic[a] += o.periodic[a];
    xcoef[a] += o.xcoef[a];
    ycoef[a] += o.ycoef[a];
  }
  vlin += o.vlin;
  return *this;
}

ChartFunction& ChartFunction::operator*=(double s) {
  for (int a = 0; a < vdim(); ++a) {
    periodic[a] *= s;
    xcoef[a] *= s;
    ycoef[a] *= s;
  }
  vlin *= s;
  return *this;
}

ChartFunction operator+(ChartFunction a, const ChartFunction& b) { return a += b; }
ChartFunction operator-(ChartFunction a, const ChartFunction& b) { return a += -1.0 * b; }
ChartFunction operator*(double s, ChartFunction a) { return a *= s; }

// -------------------------------------------------------------------- charts

BundleChart BundleChart::trivial(const VForm& alpha, const LatticeGroup& gamma) {
  if (alpha.degree() != 1) throw std::invalid_argument("BundleChart::trivial: 1-form required");
  if (gamma.vdim() != alpha.vdim()) throw std::invalid_argument("BundleChart::trivial: lattice dimension mismatch");
  BundleChart c;
  c.mode_ = ChartMode::Trivial;
  c.base_ = alpha.base();
  c.vdim_ = alpha.vdim();
  c.beta_ = alpha;
  c.omega_ = exterior_derivative(alpha);
  c.b_ = Eigen::VectorXd::Zero(c.vdim_);
  c.lattice_ = gamma;
  return c;
}

BundleChart BundleChart::trivial(const VForm& alpha) { return trivial(alpha, LatticeGroup::zero(alpha.vdim())); }

BundleChart BundleChart::magnetic(const VForm& omega, const Tolerances& tol) {
  if (omega.base() != Base::T2 || omega.degree() != 2)
    throw std::invalid_argument("BundleChart::magnetic: 2-form on T2 required");
  const PeriodGroup pg = period_group(omega, tol);
  if (!pg.discrete()) throw std::invalid_argument("BundleChart::magnetic: period group is not discrete");
  BundleChart c;
  c.mode_ = ChartMode::Magnetic;
  c.base_ = Base::T2;
  c.vdim_ = omega.vdim();
  c.omega_ = omega;
  c.b_ = pg.generators.col(0);
  c.beta_ = VForm(Base::T2, 1, c.vdim_);
  for (int a = 0; a < c.vdim_; ++a) {
    const TrigPoly2 psi = (omega.comp(0, a) - TrigPoly2::constant(c.b_(a))).inverse_laplacian(1e-9);
    c.beta_.comp(0, a) = -psi.dy();
    c.beta_.comp(1, a) = psi.dx();
  }
  c.lattice_ = *pg.lattice;
  return c;
}

Eigen::MatrixXd BundleChart::potential(const Point& x) const {
  Eigen::MatrixXd a = beta_(x);
  if (base_ == Base::T2) a.row(1) += x.x() * b_.transpose();
  return a;
}

Eigen::MatrixXd BundleChart::theta(const ChartPoint& p) const {
  const int d = base_dim(base_);
  Eigen::MatrixXd t(d + vdim_, vdim_);
  t.topRows(d) = potential(p.x);
  t.bottomRows(vdim_).setIdentity();
  return t;
}

ChartPoint BundleChart::deck(const ChartPoint& p, const Eigen::Vector2i& m) const {
  ChartPoint q = p;
  q.x.x() += m(0);
  if (base_ == Base::S1) return q;
  q.x.y() += m(1);
  q.v -= double(m(0)) * (p.x.y() + m(1)) * b_;
  return q;
}

double BundleChart::curvature_residual() const {
  if (base_ == Base::S1) return 0.0;
  VForm da = exterior_derivative(beta_);
  for (int a = 0; a < vdim_; ++a) da.comp(0, a) += TrigPoly2::constant(b_(a));
  return (da - omega_).max_abs_coeff();
}

// --------------------------------------------------------- transport, holonomy

namespace {

Eigen::VectorXd gauge_rate(const BundleChart& chart, const CurvePiece& c, double t) {
  const Eigen::MatrixXd a = chart.potential(c.position(t));
  const Point v = c.velocity(t);
  Eigen::VectorXd r = -v.x() * a.row(0).transpose();
  if (chart.base() == Base::T2) r -= v.y() * a.row(1).transpose();
  return r;
}

// Maps the transported fiber value at loop.end() back over loop.start().
Eigen::VectorXd close_up(const BundleChart& chart, const Point& end, const Eigen::Vector2i& m, Eigen::VectorXd v) {
  if (chart.base() == Base::T2) v += double(m(0)) * end.y() * chart.flux_density();
  return v;
}

}  // namespace

Eigen::VectorXd parallel_transport(const BundleChart& chart, const Loop& path, const Eigen::VectorXd& v0, int steps) {
  if (steps < 1) throw std::invalid_argument("parallel_transport: steps must be positive");
  if (v0.size() != chart.vdim()) throw std::invalid_argument("parallel_transport: fiber dimension mismatch");
  Eigen::VectorXd v = v0;
  const double h = 1.0 / steps;
  for (const auto& piece : path.pieces()) {
    for (int s = 0; s < steps; ++s) {
      const double t = s * h;
      // The right-hand side does not depend on v, so the RK4 stages collapse to Simpson weights.
      const Eigen::VectorXd k1 = gauge_rate(chart, piece, t);
      const Eigen::VectorXd k2 = gauge_rate(chart, piece, t + 0.5 * h);
      const Eigen::VectorXd k4 = gauge_rate(chart, piece, t + h);
      v += h / 6.0 * (k1 + 4.0 * k2 + k4);
    }
    if (!v.allFinite()) throw std::runtime_error("parallel_transport: step-size failure");
  }
  return v;
}

Holonomy holonomy(const BundleChart& chart, const Loop& loop, const Tolerances& tol, int steps) {
  const Point a = loop.start(), b = loop.end();
  Point diff = b - a;
  if (chart.base() == Base::S1) diff.y() = 0.0;
  const Eigen::Vector2i m(static_cast<int>(std::lround(diff.x())), static_cast<int>(std::lround(diff.y())));
  if ((diff - m.cast<double>()).norm() > tol.ode) throw std::invalid_argument("holonomy: loop is not closed");

  const int n = chart.vdim();
  const LatticeGroup& g = chart.lattice();
  Holonomy h;
  h.winding = m;
  h.transport = g.reduce(close_up(chart, b, m, parallel_transport(chart, loop, Eigen::VectorXd::Zero(n), steps)));

  Eigen::VectorXd s;
  if (m.isZero() && chart.base() == Base::T2) {
    s = -integrate_chain(chart.omega(), Chain2::cone(loop, a));
  } else {
    const PathIntegrand pot = [&](const Point& p, const Point& v) {
      const Eigen::MatrixXd ap = chart.potential(p);
      Eigen::VectorXd r = v.x() * ap.row(0).transpose();
      if (chart.base() == Base::T2) r += v.y() * ap.row(1).transpose();
      return r;
    };
    s = close_up(chart, b, m, -integrate_along(pot, n, loop));
  }
  h.stokes = g.reduce(s);
  h.discrepancy = g.distance(h.transport - h.stokes);
  return h;
}

RhoPullback rho_pullback_check(const BundleChart& chart, const ChartFunction& f, const std::vector<ChartPoint>& samples) {
  const int d = base_dim(chart.base()), n = chart.vdim();
  if (f.vdim() != n) throw std::invalid_argument("rho_pullback_check: dimension mismatch");
  RhoPullback r;
  for (const auto& p : samples) {
    const Eigen::MatrixXd g2 = f.gradient(p);
    Eigen::MatrixXd g(n, d + n);
    g.leftCols(d) = g2.leftCols(d);
    g.rightCols(n) = g2.rightCols(n);

    ChartPoint q{p.x, p.v + f(p)};
    Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(d + n, d + n);
    jac.bottomRows(n) += g;
    const Eigen::MatrixXd lhs = jac.transpose() * chart.theta(q);
    const Eigen::MatrixXd rhs = chart.theta(p) + g.transpose();
    r.residual = std::max(r.residual, (lhs - rhs).cwiseAbs().maxCoeff());

    const Eigen::VectorXd fp = f(p);
    std::vector<Eigen::Vector2i> shifts = {Eigen::Vector2i(1, 0)};
    if (chart.base() == Base::T2) shifts.emplace_back(0, 1);
    for (const auto& m : shifts) r.transition = std::max(r.transition, chart.lattice().distance(f(chart.deck(p, m)) - fp));
    for (int k = 0; k < chart.lattice().rank(); ++k) {
      const ChartPoint pk{p.x, p.v + chart.lattice().basis().col(k)};
      r.transition = std::max(r.transition, chart.lattice().distance(f(pk) - fp));
    }
  }
  return r;
}

// ------------------------------------------------------------ chart fields

Eigen::VectorXd PVectorField::operator()(const ChartPoint& p) const {
  const int d = horizontal.dim(), n = vertical.vdim();
  Eigen::VectorXd r(d + n);
  r.head(d) = horizontal(p.x).head(d);
  r.tail(n) = vertical(p);
  return r;
}

Eigen::MatrixXd PVectorField::jacobian(const ChartPoint& p) const {
  const int d = horizontal.dim(), n = vertical.vdim();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(d + n, d + n);
  j.topLeftCorner(d, d) = horizontal.jacobian(p.x).topLeftCorner(d, d);
  const Eigen::MatrixXd g = vertical.gradient(p);
  j.bottomLeftCorner(n, d) = g.leftCols(d);
  j.bottomRightCorner(n, n) = g.rightCols(n);
  return j;
}

namespace {

// theta(X^hor-free part): A_gauge(X) as a chart function of x.
ChartFunction gauge_of(const BundleChart& chart, const VectorField& x) {
  ChartFunction r = ChartFunction::zero(chart.vdim());
  for (int a = 0; a < chart.vdim(); ++a) {
    r.periodic[a] = chart.beta().comp(0, a) * x.comp(0);
    if (chart.base() == Base::T2) {
      r.periodic[a] += chart.beta().comp(1, a) * x.comp(1);
      r.xcoef[a] = chart.flux_density()(a) * x.comp(1);
    }
  }
  return r;
}

}  // namespace

PVectorField horizontal_lift(const BundleChart& chart, const VectorField& eta) {
  if (eta.base() != chart.base()) throw std::invalid_argument("horizontal_lift: base mismatch");
  return {eta, -1.0 * gauge_of(chart, eta)};
}

PVectorField vertical_generator(const BundleChart& chart, const Eigen::VectorXd& v) {
  ChartFunction f = ChartFunction::zero(chart.vdim());
  for (int a = 0; a < chart.vdim(); ++a) f.periodic[a] = TrigPoly2::constant(v(a));
  return {VectorField::zero(chart.base()), f};
}

ChartFunction contract_theta(const BundleChart& chart, const PVectorField& xi) {
  return xi.vertical + gauge_of(chart, xi.horizontal);
}

Eigen::MatrixXd lie_derivative_theta(const BundleChart& chart, const PVectorField& xi, const ChartPoint& p) {
  const int d = base_dim(chart.base()), n = chart.vdim();
  const Eigen::VectorXd val = xi(p);
  const Eigen::MatrixXd jac = xi.jacobian(p);
  const Eigen::MatrixXd a = chart.potential(p.x);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d + n, n);
  for (int k = 0; k < n; ++k) {
    // derivatives of the gauge components A^k_j along the base coordinates
    Eigen::Matrix2d da = Eigen::Matrix2d::Zero();  // da(j, i) = d_i A^k_j
    for (int j = 0; j < d; ++j) {
      double gx = 0.0, gy = 0.0;
      chart.beta().comp(j, k).eval_grad(p.x.x(), p.x.y(), gx, gy);
      da(j, 0) = gx;
      da(j, 1) = gy;
    }
    if (chart.base() == Base::T2) da(1, 0) += chart.flux_density()(k);
    for (int j = 0; j < d + n; ++j) {
      double s = jac(d + k, j);
      for (int i = 0; i < d; ++i) {
        if (j < d) s += val(i) * da(j, i);
        s += a(i, k) * jac(i, j);
      }
      r(j, k) = s;
    }
  }
  return r;
}

Eigen::VectorXd chart_bracket(const PVectorField& a, const PVectorField& b, const ChartPoint& p, Convention c) {
  const Eigen::VectorXd r = b.jacobian(p) * a(p) - a.jacobian(p) * b(p);
  return c == Convention::Negative ? Eigen::VectorXd(-r) : r;
}

// ---------------------------------------------------------- Souriau fields

SouriauField souriau_field(const BundleChart& chart, const VForm& f, int budget, const Tolerances& tol) {
  if (f.degree() != 0 || f.vdim() != chart.vdim() || f.base() != chart.base())
    throw std::invalid_argument("souriau_field: V-valued function on the chart base required");
  const int n = chart.vdim();
  const VForm df = exterior_derivative(f);
  SouriauField s;
  if (chart.base() == Base::S1) {
    s.residual = df.sup_norm();
    if (s.residual > tol.quad) throw NotAdmissible("souriau_field: omega vanishes on S1, f must be constant");
    s.eta = VectorField::zero(Base::S1);
  } else {
    const VForm& w = chart.omega();
    // i_eta (h dx^dy) = h (eta1 dy - eta2 dx) = df, solved pointwise in the least-squares sense.
    auto solve = [&](double x, double y, int comp) {
      double hh = 0.0, num = 0.0;
      for (int a = 0; a < n; ++a) {
        const double h = w.comp(0, a)(x, y);
        hh += h * h;
        num += comp == 0 ? h * df.comp(1, a)(x, y) : -h * df.comp(0, a)(x, y);
      }
      return hh > 1e-14 ? num / hh : 0.0;
    };
    s.eta = VectorField::on_torus(
        project2_fn([&](double x, double y) { return solve(x, y, 0); }, budget, budget).trimmed(1e-14),
        project2_fn([&](double x, double y) { return solve(x, y, 1); }, budget, budget).trimmed(1e-14));
    s.residual = (interior(s.eta, w) - df).sup_norm();
    if (s.residual > tol.quad * std::max(1.0, df.sup_norm()))
      throw NotAdmissible("souriau_field: no hamiltonian field within the degree budget (residual " +
                          std::to_string(s.residual) + ")");
  }
  s.xi = souriau_field(chart, s.eta, ChartFunction::from_form(f));
  return s;
}

PVectorField souriau_field(const BundleChart& chart, const VectorField& eta, const ChartFunction& h) {
  PVectorField xi = horizontal_lift(chart, eta);
  xi.vertical = xi.vertical - h;
  return xi;
}

SouriauCheck check_souriau(const BundleChart& chart, const PVectorField& xi, const ChartFunction& h,
                           const Eigen::MatrixXd& gamma, const std::vector<ChartPoint>& samples) {
  const ChartFunction ct = contract_theta(chart, xi);
  SouriauCheck r;
  for (const auto& p : samples) {
    r.contraction = std::max(r.contraction, (ct(p) + h(p)).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd lie = lie_derivative_theta(chart, xi, p);
    r.lie = std::max(r.lie, (lie - chart.theta(p) * gamma.transpose()).cwiseAbs().maxCoeff());
  }
  return r;
}

VForm hamiltonian_of(const BundleChart& chart, const VectorField& eta, const Point& x0, const Tolerances& tol) {
  const int n = chart.vdim();
  if (chart.base() == Base::S1) return VForm(Base::S1, 0, n);
  const Primitive pr = solve_primitive(interior(eta, chart.omega()));
  if (pr.periods.cwiseAbs().maxCoeff() > tol.quad)
    throw NotAdmissible("hamiltonian_of: i_eta omega is not exact");
  VForm f = pr.function;
  for (int a = 0; a < n; ++a) f.comp(0, a) -= TrigPoly2::constant(f.comp(0, a)(x0.x(), x0.y()));
  return f;
}

BracketDefect quantomorphism_bracket_defect(const BundleChart& chart, const VForm& f1, const VForm& f2, const Point& x0,
                                            Convention c, const Tolerances& tol) {
  const int n = chart.vdim(), d = base_dim(chart.base());
  auto normalized = [&](VForm f) {
    for (int a = 0; a < n; ++a) f.comp(0, a) -= TrigPoly2::constant(f.comp(0, a)(x0.x(), x0.y()));
    return f;
  };
  const SouriauField s1 = souriau_field(chart, normalized(f1), 16, tol);
  const SouriauField s2 = souriau_field(chart, normalized(f2), 16, tol);
  const LieAlgebraModel g{chart.base() == Base::S1 ? AlgebraKind::VectorFieldsS1 : AlgebraKind::VectorFieldsT2, c};
  const VectorField eta12 = g.bracket(s1.eta, s2.eta);
  const PVectorField s12 = souriau_field(chart, eta12, ChartFunction::from_form(hamiltonian_of(chart, eta12, x0, tol)));

  auto defect_at = [&](const ChartPoint& p, double& horiz) {
    const Eigen::VectorXd dvec = chart_bracket(s1.xi, s2.xi, p, c) - s12(p);
    horiz = std::max(horiz, dvec.head(d).cwiseAbs().maxCoeff());
    return Eigen::VectorXd(dvec.tail(n) + chart.potential(p.x).transpose() * dvec.head(d));
  };
  BracketDefect r;
  r.value = defect_at({x0, Eigen::VectorXd::Zero(n)}, r.horizontal);
  for (double off : {-0.7, 0.35, 1.5}) {
    const Eigen::VectorXd v = defect_at({x0, Eigen::VectorXd::Constant(n, off)}, r.horizontal);
    r.spread = std::max(r.spread, (v - r.value).cwiseAbs().maxCoeff());
  }
  return r;
}

AlmostInvariance almost_invariance(const ChartFunction& h, const Eigen::VectorXd& a, const std::vector<ChartPoint>& samples) {
  AlmostInvariance r;
  r.value = Eigen::VectorXd::Zero(h.vdim());
  if (samples.empty()) return r;
  std::vector<Eigen::VectorXd> vals;
  for (const auto& p : samples) {
    vals.push_back(h(p) - h({p.x, p.v + a}));
    r.value += vals.back();
  }
  r.value /= double(samples.size());
  for (const auto& v : vals) r.spread = std::max(r.spread, (v - r.value).cwiseAbs().maxCoeff());
  return r;
}

std::vector<ChartPoint> chart_samples(const BundleChart& chart, int per_axis, Rng& rng) {
  std::vector<ChartPoint> r;
  const int ny = chart.base() == Base::T2 ? per_axis : 1;
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < ny; ++j) {
      ChartPoint p{Point((i + 0.5) / per_axis, chart.base() == Base::T2 ? (j + 0.25) / per_axis : 0.0),
                   Eigen::VectorXd(chart.vdim())};
      for (int a = 0; a < chart.vdim(); ++a) p.v(a) = uniform(rng, -1.0, 1.0);
      r.push_back(p);
    }
  return r;
}

}  // namespace abext
