#include "abext/path.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace abext {

// ---------------------------------------------------------------- TimeGrid

TimeGrid::TimeGrid(int intervals, std::vector<int> breaks) : k_(intervals), breaks_(std::move(breaks)) {
  if (k_ < 2) throw std::invalid_argument("TimeGrid: need at least 2 intervals");
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
  for (int b : breaks_)
    if (b <= 0 || b >= k_) throw std::invalid_argument("TimeGrid: break outside the open interval");
}

std::vector<std::pair<int, int>> TimeGrid::segments() const {
  std::vector<std::pair<int, int>> s;
  int a = 0;
  for (int b : breaks_) {
    s.emplace_back(a, b);
    a = b;
  }
  s.emplace_back(a, k_);
  return s;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& xs) {
  // Fornberg's recursion restricted to derivative orders 0 and 1
  const int n = static_cast<int>(xs.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
  double c1 = 1.0, c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

namespace {

std::pair<int, int> window(int centre_lo, int centre_hi, int a, int b, int width) {
  // nodes [start, start + width) inside [a, b] roughly centred on [centre_lo, centre_hi]
  width = std::min(width, b - a + 1);
  int start = (centre_lo + centre_hi + 1) / 2 - width / 2;
  start = std::clamp(start, a, b - width + 1);
  return {start, width};
}

// integrals over [lo, lo+1] of the Lagrange basis on integer nodes 0..w-1
const std::vector<double>& interval_weights(int w, int lo) {
  static std::map<std::pair<int, int>, std::vector<double>> cache;
  auto key = std::make_pair(w, lo);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double shift = 0.5 * (w - 1);
  Eigen::MatrixXd v(w, w);
  Eigen::VectorXd m(w);
  for (int p = 0; p < w; ++p) {
    for (int j = 0; j < w; ++j) v(p, j) = std::pow(j - shift, p);
    const double x0 = lo - shift, x1 = lo + 1 - shift;
    m[p] = (std::pow(x1, p + 1) - std::pow(x0, p + 1)) / (p + 1);
  }
  Eigen::VectorXd sol = v.fullPivLu().solve(m);
  std::vector<double> r(sol.data(), sol.data() + w);
  return cache.emplace(key, std::move(r)).first->second;
}

}  // namespace

std::vector<std::pair<int, double>> TimeGrid::derivative_stencil(int k, int seg, int order) const {
  const auto segs = segments();
  if (seg < 0 || seg >= static_cast<int>(segs.size())) throw std::out_of_range("derivative_stencil: segment");
  const auto [a, b] = segs[seg];
  if (k < a || k > b) throw std::out_of_range("derivative_stencil: node outside segment");
  if (b - a < 2) throw std::invalid_argument("derivative_stencil: segment too short to differentiate");
  const auto [start, width] = window(k, k, a, b, order + 1);
  std::vector<double> xs(width);
  for (int i = 0; i < width; ++i) xs[i] = start + i;
  auto w = fd_weights(k, xs);
  // make the weights annihilate constants exactly
  double sum = 0.0;
  for (int i = 0; i < width; ++i)
    if (start + i != k) sum += w[i];
  w[k - start] = -sum;
  std::vector<std::pair<int, double>> r;
  for (int i = 0; i < width; ++i) r.emplace_back(start + i, w[i] * k_);
  return r;
}

std::vector<std::vector<double>> TimeGrid::quadrature_weights(int order) const {
  std::vector<std::vector<double>> out;
  for (const auto& [a, b] : segments()) {
    std::vector<double> w(nodes(), 0.0);
    for (int i = a; i < b; ++i) {
      const auto [start, width] = window(i, i + 1, a, b, order + 1);
      const auto& iw = interval_weights(width, i - start);
      for (int j = 0; j < width; ++j) w[start + j] += iw[j] / k_;
    }
    out.push_back(std::move(w));
  }
  return out;
}

int TimeGrid::segment_of_interval(int i) const {
  if (i < 0 || i >= k_) throw std::out_of_range("segment_of_interval");
  const auto segs = segments();
  for (std::size_t s = 0; s < segs.size(); ++s)
    if (i < segs[s].second) return static_cast<int>(s);
  return static_cast<int>(segs.size()) - 1;
}

std::vector<std::pair<int, double>> TimeGrid::interval_quadrature(int i, int order) const {
  const auto [a, b] = segments()[segment_of_interval(i)];
  const auto [start, width] = window(i, i + 1, a, b, order + 1);
  const auto& iw = interval_weights(width, i - start);
  std::vector<std::pair<int, double>> r;
  for (int j = 0; j < width; ++j) r.emplace_back(start + j, iw[j] / k_);
  return r;
}

TimeGrid TimeGrid::concatenated(const TimeGrid& o) const {
  if (o.k_ != k_) throw std::invalid_argument("concatenated: grids must have equal resolution");
  std::vector<int> br = breaks_;
  br.push_back(k_);
  for (int b : o.breaks_) br.push_back(k_ + b);
  return TimeGrid(2 * k_, br);
}

// ------------------------------------------------------------------ GLPath

GLPath GLPath::sample(const std::function<Matrix(double)>& f, int intervals) {
  GLPath p{TimeGrid(intervals), {}};
  for (int k = 0; k <= intervals; ++k) p.nodes.push_back(f(p.grid.t(k)));
  return p;
}

GLPath GLPath::flow(const std::function<Matrix(double)>& a, int intervals, int substeps) {
  GLPath p{TimeGrid(intervals), {}};
  Matrix u = Matrix::Identity(a(0.0).rows(), a(0.0).cols());
  p.nodes.push_back(u);
  const double h = 1.0 / (double(intervals) * substeps);
  for (int k = 0; k < intervals; ++k)
    for (int s = 0; s < substeps; ++s) {
      const double t = (double(k) * substeps + s) * h;
      const Matrix k1 = a(t) * u;
      const Matrix k2 = a(t + 0.5 * h) * (u + 0.5 * h * k1);
      const Matrix k3 = a(t + 0.5 * h) * (u + 0.5 * h * k2);
      const Matrix k4 = a(t + h) * (u + h * k3);
      u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (s + 1 == substeps) p.nodes.push_back(u);
    }
  return p;
}

GLPath GLPath::constant(const Matrix& u, int intervals) {
  return GLPath{TimeGrid(intervals), std::vector<Matrix>(intervals + 1, u)};
}

GLPath GLPath::inverse() const {
  GLPath p{grid, {}};
  for (const auto& u : nodes) p.nodes.push_back(u.inverse());
  return p;
}

GLPath GLPath::pointwise(const GLPath& o) const {
  if (o.grid.intervals() != grid.intervals()) throw std::invalid_argument("pointwise: grid mismatch");
  std::vector<int> br = grid.breaks();
  br.insert(br.end(), o.grid.breaks().begin(), o.grid.breaks().end());
  GLPath p{TimeGrid(grid.intervals(), br), {}};
  for (std::size_t k = 0; k < nodes.size(); ++k) p.nodes.push_back(nodes[k] * o.nodes[k]);
  return p;
}

GLPath GLPath::then(const GLPath& o) const {
  GLPath p{grid.concatenated(o.grid), nodes};
  for (std::size_t k = 1; k < o.nodes.size(); ++k) p.nodes.push_back(nodes.back() * o.nodes[k]);
  return p;
}

std::vector<Matrix> time_derivative(const GLPath& p, int seg) {
  const auto [a, b] = p.grid.segments()[seg];
  std::vector<Matrix> d;
  for (int k = a; k <= b; ++k) {
    Matrix s = Matrix::Zero(p.nodes[k].rows(), p.nodes[k].cols());
    for (const auto& [j, w] : p.grid.derivative_stencil(k, seg))
      if (j != k) s += w * (p.nodes[j] - p.nodes[k]);
    d.push_back(s);
  }
  return d;
}

std::vector<std::vector<Matrix>> log_derivative(const GLPath& p, Side side) {
  std::vector<std::vector<Matrix>> out;
  const auto segs = p.grid.segments();
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    const auto d = time_derivative(p, s);
    std::vector<Matrix> r;
    for (int k = segs[s].first; k <= segs[s].second; ++k) {
      const Matrix inv = p.nodes[k].inverse();
      const Matrix& dk = d[k - segs[s].first];
      r.push_back(side == Side::Left ? Matrix(inv * dk) : Matrix(dk * inv));
    }
    out.push_back(std::move(r));
  }
  return out;
}

// -------------------------------------------------------------- DiffeoPath

DiffeoPath::DiffeoPath(TimeGrid grid, std::vector<Diffeo> nodes) : grid_(std::move(grid)), nodes_(std::move(nodes)) {
  if (static_cast<int>(nodes_.size()) != grid_.nodes()) throw std::invalid_argument("DiffeoPath: node count");
}

DiffeoPath DiffeoPath::flow(const TimeField& x, int intervals, int substeps, const Tolerances& tol) {
  if (substeps <= 0) {
    const double l = x.lipschitz_bound();
    substeps = std::max(1, static_cast<int>(std::ceil(l / (0.05 * intervals))));
  }
  auto field = std::make_shared<const TimeField>(x);
  TimeGrid g(intervals);
  std::vector<Diffeo> nodes;
  for (int k = 0; k <= intervals; ++k)
    nodes.push_back(k == 0 ? Diffeo::identity(x.base) : Diffeo::flow(field, 0.0, g.t(k), k * substeps));
  DiffeoPath p(g, std::move(nodes));
  p.field_ = field;
  p.substeps_ = substeps;
  if (p.nodes_.back().min_jacobian(x.base == Base::S1 ? 256 : 48) <= tol.mono)
    throw std::runtime_error("flow: monotonicity lost (field too large for the step count)");
  return p;
}

DiffeoPath DiffeoPath::family(const std::function<Diffeo(double)>& f, int intervals) {
  TimeGrid g(intervals);
  std::vector<Diffeo> nodes;
  for (int k = 0; k <= intervals; ++k) nodes.push_back(f(g.t(k)));
  return DiffeoPath(g, std::move(nodes));
}

DiffeoPath DiffeoPath::constant(const Diffeo& d, int intervals) {
  return DiffeoPath(TimeGrid(intervals), std::vector<Diffeo>(intervals + 1, d));
}

std::vector<Point> DiffeoPath::trajectory(const Point& x) const {
  if (!field_) {
    std::vector<Point> r;
    for (const auto& n : nodes_) r.push_back(n(x));
    return r;
  }
  std::vector<Eigen::Matrix2d> unused;
  return trajectory(x, unused);
}

std::vector<Point> DiffeoPath::trajectory(const Point& x, std::vector<Eigen::Matrix2d>& jac) const {
  jac.clear();
  std::vector<Point> r;
  if (!field_) {
    for (const auto& n : nodes_) {
      Eigen::Matrix2d j;
      r.push_back(n.value_and_jacobian(x, j));
      jac.push_back(j);
    }
    return r;
  }
  // one sweep over the common RK4 grid reproduces every node exactly
  Point p = nodes_.front()(x);
  Eigen::Matrix2d j = Eigen::Matrix2d::Identity();
  r.push_back(p);
  jac.push_back(j);
  for (int k = 0; k < grid_.intervals(); ++k) {
    const double t0 = grid_.t(k), t1 = grid_.t(k + 1);
    // node k+1 integrates from 0 with (k+1)*substeps steps of equal length
    Diffeo piece = Diffeo::flow(field_, t0, t1, substeps_);
    Eigen::Matrix2d jp;
    p = piece.value_and_jacobian(p, jp);
    j = jp * j;
    r.push_back(p);
    jac.push_back(j);
  }
  return r;
}

Point DiffeoPath::velocity(int k, int seg, const Point& x) const {
  Point v = Point::Zero();
  const auto st = grid_.derivative_stencil(k, seg);
  if (field_) {
    const auto tr = trajectory(x);
    for (const auto& [j, w] : st)
      if (j != k) v += w * (tr[j] - tr[k]);
  } else {
    const Point base_pt = nodes_[k](x);
    for (const auto& [j, w] : st)
      if (j != k) v += w * (nodes_[j](x) - base_pt);
  }
  return v;
}

Point DiffeoPath::left_log(int k, int seg, const Point& x) const {
  return nodes_[k].jacobian(x).inverse() * velocity(k, seg, x);
}

Point DiffeoPath::right_log(int k, int seg, const Point& y) const {
  return velocity(k, seg, nodes_[k].inverse_at(y));
}

std::vector<Point> DiffeoPath::left_log_all(int seg, const Point& x) const {
  std::vector<Eigen::Matrix2d> jac;
  const auto [a, b] = grid_.segments()[seg];
  std::vector<Point> tr;
  if (field_) {
    tr = trajectory(x, jac);
  } else {
    tr.assign(nodes_.size(), Point::Zero());
    jac.assign(nodes_.size(), Eigen::Matrix2d::Identity());
    for (int k = a; k <= b; ++k) tr[k] = nodes_[k].value_and_jacobian(x, jac[k]);
  }
  std::vector<Point> out;
  for (int k = a; k <= b; ++k) {
    Point v = Point::Zero();
    for (const auto& [j, w] : grid_.derivative_stencil(k, seg))
      if (j != k) v += w * (tr[j] - tr[k]);
    out.push_back(jac[k].inverse() * v);
  }
  return out;
}

DiffeoPath DiffeoPath::inverse() const {
  std::vector<Diffeo> n;
  for (const auto& d : nodes_) n.push_back(d.inverse());
  return DiffeoPath(grid_, std::move(n));
}

DiffeoPath DiffeoPath::pointwise(const DiffeoPath& o) const {
  if (o.grid_.intervals() != grid_.intervals()) throw std::invalid_argument("pointwise: grid mismatch");
  std::vector<int> br = grid_.breaks();
  br.insert(br.end(), o.grid_.breaks().begin(), o.grid_.breaks().end());
  std::vector<Diffeo> n;
  for (std::size_t k = 0; k < nodes_.size(); ++k) n.push_back(nodes_[k] * o.nodes_[k]);
  return DiffeoPath(TimeGrid(grid_.intervals(), br), std::move(n));
}

DiffeoPath DiffeoPath::then(const DiffeoPath& o) const {
  std::vector<Diffeo> n = nodes_;
  for (std::size_t k = 1; k < o.nodes_.size(); ++k) n.push_back(nodes_.back() * o.nodes_[k]);
  return DiffeoPath(grid_.concatenated(o.grid_), std::move(n));
}

std::vector<TrigPoly> log_derivative_circle(const DiffeoPath& p, Side side, int seg, int degree) {
  if (p.base() != Base::S1) throw std::invalid_argument("log_derivative_circle: circle paths only");
  const auto [a, b] = p.grid().segments()[seg];
  const int m = 2 * degree + 1;
  std::vector<std::vector<double>> samples(b - a + 1, std::vector<double>(m));
  for (int j = 0; j < m; ++j) {
    const Point x(double(j) / m, 0.0);
    if (side == Side::Left) {
      const auto l = p.left_log_all(seg, x);
      for (int k = a; k <= b; ++k) samples[k - a][j] = l[k - a].x();
    } else {
      for (int k = a; k <= b; ++k) samples[k - a][j] = p.right_log(k, seg, x).x();
    }
  }
  std::vector<TrigPoly> out;
  for (const auto& s : samples) out.push_back(project(s, degree));
  return out;
}

// ---------------------------------------------------------------- identities

RelaResidual rela_check(const GLPath& h) {
  RelaResidual r;
  const auto dl = log_derivative(h, Side::Left);
  const auto dr = log_derivative(h, Side::Right);
  const auto dli = log_derivative(h.inverse(), Side::Left);
  const auto segs = h.grid.segments();
  for (std::size_t s = 0; s < segs.size(); ++s)
    for (int k = segs[s].first; k <= segs[s].second; ++k) {
      const int i = k - segs[s].first;
      const Matrix ad = h.nodes[k] * dl[s][i] * h.nodes[k].inverse();
      r.adjoint = std::max(r.adjoint, (dr[s][i] - ad).cwiseAbs().maxCoeff());
      r.inverse = std::max(r.inverse, (dr[s][i] + dli[s][i]).cwiseAbs().maxCoeff());
    }
  return r;
}

RelaResidual rela_check(const DiffeoPath& h, const std::vector<Point>& samples) {
  RelaResidual r;
  const DiffeoPath hi = h.inverse();
  const auto segs = h.grid().segments();
  for (int s = 0; s < static_cast<int>(segs.size()); ++s)
    for (int k = segs[s].first; k <= segs[s].second; ++k)
      for (const auto& y : samples) {
        const Point dr = h.right_log(k, s, y);
        const Point x = h.nodes()[k].inverse_at(y);
        const Point ad = h.nodes()[k].jacobian(x) * h.left_log(k, s, x);
        const Point inv = hi.left_log(k, s, y);
        r.adjoint = std::max(r.adjoint, (dr - ad).cwiseAbs().maxCoeff());
        r.inverse = std::max(r.inverse, (dr + inv).cwiseAbs().maxCoeff());
      }
  return r;
}

double leibniz_check(const GLPath& h1, const GLPath& h2) {
  const GLPath p = h1.pointwise(h2);
  const auto dp = log_derivative(p, Side::Right);
  const auto segs = p.grid.segments();
  // evaluate the factors on the product's segmentation
  GLPath a{p.grid, h1.nodes}, b{p.grid, h2.nodes};
  const auto d1 = log_derivative(a, Side::Right);
  const auto d2 = log_derivative(b, Side::Right);
  double r = 0.0;
  for (std::size_t s = 0; s < segs.size(); ++s)
    for (int k = segs[s].first; k <= segs[s].second; ++k) {
      const int i = k - segs[s].first;
      const Matrix rhs = d1[s][i] + h1.nodes[k] * d2[s][i] * h1.nodes[k].inverse();
      r = std::max(r, (dp[s][i] - rhs).cwiseAbs().maxCoeff());
    }
  return r;
}

double leibniz_check(const DiffeoPath& h1, const DiffeoPath& h2, const std::vector<Point>& samples) {
  const DiffeoPath p = h1.pointwise(h2);
  const DiffeoPath a(p.grid(), h1.nodes()), b(p.grid(), h2.nodes());
  const auto segs = p.grid().segments();
  double r = 0.0;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s)
    for (int k = segs[s].first; k <= segs[s].second; ++k)
      for (const auto& y : samples) {
        const Point x = h1.nodes()[k].inverse_at(y);
        const Point rhs = a.right_log(k, s, y) + h1.nodes()[k].jacobian(x) * b.right_log(k, s, x);
        r = std::max(r, (p.right_log(k, s, y) - rhs).cwiseAbs().maxCoeff());
      }
  return r;
}

MaurerCartanResidual maurer_cartan_check(const std::function<Matrix(double, double)>& h, int n) {
  const TimeGrid g(n);
  const int m = n + 1;
  std::vector<Matrix> hv(m * m), ht(m * m), hs(m * m);
  auto at = [m](int i, int j) { return i * m + j; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) hv[at(i, j)] = h(g.t(i), g.t(j));
  const Matrix zero = Matrix::Zero(hv[0].rows(), hv[0].cols());
  auto d_t = [&](const std::vector<Matrix>& f, int i, int j) {
    Matrix s = zero;
    for (const auto& [k, w] : g.derivative_stencil(i, 0))
      if (k != i) s += w * (f[at(k, j)] - f[at(i, j)]);
    return s;
  };
  auto d_s = [&](const std::vector<Matrix>& f, int i, int j) {
    Matrix s = zero;
    for (const auto& [k, w] : g.derivative_stencil(j, 0))
      if (k != j) s += w * (f[at(i, k)] - f[at(i, j)]);
    return s;
  };
  std::vector<Matrix> xi(m * m), eta(m * m), xil(m * m), etal(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Matrix inv = hv[at(i, j)].inverse();
      const Matrix a = d_t(hv, i, j), b = d_s(hv, i, j);
      xi[at(i, j)] = a * inv;
      eta[at(i, j)] = b * inv;
      xil[at(i, j)] = inv * a;
      etal[at(i, j)] = inv * b;
    }
  MaurerCartanResidual r;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Matrix& x = xi[at(i, j)];
      const Matrix& e = eta[at(i, j)];
      const Matrix right = d_t(eta, i, j) - d_s(xi, i, j) - (x * e - e * x);
      const Matrix& xl = xil[at(i, j)];
      const Matrix& el = etal[at(i, j)];
      const Matrix left = d_t(etal, i, j) - d_s(xil, i, j) + (xl * el - el * xl);
      r.right = std::max(r.right, right.cwiseAbs().maxCoeff());
      r.left = std::max(r.left, left.cwiseAbs().maxCoeff());
    }
  return r;
}

double maurer_cartan_check_abelian(const std::function<Eigen::VectorXd(double, double)>& lift, int vdim, int n) {
  auto mat = [&](double x, double y) -> Matrix { return lift(x, y); };
  const TimeGrid g(n);
  const int m = n + 1;
  std::vector<Matrix> f(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) f[i * m + j] = mat(g.t(i), g.t(j));
  const Matrix zero = Matrix::Zero(vdim, 1);
  std::vector<Matrix> fx(m * m), fy(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Matrix a = zero, b = zero;
      for (const auto& [k, w] : g.derivative_stencil(i, 0)) a += w * f[k * m + j];
      for (const auto& [k, w] : g.derivative_stencil(j, 0)) b += w * f[i * m + k];
      fx[i * m + j] = a;
      fy[i * m + j] = b;
    }
  double r = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Matrix curl = zero;
      for (const auto& [k, w] : g.derivative_stencil(i, 0)) curl += w * fy[k * m + j];
      for (const auto& [k, w] : g.derivative_stencil(j, 0)) curl -= w * fx[i * m + k];
      r = std::max(r, curl.cwiseAbs().maxCoeff());
    }
  return r;
}

}  // namespace abext
