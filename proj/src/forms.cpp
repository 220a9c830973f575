#include "abext/forms.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <stdexcept>

namespace abext {

std::string to_string(Base b) { return b == Base::S1 ? "S1" : "T2"; }

Base base_from_string(const std::string& s) {
  if (s == "S1") return Base::S1;
  if (s == "T2") return Base::T2;
  throw std::invalid_argument("unknown base '" + s + "'");
}

int form_components(int k, int dim) {
  if (k < 0 || k > dim) return 0;
  return (dim == 2 && k == 1) ? 2 : 1;
}

namespace {

void require_same_base(Base a, Base b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": base mismatch");
}

TrigPoly2 partial(const TrigPoly2& f, int j) { return j == 0 ? f.dx() : f.dy(); }


}  // namespace

// ------------------------------------------------------------ VectorField

VectorField::VectorField(Base base, std::vector<TrigPoly2> comps) : base_(base), comps_(std::move(comps)) {
  if (static_cast<int>(comps_.size()) != base_dim(base_))
    throw std::invalid_argument("VectorField: component count does not match base");
  if (base_ == Base::S1 && comps_[0].degree_y() != 0)
    throw std::invalid_argument("VectorField: circle fields cannot depend on y");
}

VectorField VectorField::on_circle(const TrigPoly& x) { return VectorField(Base::S1, {TrigPoly2::from_x(x)}); }

VectorField VectorField::on_torus(const TrigPoly2& x, const TrigPoly2& y) { return VectorField(Base::T2, {x, y}); }

VectorField VectorField::constant(Base base, const Eigen::Vector2d& v) {
  if (base == Base::S1) return VectorField(base, {TrigPoly2::constant(v.x())});
  return VectorField(base, {TrigPoly2::constant(v.x()), TrigPoly2::constant(v.y())});
}

VectorField VectorField::zero(Base base) { return constant(base, Eigen::Vector2d::Zero()); }

Eigen::Vector2d VectorField::operator()(const Eigen::Vector2d& p) const {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int i = 0; i < dim(); ++i) v[i] = comps_[i](p.x(), p.y());
  return v;
}

Eigen::Matrix2d VectorField::jacobian(const Eigen::Vector2d& p) const {
  Eigen::Matrix2d j;
  value_and_jacobian(p, j);
  return j;
}

Eigen::Vector2d VectorField::value_and_jacobian(const Eigen::Vector2d& p, Eigen::Matrix2d& j) const {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  j.setZero();
  for (int i = 0; i < dim(); ++i) {
    double fx, fy;
    v[i] = comps_[i].eval_grad(p.x(), p.y(), fx, fy);
    j(i, 0) = fx;
    if (dim() == 2) j(i, 1) = fy;
  }
  return v;
}

TrigPoly2 VectorField::apply(const TrigPoly2& f) const {
  TrigPoly2 r(0, 0);
  for (int i = 0; i < dim(); ++i) r += comps_[i] * abext::partial(f, i);
  return r;
}

TrigPoly2 VectorField::divergence() const {
  TrigPoly2 r = comps_[0].dx();
  if (dim() == 2) r += comps_[1].dy();
  return r;
}

VectorField VectorField::partial(int j) const {
  std::vector<TrigPoly2> c;
  for (const auto& f : comps_) c.push_back(abext::partial(f, j));
  return VectorField(base_, std::move(c));
}

double VectorField::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& f : comps_) m = std::max(m, f.max_abs_coeff());
  return m;
}

double VectorField::sup_norm() const {
  double m = 0.0;
  for (const auto& f : comps_) m = std::max(m, f.sup_norm());
  return m;
}

int VectorField::max_degree() const {
  int m = 0;
  for (const auto& f : comps_) m = std::max({m, f.degree_x(), f.degree_y()});
  return m;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  require_same_base(base_, o.base_, "VectorField +");
  for (int i = 0; i < dim(); ++i) comps_[i] += o.comps_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  require_same_base(base_, o.base_, "VectorField -");
  for (int i = 0; i < dim(); ++i) comps_[i] -= o.comps_[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& f : comps_) f *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(VectorField a, double s) { return a *= s; }
VectorField operator*(double s, VectorField a) { return a *= s; }

VectorField bracket_std(const VectorField& x, const VectorField& y) {
  require_same_base(x.base(), y.base(), "bracket");
  std::vector<TrigPoly2> c;
  for (int i = 0; i < x.dim(); ++i) c.push_back(x.apply(y.comp(i)) - y.apply(x.comp(i)));
  return VectorField(x.base(), std::move(c));
}

// ------------------------------------------------------------------ VForm

VForm::VForm(Base base, int degree, int vdim) : base_(base), degree_(degree), vdim_(vdim) {
  if (degree < 0 || degree > base_dim(base) + 1) throw std::invalid_argument("VForm: unsupported degree");
  if (vdim < 1) throw std::invalid_argument("VForm: value dimension must be positive");
  comps_.assign(static_cast<std::size_t>(ncomp()) * vdim_, TrigPoly2(0, 0));
}

VForm VForm::function(Base base, const std::vector<TrigPoly2>& values) {
  VForm f(base, 0, static_cast<int>(values.size()));
  for (int v = 0; v < f.vdim(); ++v) f.comp(0, v) = values[v];
  return f;
}

VForm VForm::one_form(Base base, const std::vector<TrigPoly2>& comps) {
  VForm f(base, 1, 1);
  if (static_cast<int>(comps.size()) != f.ncomp()) throw std::invalid_argument("one_form: wrong component count");
  for (int c = 0; c < f.ncomp(); ++c) f.comp(c) = comps[c];
  return f;
}

VForm VForm::area_form(const TrigPoly2& h) {
  VForm f(Base::T2, 2, 1);
  f.comp(0) = h;
  return f;
}

VForm VForm::stack(const std::vector<VForm>& scalars) {
  if (scalars.empty()) throw std::invalid_argument("stack: empty list");
  VForm r(scalars[0].base(), scalars[0].degree(), static_cast<int>(scalars.size()));
  for (int v = 0; v < r.vdim(); ++v) {
    const VForm& s = scalars[v];
    if (s.base() != r.base() || s.degree() != r.degree() || s.vdim() != 1)
      throw std::invalid_argument("stack: incompatible forms");
    for (int c = 0; c < r.ncomp(); ++c) r.comp(c, v) = s.comp(c);
  }
  return r;
}

VForm VForm::slice(int v) const {
  VForm r(base_, degree_, 1);
  for (int c = 0; c < ncomp(); ++c) r.comp(c) = comp(c, v);
  return r;
}

Eigen::MatrixXd VForm::operator()(const Eigen::Vector2d& p) const {
  Eigen::MatrixXd m(ncomp(), vdim_);
  for (int c = 0; c < ncomp(); ++c)
    for (int v = 0; v < vdim_; ++v) m(c, v) = comp(c, v)(p.x(), p.y());
  return m;
}

Eigen::VectorXd VForm::pair(const Eigen::Vector2d& p, const Eigen::Vector2d& t) const {
  if (degree_ != 1) throw std::invalid_argument("VForm::pair: needs a 1-form");
  const Eigen::MatrixXd m = (*this)(p);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(vdim_);
  for (int c = 0; c < ncomp(); ++c) r += t[c] * m.row(c).transpose();
  return r;
}

double VForm::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& f : comps_) m = std::max(m, f.max_abs_coeff());
  return m;
}

double VForm::sup_norm() const {
  double m = 0.0;
  for (const auto& f : comps_) m = std::max(m, f.sup_norm());
  return m;
}

int VForm::max_degree() const {
  int m = 0;
  for (const auto& f : comps_) m = std::max({m, f.degree_x(), f.degree_y()});
  return m;
}

VForm VForm::trimmed(double tol) const {
  VForm r = *this;
  for (auto& f : r.comps_) f = f.trimmed(tol);
  return r;
}

VForm& VForm::operator+=(const VForm& o) {
  if (o.base_ != base_ || o.degree_ != degree_ || o.vdim_ != vdim_)
    throw std::invalid_argument("VForm +: incompatible forms");
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
  return *this;
}

VForm& VForm::operator-=(const VForm& o) {
  if (o.base_ != base_ || o.degree_ != degree_ || o.vdim_ != vdim_)
    throw std::invalid_argument("VForm -: incompatible forms");
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
  return *this;
}

VForm& VForm::operator*=(double s) {
  for (auto& f : comps_) f *= s;
  return *this;
}

VForm operator+(VForm a, const VForm& b) { return a += b; }
VForm operator-(VForm a, const VForm& b) { return a -= b; }
VForm operator-(VForm a) { return a *= -1.0; }
VForm operator*(VForm a, double s) { return a *= s; }
VForm operator*(double s, VForm a) { return a *= s; }

VForm apply_linear(const Eigen::MatrixXd& u, const VForm& w) {
  if (u.cols() != w.vdim()) throw std::invalid_argument("apply_linear: dimension mismatch");
  VForm r(w.base(), w.degree(), static_cast<int>(u.rows()));
  for (int c = 0; c < w.ncomp(); ++c)
    for (int i = 0; i < r.vdim(); ++i) {
      TrigPoly2 s(0, 0);
      for (int j = 0; j < w.vdim(); ++j)
        if (u(i, j) != 0.0) s += u(i, j) * w.comp(c, j);
      r.comp(c, i) = s;
    }
  return r;
}

VForm multiply(const TrigPoly2& f, const VForm& w) {
  VForm r(w.base(), w.degree(), w.vdim());
  for (int c = 0; c < w.ncomp(); ++c)
    for (int v = 0; v < w.vdim(); ++v) r.comp(c, v) = f * w.comp(c, v);
  return r;
}

VForm wedge(const VForm& a, const VForm& b) {
  require_same_base(a.base(), b.base(), "wedge");
  if (a.vdim() != 1 && b.vdim() != 1) throw std::invalid_argument("wedge: one factor must be scalar valued");
  const int n = std::max(a.vdim(), b.vdim());
  const int k = a.degree() + b.degree();
  const int dim = base_dim(a.base());
  VForm r(a.base(), std::min(k, dim + 1), n);
  if (k > dim) return r;
  auto av = [&](int c, int v) -> const TrigPoly2& { return a.comp(c, a.vdim() == 1 ? 0 : v); };
  auto bv = [&](int c, int v) -> const TrigPoly2& { return b.comp(c, b.vdim() == 1 ? 0 : v); };
  for (int v = 0; v < n; ++v) {
    if (a.degree() == 0) {
      for (int c = 0; c < r.ncomp(); ++c) r.comp(c, v) = av(0, v) * bv(c, v);
    } else if (b.degree() == 0) {
      for (int c = 0; c < r.ncomp(); ++c) r.comp(c, v) = av(c, v) * bv(0, v);
    } else {  // two 1-forms on T^2
      r.comp(0, v) = av(0, v) * bv(1, v) - av(1, v) * bv(0, v);
    }
  }
  return r;
}

VForm exterior_derivative(const VForm& f) {
  const int dim = base_dim(f.base());
  VForm r(f.base(), std::min(f.degree() + 1, dim + 1), f.vdim());
  if (f.degree() >= dim) return r;
  for (int v = 0; v < f.vdim(); ++v) {
    if (f.degree() == 0) {
      for (int c = 0; c < dim; ++c) r.comp(c, v) = partial(f.comp(0, v), c);
    } else {  // 1-form on T^2
      r.comp(0, v) = f.comp(1, v).dx() - f.comp(0, v).dy();
    }
  }
  return r;
}

VForm interior(const VectorField& x, const VForm& f) {
  require_same_base(x.base(), f.base(), "interior");
  if (f.degree() == 0) throw std::invalid_argument("interior: cannot contract a function");
  VForm r(f.base(), f.degree() - 1, f.vdim());
  if (f.structurally_zero()) return r;
  for (int v = 0; v < f.vdim(); ++v) {
    if (f.degree() == 1) {
      TrigPoly2 s(0, 0);
      for (int c = 0; c < f.ncomp(); ++c) s += f.comp(c, v) * x.comp(c);
      r.comp(0, v) = s;
    } else {  // h dx^dy
      r.comp(0, v) = -(f.comp(0, v) * x.comp(1));
      r.comp(1, v) = f.comp(0, v) * x.comp(0);
    }
  }
  return r;
}

VForm lie_derivative(const VectorField& x, const VForm& f) {
  require_same_base(x.base(), f.base(), "lie_derivative");
  VForm r(f.base(), f.degree(), f.vdim());
  if (f.structurally_zero()) return r;
  const int dim = x.dim();
  for (int v = 0; v < f.vdim(); ++v) {
    if (f.degree() == 0) {
      r.comp(0, v) = x.apply(f.comp(0, v));
    } else if (f.degree() == 1) {
      for (int j = 0; j < dim; ++j) {
        TrigPoly2 s = x.apply(f.comp(j, v));
        for (int i = 0; i < dim; ++i) s += f.comp(i, v) * partial(x.comp(i), j);
        r.comp(j, v) = s;
      }
    } else {
      r.comp(0, v) = x.apply(f.comp(0, v)) + f.comp(0, v) * x.divergence();
    }
  }
  return r;
}

VForm cartan_lie_derivative(const VectorField& x, const VForm& f) {
  if (f.degree() == 0) return interior(x, exterior_derivative(f));
  VForm r = exterior_derivative(interior(x, f));
  const VForm df = exterior_derivative(f);
  if (!df.structurally_zero()) r += interior(x, df);
  return r;
}

Eigen::VectorXd integrate_base(const VForm& top) {
  const int dim = base_dim(top.base());
  if (top.degree() != dim && top.degree() != 0)
    throw std::invalid_argument("integrate_base: needs a top-degree form or a function");
  Eigen::VectorXd r(top.vdim());
  for (int v = 0; v < top.vdim(); ++v) r[v] = top.comp(0, v).mean();
  return r;
}

Primitive solve_primitive(const VForm& w) {
  if (w.degree() != 1) throw std::invalid_argument("solve_primitive: needs a 1-form");
  const int dim = base_dim(w.base());
  Primitive p;
  p.periods = Eigen::MatrixXd(dim, w.vdim());
  std::vector<TrigPoly2> fs;
  for (int v = 0; v < w.vdim(); ++v) {
    std::vector<TrigPoly2> beta;
    for (int c = 0; c < dim; ++c) {
      p.periods(c, v) = w.comp(c, v).mean();
      beta.push_back(w.comp(c, v) - TrigPoly2::constant(p.periods(c, v)));
    }
    TrigPoly2 f;
    if (dim == 1) {
      f = TrigPoly2::from_x(beta[0].as_x_poly().antiderivative(1e300));
    } else {
      f = (beta[0].dx() + beta[1].dy()).inverse_laplacian(1e300);
    }
    for (int c = 0; c < dim; ++c) p.residual = std::max(p.residual, (beta[c] - partial(f, c)).max_abs_coeff());
    fs.push_back(std::move(f));
  }
  p.function = VForm::function(w.base(), fs);
  return p;
}

// ------------------------------------------------------------------ chains

Loop Loop::segment(const Point& a, const Point& b) {
  const Point d = b - a;
  return Loop({CurvePiece{[a, d](double t) -> Point { return a + t * d; }, [d](double) -> Point { return d; }}});
}

Loop Loop::polygon(const std::vector<Point>& vertices, bool close) {
  std::vector<CurvePiece> pieces;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i + 1 < n; ++i) pieces.push_back(segment(vertices[i], vertices[i + 1]).pieces_[0]);
  if (close && n > 1) pieces.push_back(segment(vertices[n - 1], vertices[0]).pieces_[0]);
  return Loop(std::move(pieces));
}

Loop Loop::circle(const Point& center, double radius, int turns) {
  const double w = kTwoPi * turns;
  return Loop({CurvePiece{
      [=](double t) -> Point { return center + radius * Point(std::cos(w * t), std::sin(w * t)); },
      [=](double t) -> Point { return radius * w * Point(-std::sin(w * t), std::cos(w * t)); }}});
}

Loop Loop::trig_curve(const Point& origin, const Point& drift, const TrigPoly& px, const TrigPoly& py) {
  TrigPoly dpx = px.derivative(), dpy = py.derivative();
  return Loop({CurvePiece{[=](double t) -> Point { return origin + t * drift + Point(px(t), py(t)); },
                          [=](double t) -> Point { return drift + Point(dpx(t), dpy(t)); }}});
}

Loop Loop::constant(const Point& p) {
  return Loop({CurvePiece{[p](double) -> Point { return p; }, [](double) -> Point { return Point::Zero(); }}});
}

Point Loop::start() const {
  if (pieces_.empty()) throw std::logic_error("Loop: empty");
  return pieces_.front().position(0.0);
}

Point Loop::end() const {
  if (pieces_.empty()) throw std::logic_error("Loop: empty");
  return pieces_.back().position(1.0);
}

double Loop::length() const {
  std::vector<double> x, w;
  gauss_legendre_unit(8, x, w);
  double l = 0.0;
  for (const auto& p : pieces_)
    for (std::size_t i = 0; i < x.size(); ++i) l += w[i] * p.velocity(x[i]).norm();
  return l;
}

Loop Loop::reversed() const {
  std::vector<CurvePiece> r;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    auto pos = it->position;
    auto vel = it->velocity;
    r.push_back(CurvePiece{[pos](double t) { return pos(1.0 - t); }, [vel](double t) -> Point { return -vel(1.0 - t); }});
  }
  return Loop(std::move(r));
}

Loop Loop::then(const Loop& o) const {
  std::vector<CurvePiece> r = pieces_;
  r.insert(r.end(), o.pieces_.begin(), o.pieces_.end());
  return Loop(std::move(r));
}

Loop Loop::reparametrized(const std::function<double(double)>& rr, const std::function<double(double)>& dr) const {
  std::vector<CurvePiece> r;
  for (const auto& p : pieces_) {
    auto pos = p.position;
    auto vel = p.velocity;
    r.push_back(CurvePiece{[pos, rr](double t) { return pos(rr(t)); },
                           [vel, rr, dr](double t) -> Point { return dr(t) * vel(rr(t)); }});
  }
  return Loop(std::move(r));
}

Chain2 Chain2::cone(const Loop& loop, const Point& apex) {
  std::vector<SurfacePiece> r;
  for (const auto& p : loop.pieces()) {
    auto pos = p.position;
    auto vel = p.velocity;
    r.push_back(SurfacePiece{[pos, apex](double s, double t) -> Point { return apex + s * (pos(t) - apex); },
                             [pos, vel, apex](double s, double t) {
                               Eigen::Matrix2d j;
                               j.col(0) = pos(t) - apex;
                               j.col(1) = s * vel(t);
                               return j;
                             }});
  }
  return Chain2(std::move(r));
}

Chain2 Chain2::rectangle(const Point& corner, double w, double h) {
  return Chain2({SurfacePiece{[=](double s, double t) -> Point { return corner + Point(s * w, t * h); },
                              [=](double, double) {
                                Eigen::Matrix2d j;
                                j << w, 0.0, 0.0, h;
                                return j;
                              }}});
}

void gauss_legendre_unit(int panels, std::vector<double>& nodes, std::vector<double>& weights) {
  using Q = boost::math::quadrature::gauss<double, 20>;
  const auto& xa = Q::abscissa();
  const auto& wa = Q::weights();
  nodes.clear();
  weights.clear();
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t i = 0; i < xa.size(); ++i) {
      nodes.push_back(mid - 0.5 * h * xa[i]);
      weights.push_back(0.5 * h * wa[i]);
      if (xa[i] != 0.0) {
        nodes.push_back(mid + 0.5 * h * xa[i]);
        weights.push_back(0.5 * h * wa[i]);
      }
    }
  }
}

Eigen::VectorXd integrate_along(const PathIntegrand& f, int vdim, const Loop& loop, QuadratureOptions q) {
  std::vector<double> x, w;
  gauss_legendre_unit(q.panels, x, w);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(vdim);
  for (const auto& piece : loop.pieces()) {
    double speed = 0.0;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(vdim);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Point v = piece.velocity(x[i]);
      speed = std::max(speed, v.norm());
      acc += w[i] * f(piece.position(x[i]), v);
    }
    if (speed < 1e-12) throw std::invalid_argument("integrate_along: degenerate (zero-speed) piece");
    r += acc;
  }
  return r;
}

Eigen::VectorXd integrate_along(const VForm& oneform, const Loop& loop, QuadratureOptions q) {
  if (oneform.degree() != 1) throw std::invalid_argument("integrate_along: needs a 1-form");
  return integrate_along([&](const Point& p, const Point& v) { return oneform.pair(p, v); }, oneform.vdim(), loop, q);
}

Eigen::VectorXd integrate_chain(const VForm& twoform, const Chain2& chain, QuadratureOptions q) {
  if (twoform.degree() != 2 || twoform.base() != Base::T2)
    throw std::invalid_argument("integrate_chain: needs a 2-form on T2");
  std::vector<double> x, w;
  gauss_legendre_unit(q.panels, x, w);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(twoform.vdim());
  for (const auto& piece : chain.pieces())
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) {
        const Point p = piece.position(x[i], x[j]);
        const double det = piece.jacobian(x[i], x[j]).determinant();
        r += w[i] * w[j] * det * twoform(p).row(0).transpose();
      }
  return r;
}

}  // namespace abext
