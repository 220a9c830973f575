#include "abext/diffeo.hpp"

#include <cmath>
#include <stdexcept>

namespace abext {

namespace {

Point restrict_base(Base b, Point p) {
  if (b == Base::S1) p.y() = 0.0;
  return p;
}

Eigen::Matrix2d unit_jacobian(Base b, Eigen::Matrix2d j) {
  if (b == Base::S1) {
    j(0, 1) = j(1, 0) = 0.0;
    j(1, 1) = 1.0;
  }
  return j;
}

}  // namespace

// -------------------------------------------------------------- TimeField

Point TimeField::operator()(double t, const Point& p) const {
  Point v = Point::Zero();
  double tm = 1.0;
  for (const auto& x : terms) {
    v += tm * x(p);
    tm *= t;
  }
  return v;
}

Point TimeField::value_and_jacobian(double t, const Point& p, Eigen::Matrix2d& j) const {
  Point v = Point::Zero();
  j.setZero();
  double tm = 1.0;
  for (const auto& x : terms) {
    Eigen::Matrix2d jx;
    v += tm * x.value_and_jacobian(p, jx);
    j += tm * jx;
    tm *= t;
  }
  return v;
}

VectorField TimeField::at(double t) const {
  VectorField r = VectorField::zero(base);
  double tm = 1.0;
  for (const auto& x : terms) {
    r += tm * x;
    tm *= t;
  }
  return r;
}

double TimeField::lipschitz_bound() const {
  double l = 0.0;
  for (const auto& x : terms)
    for (int j = 0; j < x.dim(); ++j) {
      const VectorField d = x.partial(j);
      for (const auto& c : d.comps())
        for (double v : c.coeffs()) l += std::abs(v);
    }
  return l;
}

// ------------------------------------------------------------------ factors

namespace {

Point eval_displacement(Base base, const DisplacementFactor& f, const Point& p, Eigen::Matrix2d* jac) {
  auto forward = [&](const Point& x, Eigen::Matrix2d& j) {
    Point y = x;
    j.setIdentity();
    for (int i = 0; i < base_dim(base); ++i) {
      double fx, fy;
      y[i] += f.p[i].eval_grad(x.x(), x.y(), fx, fy);
      j(i, 0) += fx;
      if (base == Base::T2) j(i, 1) += fy;
    }
    return y;
  };
  Eigen::Matrix2d j;
  if (!f.inverted) {
    Point y = forward(p, j);
    if (jac) *jac = j;
    return y;
  }
  // Newton for x + p(x) = q, started at q - p(q)
  Point x = p;
  {
    Point y0 = forward(p, j);
    x = p - (y0 - p);
  }
  for (int it = 0; it < 100; ++it) {
    const Point r = forward(x, j) - p;
    const Point dx = j.inverse() * r;
    x -= dx;
    if (dx.norm() < 1e-15 * (1.0 + x.norm())) break;
  }
  forward(x, j);
  if (jac) *jac = j.inverse();
  return restrict_base(base, x);
}

Point eval_flow(Base base, const FlowFactor& f, const Point& p, Eigen::Matrix2d* jac) {
  const TimeField& X = *f.field;
  const double h = (f.t1 - f.t0) / f.steps;
  Point x = p;
  Eigen::Matrix2d J = Eigen::Matrix2d::Identity();
  double t = f.t0;
  for (int s = 0; s < f.steps; ++s) {
    if (jac) {
      Eigen::Matrix2d a1, a2, a3, a4;
      const Point k1 = X.value_and_jacobian(t, x, a1);
      const Point k2 = X.value_and_jacobian(t + 0.5 * h, x + 0.5 * h * k1, a2);
      const Point k3 = X.value_and_jacobian(t + 0.5 * h, x + 0.5 * h * k2, a3);
      const Point k4 = X.value_and_jacobian(t + h, x + h * k3, a4);
      const Eigen::Matrix2d m1 = a1 * J;
      const Eigen::Matrix2d m2 = a2 * (J + 0.5 * h * m1);
      const Eigen::Matrix2d m3 = a3 * (J + 0.5 * h * m2);
      const Eigen::Matrix2d m4 = a4 * (J + h * m3);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      J += h / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    } else {
      const Point k1 = X(t, x);
      const Point k2 = X(t + 0.5 * h, x + 0.5 * h * k1);
      const Point k3 = X(t + 0.5 * h, x + 0.5 * h * k2);
      const Point k4 = X(t + h, x + h * k3);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = f.t0 + (s + 1) * h;
  }
  if (jac) *jac = unit_jacobian(base, J);
  return restrict_base(base, x);
}

Point eval_factor(Base base, const DiffeoFactor& f, const Point& p, Eigen::Matrix2d* jac) {
  if (const auto* d = std::get_if<DisplacementFactor>(&f)) return eval_displacement(base, *d, p, jac);
  if (const auto* a = std::get_if<AffineFactor>(&f)) {
    if (jac) *jac = a->a;
    return a->a * p + a->b;
  }
  return eval_flow(base, std::get<FlowFactor>(f), p, jac);
}

DiffeoFactor invert_factor(const DiffeoFactor& f) {
  if (const auto* d = std::get_if<DisplacementFactor>(&f)) return DisplacementFactor{d->p, !d->inverted};
  if (const auto* a = std::get_if<AffineFactor>(&f)) {
    const Eigen::Matrix2d ai = a->a.inverse();
    return AffineFactor{ai, -ai * a->b};
  }
  const auto& fl = std::get<FlowFactor>(f);
  return FlowFactor{fl.field, fl.t1, fl.t0, fl.steps};
}

}  // namespace

// ------------------------------------------------------------------ Diffeo

Diffeo Diffeo::translation(Base base, const Point& v) {
  Diffeo d(base);
  d.factors_.push_back(AffineFactor{Eigen::Matrix2d::Identity(), restrict_base(base, v)});
  return d;
}

Diffeo Diffeo::affine(const Eigen::Matrix2d& a, const Point& b) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(a(i, j) - std::round(a(i, j))) > 0.0) throw std::invalid_argument("affine: matrix must be integral");
  if (std::abs(std::abs(a.determinant()) - 1.0) > 0.0) throw std::invalid_argument("affine: determinant must be +-1");
  Diffeo d(Base::T2);
  d.factors_.push_back(AffineFactor{a, b});
  return d;
}

Diffeo Diffeo::from_displacement(Base base, std::vector<TrigPoly2> p, const Tolerances& tol) {
  if (static_cast<int>(p.size()) != base_dim(base)) throw std::invalid_argument("from_displacement: component count");
  Diffeo d(base);
  d.factors_.push_back(DisplacementFactor{std::move(p), false});
  if (d.min_jacobian(128) <= tol.mono)
    throw std::invalid_argument("from_displacement: lift is not monotone (phi' below tolerance)");
  return d;
}

Diffeo Diffeo::from_displacement(const TrigPoly& p, const Tolerances& tol) {
  return from_displacement(Base::S1, {TrigPoly2::from_x(p)}, tol);
}

Diffeo Diffeo::flow(std::shared_ptr<const TimeField> field, double t0, double t1, int steps) {
  if (!field) throw std::invalid_argument("flow: null field");
  if (steps < 1) throw std::invalid_argument("flow: need at least one step");
  Diffeo d(field->base);
  if (t0 != t1) d.factors_.push_back(FlowFactor{std::move(field), t0, t1, steps});
  return d;
}

Point Diffeo::operator()(const Point& p) const {
  Point x = restrict_base(base_, p);
  for (const auto& f : factors_) x = eval_factor(base_, f, x, nullptr);
  return x;
}

Point Diffeo::value_and_jacobian(const Point& p, Eigen::Matrix2d& j) const {
  Point x = restrict_base(base_, p);
  j.setIdentity();
  for (const auto& f : factors_) {
    Eigen::Matrix2d jf;
    x = eval_factor(base_, f, x, &jf);
    j = unit_jacobian(base_, jf) * j;
  }
  return x;
}

Eigen::Matrix2d Diffeo::jacobian(const Point& p) const {
  Eigen::Matrix2d j;
  value_and_jacobian(p, j);
  return j;
}

Point Diffeo::inverse_at(const Point& q) const { return inverse()(q); }

Diffeo Diffeo::compose(const Diffeo& inner) const {
  if (inner.base_ != base_) throw std::invalid_argument("compose: base mismatch");
  Diffeo d(base_);
  d.factors_ = inner.factors_;
  d.factors_.insert(d.factors_.end(), factors_.begin(), factors_.end());
  return d;
}

Diffeo Diffeo::inverse() const {
  Diffeo d(base_);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) d.factors_.push_back(invert_factor(*it));
  return d;
}

Diffeo Diffeo::projected(int degree) const {
  std::vector<TrigPoly2> p;
  const int dy = base_ == Base::S1 ? 0 : degree;
  for (int i = 0; i < base_dim(base_); ++i)
    p.push_back(project2_fn([&](double x, double y) { return (*this)(Point(x, y))[i] - (i == 0 ? x : y); }, degree, dy));
  Diffeo d(base_);
  d.factors_.push_back(DisplacementFactor{std::move(p), false});
  return d;
}

TrigPoly Diffeo::displacement(int degree) const {
  if (base_ != Base::S1) throw std::invalid_argument("displacement: circle diffeomorphisms only");
  return project_fn([&](double x) { return (*this)(Point(x, 0.0)).x() - x; }, degree);
}

Eigen::Matrix2d Diffeo::homology_action() const {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (const auto& f : factors_)
    if (const auto* a = std::get_if<AffineFactor>(&f)) m = a->a * m;
  return m;
}

double Diffeo::min_jacobian(int grid) const {
  double m = 1e300;
  const int gy = base_ == Base::S1 ? 1 : grid;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < gy; ++j) {
      const Eigen::Matrix2d J = jacobian(Point(double(i) / grid, double(j) / gy));
      m = std::min(m, J.determinant());
    }
  return m;
}

Diffeo operator*(const Diffeo& a, const Diffeo& b) { return a.compose(b); }

Eigen::MatrixXd pullback_at(const Diffeo& phi, const VForm& w, const Point& p) {
  if (phi.base() != w.base()) throw std::invalid_argument("pullback: base mismatch");
  Eigen::Matrix2d j;
  const Point q = phi.value_and_jacobian(p, j);
  const Eigen::MatrixXd wq = w(q);
  if (w.degree() == 0) return wq;
  if (w.degree() == 1) {
    const int d = base_dim(w.base());
    return j.topLeftCorner(d, d).transpose() * wq;
  }
  if (w.structurally_zero()) return wq;
  return j.determinant() * wq;
}

VForm pullback(const Diffeo& phi, const VForm& w, int degree) {
  VForm r(w.base(), w.degree(), w.vdim());
  if (r.structurally_zero()) return r;
  const int dy = w.base() == Base::S1 ? 0 : degree;
  const int m1 = 2 * degree + 1, m2 = 2 * dy + 1;
  std::vector<Eigen::MatrixXd> vals(static_cast<std::size_t>(m1) * m2);
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m2; ++j) vals[static_cast<std::size_t>(i) * m2 + j] = pullback_at(phi, w, Point(double(i) / m1, double(j) / m2));
  std::vector<double> s(vals.size());
  for (int c = 0; c < r.ncomp(); ++c)
    for (int v = 0; v < r.vdim(); ++v) {
      for (std::size_t k = 0; k < vals.size(); ++k) s[k] = vals[k](c, v);
      r.comp(c, v) = project2(s, m1, m2, degree, dy);
    }
  return r;
}

}  // namespace abext
