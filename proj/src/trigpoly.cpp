#include "abext/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace abext {

namespace {

std::size_t ebasis_size(int degree) { return static_cast<std::size_t>(2 * degree + 1); }

// table[j * width + i] = e_i(j / m)
std::vector<double> basis_table(int m, int degree) {
  const std::size_t w = ebasis_size(degree);
  std::vector<double> t(static_cast<std::size_t>(m) * w);
  for (int j = 0; j < m; ++j) {
    double* row = &t[static_cast<std::size_t>(j) * w];
    row[0] = 1.0;
    for (int k = 1; k <= degree; ++k) {
      // reduce k*j mod m so the angle is computed from an exact rational
      const long r = (static_cast<long>(k) * j) % m;
      const double ang = kTwoPi * double(r) / double(m);
      row[2 * k - 1] = std::cos(ang);
      row[2 * k] = std::sin(ang);
    }
  }
  return t;
}

// Fourier analysis of m equispaced samples into degree N e-basis coefficients.
void analyse(const double* f, std::ptrdiff_t stride, int m, int degree, double* out) {
  if (m < 2 * degree + 1)
    throw std::invalid_argument("project: " + std::to_string(m) + " samples cannot resolve degree " +
                                std::to_string(degree));
  std::vector<double> cs(m), sn(m);
  for (int r = 0; r < m; ++r) {
    cs[r] = std::cos(kTwoPi * r / m);
    sn[r] = std::sin(kTwoPi * r / m);
  }
  double s0 = 0.0;
  for (int j = 0; j < m; ++j) s0 += f[j * stride];
  out[0] = s0 / m;
  for (int k = 1; k <= degree; ++k) {
    double a = 0.0, b = 0.0;
    for (int j = 0; j < m; ++j) {
      const int r = static_cast<int>((static_cast<long>(k) * j) % m);
      a += f[j * stride] * cs[r];
      b += f[j * stride] * sn[r];
    }
    out[2 * k - 1] = 2.0 * a / m;
    out[2 * k] = 2.0 * b / m;
  }
}

}  // namespace

void basis_values(double x, int degree, double* out) {
  out[0] = 1.0;
  if (degree == 0) return;
  const double c1 = std::cos(kTwoPi * x), s1 = std::sin(kTwoPi * x);
  double c = c1, s = s1;
  for (int k = 1; k <= degree; ++k) {
    if (k % 16 == 0) {  // refresh to keep the recurrence error flat
      c = std::cos(kTwoPi * k * x);
      s = std::sin(kTwoPi * k * x);
    }
    out[2 * k - 1] = c;
    out[2 * k] = s;
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
  }
}

// ---------------------------------------------------------------- TrigPoly

TrigPoly::TrigPoly(int degree) {
  if (degree < 0) throw std::invalid_argument("TrigPoly: negative degree");
  c_.assign(ebasis_size(degree), 0.0);
}

TrigPoly::TrigPoly(std::vector<double> ebasis) : c_(std::move(ebasis)) {
  if (c_.empty() || c_.size() % 2 == 0)
    throw std::invalid_argument("TrigPoly: coefficient vector must have odd length");
}

TrigPoly TrigPoly::constant(double a0) {
  TrigPoly p(0);
  p.c_[0] = a0;
  return p;
}

TrigPoly TrigPoly::cos_mode(int k, double scale) {
  if (k == 0) return constant(scale);
  TrigPoly p(k);
  p.set_a(k, scale);
  return p;
}

TrigPoly TrigPoly::sin_mode(int k, double scale) {
  TrigPoly p(k);
  if (k > 0) p.set_b(k, scale);
  return p;
}

double TrigPoly::a(int k) const {
  if (k == 0) return c_[0];
  return k <= degree() ? c_[2 * k - 1] : 0.0;
}

double TrigPoly::b(int k) const { return (k >= 1 && k <= degree()) ? c_[2 * k] : 0.0; }

void TrigPoly::set_a(int k, double v) {
  if (k == 0) {
    c_[0] = v;
    return;
  }
  if (k > degree()) *this = resized(k);
  c_[2 * k - 1] = v;
}

void TrigPoly::set_b(int k, double v) {
  if (k < 1) throw std::invalid_argument("TrigPoly: sine mode index must be >= 1");
  if (k > degree()) *this = resized(k);
  c_[2 * k] = v;
}

double TrigPoly::operator()(double x) const {
  double buf[129];
  std::vector<double> heap;
  double* e = buf;
  if (c_.size() > 129) {
    heap.resize(c_.size());
    e = heap.data();
  }
  basis_values(x, degree(), e);
  double s = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i) s += c_[i] * e[i];
  return s;
}

std::vector<double> TrigPoly::sample(int points) const {
  const auto t = basis_table(points, degree());
  std::vector<double> out(points, 0.0);
  const std::size_t w = c_.size();
  for (int j = 0; j < points; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < w; ++i) s += c_[i] * t[j * w + i];
    out[j] = s;
  }
  return out;
}

TrigPoly TrigPoly::derivative(int order) const {
  TrigPoly p = *this;
  for (int o = 0; o < order; ++o) {
    TrigPoly q(p.degree());
    for (int k = 1; k <= p.degree(); ++k) {
      const double w = kTwoPi * k;
      q.c_[2 * k - 1] = w * p.c_[2 * k];
      q.c_[2 * k] = -w * p.c_[2 * k - 1];
    }
    p = std::move(q);
  }
  return p;
}

TrigPoly TrigPoly::antiderivative(double tol) const {
  if (std::abs(c_[0]) > tol) throw std::domain_error("antiderivative: nonzero mean");
  TrigPoly q(degree());
  for (int k = 1; k <= degree(); ++k) {
    const double w = kTwoPi * k;
    q.c_[2 * k - 1] = -c_[2 * k] / w;
    q.c_[2 * k] = c_[2 * k - 1] / w;
  }
  return q;
}

TrigPoly TrigPoly::resized(int degree) const {
  TrigPoly q(degree);
  const std::size_t n = std::min(q.c_.size(), c_.size());
  std::copy_n(c_.begin(), n, q.c_.begin());
  return q;
}

TrigPoly TrigPoly::trimmed(double tol) const {
  int n = degree();
  while (n > 0 && std::abs(c_[2 * n - 1]) <= tol && std::abs(c_[2 * n]) <= tol) --n;
  return resized(n);
}

double TrigPoly::max_abs_coeff() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double TrigPoly::sup_norm() const {
  double m = 0.0;
  for (double v : sample(std::max(16, 8 * degree() + 8))) m = std::max(m, std::abs(v));
  return m;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

TrigPoly& TrigPoly::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
TrigPoly operator-(TrigPoly a) { return a *= -1.0; }
TrigPoly operator*(TrigPoly a, double s) { return a *= s; }
TrigPoly operator*(double s, TrigPoly a) { return a *= s; }

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  const int n = a.degree() + b.degree();
  const int m = 2 * n + 1;
  auto sa = a.sample(m);
  const auto sb = b.sample(m);
  for (int j = 0; j < m; ++j) sa[j] *= sb[j];
  return project(sa, n);
}

TrigPoly project(std::span<const double> samples, int degree) {
  TrigPoly p(degree);
  analyse(samples.data(), 1, static_cast<int>(samples.size()), degree, p.coeffs().data());
  return p;
}

// --------------------------------------------------------------- TrigPoly2

TrigPoly2::TrigPoly2(int degree_x, int degree_y) : n1_(degree_x), n2_(degree_y) {
  if (degree_x < 0 || degree_y < 0) throw std::invalid_argument("TrigPoly2: negative degree");
  c_.assign(ebasis_size(n1_) * ebasis_size(n2_), 0.0);
}

TrigPoly2 TrigPoly2::constant(double a) {
  TrigPoly2 p(0, 0);
  p.c_[0] = a;
  return p;
}

TrigPoly2 TrigPoly2::from_x(const TrigPoly& p) { return separable(p, TrigPoly::constant(1.0)); }
TrigPoly2 TrigPoly2::from_y(const TrigPoly& p) { return separable(TrigPoly::constant(1.0), p); }

TrigPoly2 TrigPoly2::separable(const TrigPoly& p, const TrigPoly& q) {
  TrigPoly2 r(p.degree(), q.degree());
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j) r.at(i, j) = p.coeffs()[i] * q.coeffs()[j];
  return r;
}

double TrigPoly2::operator()(double x, double y) const {
  double fx, fy;
  return eval_grad(x, y, fx, fy);
}

double TrigPoly2::eval_grad(double x, double y, double& fx, double& fy) const {
  constexpr int kStack = 129;
  double bx[kStack], by[kStack];
  std::vector<double> hx, hy;
  double* ex = bx;
  double* ey = by;
  if (rows() > kStack) {
    hx.resize(rows());
    ex = hx.data();
  }
  if (cols() > kStack) {
    hy.resize(cols());
    ey = hy.data();
  }
  basis_values(x, n1_, ex);
  basis_values(y, n2_, ey);
  // derivative of e_{2k-1} is -w e_{2k}, of e_{2k} is w e_{2k-1}
  auto dbasis = [](const double* e, int i) {
    if (i == 0) return 0.0;
    const int k = (i + 1) / 2;
    const double w = kTwoPi * k;
    return (i % 2 == 1) ? -w * e[i + 1] : w * e[i - 1];
  };
  double s = 0.0, sx = 0.0, sy = 0.0;
  for (int i = 0; i < rows(); ++i) {
    double r = 0.0, ry = 0.0;
    const double* row = &c_[static_cast<std::size_t>(i) * cols()];
    for (int j = 0; j < cols(); ++j) {
      r += row[j] * ey[j];
      ry += row[j] * dbasis(ey, j);
    }
    s += ex[i] * r;
    sx += dbasis(ex, i) * r;
    sy += ex[i] * ry;
  }
  fx = sx;
  fy = sy;
  return s;
}

TrigPoly2 TrigPoly2::dx() const {
  TrigPoly2 r(n1_, n2_);
  for (int k = 1; k <= n1_; ++k) {
    const double w = kTwoPi * k;
    for (int j = 0; j < cols(); ++j) {
      r.at(2 * k - 1, j) = w * at(2 * k, j);
      r.at(2 * k, j) = -w * at(2 * k - 1, j);
    }
  }
  return r;
}

TrigPoly2 TrigPoly2::dy() const {
  TrigPoly2 r(n1_, n2_);
  for (int i = 0; i < rows(); ++i)
    for (int k = 1; k <= n2_; ++k) {
      const double w = kTwoPi * k;
      r.at(i, 2 * k - 1) = w * at(i, 2 * k);
      r.at(i, 2 * k) = -w * at(i, 2 * k - 1);
    }
  return r;
}

namespace {
int mode_of(int e) { return (e + 1) / 2; }
}  // namespace

TrigPoly2 TrigPoly2::laplacian() const {
  TrigPoly2 r = *this;
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j) {
      const double k = mode_of(i), l = mode_of(j);
      r.at(i, j) *= -kTwoPi * kTwoPi * (k * k + l * l);
    }
  return r;
}

TrigPoly2 TrigPoly2::inverse_laplacian(double tol) const {
  if (std::abs(c_[0]) > tol) throw std::domain_error("inverse_laplacian: nonzero mean");
  TrigPoly2 r = *this;
  r.c_[0] = 0.0;
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j) {
      if (i == 0 && j == 0) continue;
      const double k = mode_of(i), l = mode_of(j);
      r.at(i, j) /= -kTwoPi * kTwoPi * (k * k + l * l);
    }
  return r;
}

TrigPoly TrigPoly2::as_x_poly() const {
  TrigPoly p(n1_);
  std::vector<double> ey(cols());
  basis_values(0.0, n2_, ey.data());
  for (int i = 0; i < rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < cols(); ++j) s += at(i, j) * ey[j];
    p.coeffs()[i] = s;
  }
  return p;
}

TrigPoly2 TrigPoly2::resized(int degree_x, int degree_y) const {
  TrigPoly2 r(degree_x, degree_y);
  const int nr = std::min(rows(), r.rows()), nc = std::min(cols(), r.cols());
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) r.at(i, j) = at(i, j);
  return r;
}

TrigPoly2 TrigPoly2::trimmed(double tol) const {
  int d1 = 0, d2 = 0;
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j)
      if (std::abs(at(i, j)) > tol) {
        d1 = std::max(d1, mode_of(i));
        d2 = std::max(d2, mode_of(j));
      }
  return resized(d1, d2);
}

double TrigPoly2::max_abs_coeff() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

std::vector<double> sample2(const TrigPoly2& p, int m1, int m2) {
  const auto tx = basis_table(m1, p.degree_x());
  const auto ty = basis_table(m2, p.degree_y());
  const int r = p.rows(), c = p.cols();
  // tmp[i][q] = sum_j C[i][j] ey_j(q)
  std::vector<double> tmp(static_cast<std::size_t>(r) * m2, 0.0);
  for (int i = 0; i < r; ++i)
    for (int q = 0; q < m2; ++q) {
      double s = 0.0;
      for (int j = 0; j < c; ++j) s += p.at(i, j) * ty[static_cast<std::size_t>(q) * c + j];
      tmp[static_cast<std::size_t>(i) * m2 + q] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(m1) * m2, 0.0);
  for (int a = 0; a < m1; ++a)
    for (int i = 0; i < r; ++i) {
      const double e = tx[static_cast<std::size_t>(a) * r + i];
      if (e == 0.0) continue;
      for (int q = 0; q < m2; ++q) out[static_cast<std::size_t>(a) * m2 + q] += e * tmp[static_cast<std::size_t>(i) * m2 + q];
    }
  return out;
}

}  // namespace

double TrigPoly2::sup_norm() const {
  const int m1 = std::max(8, 4 * (2 * n1_ + 1)), m2 = std::max(8, 4 * (2 * n2_ + 1));
  double m = 0.0;
  for (double v : sample2(*this, m1, m2)) m = std::max(m, std::abs(v));
  return m;
}

TrigPoly2& TrigPoly2::operator+=(const TrigPoly2& o) {
  if (o.n1_ > n1_ || o.n2_ > n2_) *this = resized(std::max(n1_, o.n1_), std::max(n2_, o.n2_));
  for (int i = 0; i < o.rows(); ++i)
    for (int j = 0; j < o.cols(); ++j) at(i, j) += o.at(i, j);
  return *this;
}

TrigPoly2& TrigPoly2::operator-=(const TrigPoly2& o) {
  if (o.n1_ > n1_ || o.n2_ > n2_) *this = resized(std::max(n1_, o.n1_), std::max(n2_, o.n2_));
  for (int i = 0; i < o.rows(); ++i)
    for (int j = 0; j < o.cols(); ++j) at(i, j) -= o.at(i, j);
  return *this;
}

TrigPoly2& TrigPoly2::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

TrigPoly2 operator+(TrigPoly2 a, const TrigPoly2& b) { return a += b; }
TrigPoly2 operator-(TrigPoly2 a, const TrigPoly2& b) { return a -= b; }
TrigPoly2 operator-(TrigPoly2 a) { return a *= -1.0; }
TrigPoly2 operator*(TrigPoly2 a, double s) { return a *= s; }
TrigPoly2 operator*(double s, TrigPoly2 a) { return a *= s; }

TrigPoly2 operator*(const TrigPoly2& a, const TrigPoly2& b) {
  const int n1 = a.degree_x() + b.degree_x(), n2 = a.degree_y() + b.degree_y();
  const int m1 = 2 * n1 + 1, m2 = 2 * n2 + 1;
  auto sa = sample2(a, m1, m2);
  const auto sb = sample2(b, m1, m2);
  for (std::size_t i = 0; i < sa.size(); ++i) sa[i] *= sb[i];
  return project2(sa, m1, m2, n1, n2);
}

TrigPoly2 project2(std::span<const double> samples, int m1, int m2, int degree_x, int degree_y) {
  if (samples.size() != static_cast<std::size_t>(m1) * m2)
    throw std::invalid_argument("project2: sample count does not match grid");
  TrigPoly2 r(degree_x, degree_y);
  const int c = r.cols();
  std::vector<double> tmp(static_cast<std::size_t>(m1) * c);
  for (int a = 0; a < m1; ++a) analyse(samples.data() + static_cast<std::size_t>(a) * m2, 1, m2, degree_y, &tmp[static_cast<std::size_t>(a) * c]);
  std::vector<double> col(r.rows());
  for (int j = 0; j < c; ++j) {
    analyse(tmp.data() + j, c, m1, degree_x, col.data());
    for (int i = 0; i < r.rows(); ++i) r.at(i, j) = col[i];
  }
  return r;
}

}  // namespace abext
