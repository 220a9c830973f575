#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace abext {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Truncated Fourier series on R/Z.
///
/// Coefficients live in the "e-basis": e_0 = 1, e_{2k-1} = cos(2 pi k x),
/// e_{2k} = sin(2 pi k x).
class TrigPoly {
 public:
  TrigPoly() : c_(1, 0.0) {}
  explicit TrigPoly(int degree);
  explicit TrigPoly(std::vector<double> ebasis);

  static TrigPoly constant(double a0);
  static TrigPoly cos_mode(int k, double scale = 1.0);
  static TrigPoly sin_mode(int k, double scale = 1.0);

  int degree() const { return static_cast<int>(c_.size() / 2); }
  const std::vector<double>& coeffs() const { return c_; }
  std::vector<double>& coeffs() { return c_; }

  double a0() const { return c_[0]; }
  double a(int k) const;
  double b(int k) const;
  void set_a(int k, double v);
  void set_b(int k, double v);

  double operator()(double x) const;
  std::vector<double> sample(int points) const;

  TrigPoly derivative(int order = 1) const;
  /// Zero-mean antiderivative; throws if the mean is not zero to `tol`.
  TrigPoly antiderivative(double tol = 1e-12) const;

  TrigPoly resized(int degree) const;
  /// Drops trailing modes whose coefficients are all below `tol`.
  TrigPoly trimmed(double tol = 0.0) const;

  double max_abs_coeff() const;
  /// Sup norm estimated on a grid four times finer than the degree.
  double sup_norm() const;

  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator-=(const TrigPoly& o);
  TrigPoly& operator*=(double s);

 private:
  std::vector<double> c_;
};

TrigPoly operator+(TrigPoly a, const TrigPoly& b);
TrigPoly operator-(TrigPoly a, const TrigPoly& b);
TrigPoly operator-(TrigPoly a);
TrigPoly operator*(TrigPoly a, double s);
TrigPoly operator*(double s, TrigPoly a);
TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);

/// Discrete Fourier projection of samples at j/M, j = 0..M-1.
TrigPoly project(std::span<const double> samples, int degree);

/// Values of the e-basis functions e_0..e_{2N} at x.
void basis_values(double x, int degree, double* out);

/// Truncated Fourier series on T^2 in the product basis e_i(x) e_j(y).
class TrigPoly2 {
 public:
  TrigPoly2() : n1_(0), n2_(0), c_(1, 0.0) {}
  TrigPoly2(int degree_x, int degree_y);

  static TrigPoly2 constant(double a);
  static TrigPoly2 from_x(const TrigPoly& p);
  static TrigPoly2 from_y(const TrigPoly& p);
  /// p(x) q(y).
  static TrigPoly2 separable(const TrigPoly& p, const TrigPoly& q);

  int degree_x() const { return n1_; }
  int degree_y() const { return n2_; }
  int rows() const { return 2 * n1_ + 1; }
  int cols() const { return 2 * n2_ + 1; }
  double& at(int i, int j) { return c_[static_cast<std::size_t>(i) * cols() + j]; }
  double at(int i, int j) const { return c_[static_cast<std::size_t>(i) * cols() + j]; }
  const std::vector<double>& coeffs() const { return c_; }

  double operator()(double x, double y) const;
  /// Value and both partial derivatives at (x, y).
  double eval_grad(double x, double y, double& fx, double& fy) const;
  double mean() const { return c_[0]; }

  TrigPoly2 dx() const;
  TrigPoly2 dy() const;
  TrigPoly2 laplacian() const;
  /// Solves lap(u) = *this for zero-mean u; throws if the mean is nonzero.
  TrigPoly2 inverse_laplacian(double tol = 1e-12) const;

  /// Restriction to y = 0 as a function of x (only meaningful when degree_y == 0).
  TrigPoly as_x_poly() const;

  TrigPoly2 resized(int degree_x, int degree_y) const;
  TrigPoly2 trimmed(double tol = 0.0) const;
  double max_abs_coeff() const;
  double sup_norm() const;

  TrigPoly2& operator+=(const TrigPoly2& o);
  TrigPoly2& operator-=(const TrigPoly2& o);
  TrigPoly2& operator*=(double s);

 private:
  int n1_, n2_;
  std::vector<double> c_;
};

TrigPoly2 operator+(TrigPoly2 a, const TrigPoly2& b);
TrigPoly2 operator-(TrigPoly2 a, const TrigPoly2& b);
TrigPoly2 operator-(TrigPoly2 a);
TrigPoly2 operator*(TrigPoly2 a, double s);
TrigPoly2 operator*(double s, TrigPoly2 a);
TrigPoly2 operator*(const TrigPoly2& a, const TrigPoly2& b);

/// Projection of samples on the grid (i/M1, j/M2), row-major in i.
TrigPoly2 project2(std::span<const double> samples, int m1, int m2, int degree_x, int degree_y);

/// Samples `f` on a grid fine enough for the requested degrees and projects.
template <class F>
TrigPoly2 project2_fn(F&& f, int degree_x, int degree_y) {
  const int m1 = 2 * degree_x + 1, m2 = 2 * degree_y + 1;
  std::vector<double> s(static_cast<std::size_t>(m1) * m2);
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m2; ++j)
      s[static_cast<std::size_t>(i) * m2 + j] = f(double(i) / m1, double(j) / m2);
  return project2(s, m1, m2, degree_x, degree_y);
}

template <class F>
TrigPoly project_fn(F&& f, int degree, int points = 0) {
  const int m = points > 0 ? points : 2 * degree + 1;
  std::vector<double> s(m);
  for (int j = 0; j < m; ++j) s[j] = f(double(j) / m);
  return project(s, degree);
}

}  // namespace abext
