#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "abext/trigpoly.hpp"

namespace abext {

enum class Base { S1, T2 };

inline int base_dim(Base b) { return b == Base::S1 ? 1 : 2; }
std::string to_string(Base b);
Base base_from_string(const std::string& s);

/// Number of co-frame components of a k-form on a base of dimension `dim`.
int form_components(int k, int dim);

/// Vector field with trigonometric components. On S^1 the single component
/// is stored as a TrigPoly2 of y-degree 0.
class VectorField {
 public:
  VectorField() : base_(Base::S1), comps_(1) {}
  VectorField(Base base, std::vector<TrigPoly2> comps);

  static VectorField on_circle(const TrigPoly& x);
  static VectorField on_torus(const TrigPoly2& x, const TrigPoly2& y);
  static VectorField constant(Base base, const Eigen::Vector2d& v);
  static VectorField zero(Base base);

  Base base() const { return base_; }
  int dim() const { return base_dim(base_); }
  const TrigPoly2& comp(int i) const { return comps_[i]; }
  const std::vector<TrigPoly2>& comps() const { return comps_; }

  Eigen::Vector2d operator()(const Eigen::Vector2d& p) const;
  /// J(i,j) = d_j X^i at p.
  Eigen::Matrix2d jacobian(const Eigen::Vector2d& p) const;
  Eigen::Vector2d value_and_jacobian(const Eigen::Vector2d& p, Eigen::Matrix2d& j) const;

  /// X . grad f
  TrigPoly2 apply(const TrigPoly2& f) const;
  TrigPoly2 divergence() const;
  /// Partial derivative field d_j X.
  VectorField partial(int j) const;

  double max_abs_coeff() const;
  double sup_norm() const;
  int max_degree() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);

 private:
  Base base_;
  std::vector<TrigPoly2> comps_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(VectorField a, double s);
VectorField operator*(double s, VectorField a);

/// Standard Lie bracket [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i.
VectorField bracket_std(const VectorField& x, const VectorField& y);

/// V-valued differential form, V = R^n. Components are indexed by
/// (co-frame index c, value index v); on T^2 the co-frame of a 1-form is
/// (dx, dy) and of a 2-form the single element dx^dy.
class VForm {
 public:
  VForm() : VForm(Base::S1, 0, 1) {}
  VForm(Base base, int degree, int vdim);

  static VForm function(Base base, const std::vector<TrigPoly2>& values);
  static VForm scalar_function(Base base, const TrigPoly2& f) { return function(base, {f}); }
  /// One-form sum_c comps[c] dx^c, scalar valued.
  static VForm one_form(Base base, const std::vector<TrigPoly2>& comps);
  /// Scalar two-form h dx^dy on T^2.
  static VForm area_form(const TrigPoly2& h);
  /// Stacks scalar forms of equal base and degree into a V-valued form.
  static VForm stack(const std::vector<VForm>& scalars);

  Base base() const { return base_; }
  int degree() const { return degree_; }
  int vdim() const { return vdim_; }
  int ncomp() const { return form_components(degree_, base_dim(base_)); }
  bool structurally_zero() const { return ncomp() == 0; }

  const TrigPoly2& comp(int c, int v = 0) const { return comps_[static_cast<std::size_t>(c) * vdim_ + v]; }
  TrigPoly2& comp(int c, int v = 0) { return comps_[static_cast<std::size_t>(c) * vdim_ + v]; }
  /// The scalar form given by value coordinate v.
  VForm slice(int v) const;

  /// Component values at p: rows index co-frame elements, columns index V.
  Eigen::MatrixXd operator()(const Eigen::Vector2d& p) const;
  /// Pairing with a tangent vector (1-forms) returning a V-vector.
  Eigen::VectorXd pair(const Eigen::Vector2d& p, const Eigen::Vector2d& t) const;

  double max_abs_coeff() const;
  double sup_norm() const;
  int max_degree() const;
  VForm trimmed(double tol = 0.0) const;

  VForm& operator+=(const VForm& o);
  VForm& operator-=(const VForm& o);
  VForm& operator*=(double s);

 private:
  Base base_;
  int degree_;
  int vdim_;
  std::vector<TrigPoly2> comps_;
};

VForm operator+(VForm a, const VForm& b);
VForm operator-(VForm a, const VForm& b);
VForm operator-(VForm a);
VForm operator*(VForm a, double s);
VForm operator*(double s, VForm a);

/// u . w for a linear map on V.
VForm apply_linear(const Eigen::MatrixXd& u, const VForm& w);
/// Multiplication by a scalar function.
VForm multiply(const TrigPoly2& f, const VForm& w);
/// Wedge product; at least one factor must be scalar valued.
VForm wedge(const VForm& a, const VForm& b);

VForm exterior_derivative(const VForm& f);
/// Interior product; requires degree >= 1.
VForm interior(const VectorField& x, const VForm& f);
/// Lie derivative computed from the coordinate formula, independent of Cartan.
VForm lie_derivative(const VectorField& x, const VForm& f);
/// d i_X f + i_X d f, the Cartan side of the identity.
VForm cartan_lie_derivative(const VectorField& x, const VForm& f);

/// Integral of a top-degree form (or a function on S^1) over the whole base.
Eigen::VectorXd integrate_base(const VForm& top);

/// Primitive of a 1-form: w = df + (constant harmonic part).
struct Primitive {
  VForm function;            // zero-mean f
  Eigen::MatrixXd periods;   // harmonic part: rows co-frame, columns V
  double residual = 0.0;     // max coefficient of w - df - harmonic part
};
Primitive solve_primitive(const VForm& oneform);

// ------------------------------------------------------------------ chains

using Point = Eigen::Vector2d;

/// A smooth piece t in [0,1] -> R^2 (the covering plane of T^2; on S^1 only
/// the x coordinate is used).
struct CurvePiece {
  std::function<Point(double)> position;
  std::function<Point(double)> velocity;
};

class Loop {
 public:
  Loop() = default;
  explicit Loop(std::vector<CurvePiece> pieces) : pieces_(std::move(pieces)) {}

  static Loop segment(const Point& a, const Point& b);
  static Loop polygon(const std::vector<Point>& vertices, bool close = true);
  static Loop circle(const Point& center, double radius, int turns = 1);
  /// c(t) = origin + t drift + (px(t), py(t)).
  static Loop trig_curve(const Point& origin, const Point& drift, const TrigPoly& px, const TrigPoly& py);
  static Loop constant(const Point& p);

  const std::vector<CurvePiece>& pieces() const { return pieces_; }
  Point start() const;
  Point end() const;
  double length() const;
  Loop reversed() const;
  Loop then(const Loop& o) const;
  /// Reparametrise each piece by the increasing map r with r(0)=0, r(1)=1.
  Loop reparametrized(const std::function<double(double)>& r, const std::function<double(double)>& dr) const;

 private:
  std::vector<CurvePiece> pieces_;
};

/// Oriented 2-chain given by maps [0,1]^2 -> R^2.
struct SurfacePiece {
  std::function<Point(double, double)> position;
  std::function<Eigen::Matrix2d(double, double)> jacobian;  // columns d/ds, d/dt
};

class Chain2 {
 public:
  Chain2() = default;
  explicit Chain2(std::vector<SurfacePiece> pieces) : pieces_(std::move(pieces)) {}
  /// Cone over a loop from an apex: its boundary is the loop.
  static Chain2 cone(const Loop& loop, const Point& apex);
  static Chain2 rectangle(const Point& corner, double w, double h);
  const std::vector<SurfacePiece>& pieces() const { return pieces_; }

 private:
  std::vector<SurfacePiece> pieces_;
};

struct QuadratureOptions {
  int panels = 16;  // composite Gauss-Legendre panels per piece, 20 nodes each
};

using PathIntegrand = std::function<Eigen::VectorXd(const Point& p, const Point& v)>;

Eigen::VectorXd integrate_along(const PathIntegrand& f, int vdim, const Loop& loop, QuadratureOptions q = {});
Eigen::VectorXd integrate_along(const VForm& oneform, const Loop& loop, QuadratureOptions q = {});
Eigen::VectorXd integrate_chain(const VForm& twoform, const Chain2& chain, QuadratureOptions q = {4});

/// Gauss-Legendre nodes and weights on [0,1], composite over `panels` panels.
void gauss_legendre_unit(int panels, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace abext
