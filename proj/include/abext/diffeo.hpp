#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "abext/forms.hpp"
#include "abext/tolerances.hpp"

namespace abext {

/// Time-dependent field X_t = sum_m t^m terms[m].
struct TimeField {
  Base base = Base::S1;
  std::vector<VectorField> terms;

  static TimeField autonomous(const VectorField& x) { return {x.base(), {x}}; }
  Point operator()(double t, const Point& p) const;
  Point value_and_jacobian(double t, const Point& p, Eigen::Matrix2d& j) const;
  VectorField at(double t) const;
  /// Upper bound for |D X_t| over t in [0,1], from coefficient sums.
  double lipschitz_bound() const;
};

/// x -> x + p(x); `inverted` selects the inverse map, evaluated by Newton.
struct DisplacementFactor {
  std::vector<TrigPoly2> p;
  bool inverted = false;
};

/// x -> a x + b on the covering plane.
struct AffineFactor {
  Eigen::Matrix2d a = Eigen::Matrix2d::Identity();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
};

/// Time-(t0 -> t1) map of a time-dependent field, classical RK4 with a fixed
/// number of steps so the map depends smoothly on t0 and t1.
struct FlowFactor {
  std::shared_ptr<const TimeField> field;
  double t0 = 0.0, t1 = 0.0;
  int steps = 0;
};

using DiffeoFactor = std::variant<DisplacementFactor, AffineFactor, FlowFactor>;

/// Diffeomorphism of S^1 or T^2 (acting on lifts in the covering line/plane),
/// stored as a chain of factors; factors()[0] is applied first.
///
/// On S^1 only the x coordinate of a Point is meaningful and the Jacobian is
/// diag(phi', 1).
class Diffeo {
 public:
  Diffeo() : base_(Base::S1) {}
  explicit Diffeo(Base base) : base_(base) {}

  static Diffeo identity(Base base) { return Diffeo(base); }
  static Diffeo translation(Base base, const Point& v);
  static Diffeo rotation(double s) { return translation(Base::S1, Point(s, 0.0)); }
  /// Torus automorphism-plus-translation; `a` must be an integer matrix with det +-1.
  static Diffeo affine(const Eigen::Matrix2d& a, const Point& b);
  /// x + p(x); validated on a grid (S^1: phi' > tol.mono, T^2: det > tol.mono).
  static Diffeo from_displacement(Base base, std::vector<TrigPoly2> p, const Tolerances& tol = default_tolerances());
  static Diffeo from_displacement(const TrigPoly& p, const Tolerances& tol = default_tolerances());
  static Diffeo flow(std::shared_ptr<const TimeField> field, double t0, double t1, int steps);

  Base base() const { return base_; }
  const std::vector<DiffeoFactor>& factors() const { return factors_; }
  bool is_identity() const { return factors_.empty(); }

  Point operator()(const Point& p) const;
  Eigen::Matrix2d jacobian(const Point& p) const;
  Point value_and_jacobian(const Point& p, Eigen::Matrix2d& j) const;
  Point inverse_at(const Point& q) const;

  /// this o inner
  Diffeo compose(const Diffeo& inner) const;
  Diffeo inverse() const;

  /// Re-projects x -> phi(x) - x onto trig polys of the given degree.
  Diffeo projected(int degree) const;
  /// Displacement phi(x) - x of a circle diffeomorphism, projected.
  TrigPoly displacement(int degree) const;
  /// Translation part of the induced map on H_1 (integer matrix) for T^2.
  Eigen::Matrix2d homology_action() const;

  /// Minimum of phi' (S^1) or det D phi (T^2) on a uniform grid.
  double min_jacobian(int grid = 64) const;

 private:
  Base base_;
  std::vector<DiffeoFactor> factors_;
};

Diffeo operator*(const Diffeo& a, const Diffeo& b);

/// Pullback phi^* w of a form, sampled and projected to the given degree.
VForm pullback(const Diffeo& phi, const VForm& w, int degree);
/// Pullback evaluated at a point: rows co-frame, columns V.
Eigen::MatrixXd pullback_at(const Diffeo& phi, const VForm& w, const Point& p);

}  // namespace abext
