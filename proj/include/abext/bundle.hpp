#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abext/cocycles.hpp"
#include "abext/forms.hpp"
#include "abext/tolerances.hpp"

namespace abext {

/// Discrete subgroup of V = R^n spanned by independent columns.
class LatticeGroup {
 public:
  LatticeGroup() : LatticeGroup(Eigen::MatrixXd::Zero(1, 0)) {}
  explicit LatticeGroup(Eigen::MatrixXd basis);

  static LatticeGroup zero(int vdim) { return LatticeGroup(Eigen::MatrixXd::Zero(vdim, 0)); }
  /// Subgroup generated by the columns of `gens`; nullopt when it is not discrete.
  /// Dependent generators are only resolved in the rank-one case (rational ratios).
  static std::optional<LatticeGroup> from_generators(const Eigen::MatrixXd& gens,
                                                     const Tolerances& tol = default_tolerances());

  int vdim() const { return static_cast<int>(basis_.rows()); }
  int rank() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  /// Smallest singular value of the basis: every nonzero element is at least this long.
  double min_norm() const { return min_norm_; }

  Eigen::VectorXd nearest(const Eigen::VectorXd& v) const;
  Eigen::VectorXd reduce(const Eigen::VectorXd& v) const { return v - nearest(v); }
  double distance(const Eigen::VectorXd& v) const { return reduce(v).norm(); }

 private:
  Eigen::MatrixXd basis_;
  double min_norm_ = 0.0;
};

struct PeriodGroup {
  Eigen::MatrixXd generators;            // integrals of omega over a basis of H_2
  std::optional<LatticeGroup> lattice;   // empty when the periods are not discrete
  bool discrete() const { return lattice.has_value(); }
};

/// Period group of a closed V-valued 2-form on T^2 (trivial on S^1).
PeriodGroup period_group(const VForm& omega, const Tolerances& tol = default_tolerances());

/// A point of the bundle chart: base point in the covering plane plus a fiber coordinate in V.
struct ChartPoint {
  Point x;
  Eigen::VectorXd v;
};

/// V-valued function on the chart: p(x) + x q(x) + y r(x) + L v with p, q, r periodic.
struct ChartFunction {
  std::vector<TrigPoly2> periodic, xcoef, ycoef;
  Eigen::MatrixXd vlin;

  static ChartFunction zero(int vdim);
  static ChartFunction from_form(const VForm& f);  // a V-valued 0-form pulled back by q

  int vdim() const { return static_cast<int>(periodic.size()); }
  Eigen::VectorXd operator()(const ChartPoint& p) const;
  /// Rows index V; columns d/dx, d/dy, d/dv_1..n.
  Eigen::MatrixXd gradient(const ChartPoint& p) const;

  ChartFunction& operator+=(const ChartFunction& o);
  ChartFunction& operator*=(double s);
};

ChartFunction operator+(ChartFunction a, const ChartFunction& b);
ChartFunction operator-(ChartFunction a, const ChartFunction& b);
ChartFunction operator*(double s, ChartFunction a);

enum class ChartMode { Trivial, Magnetic };

/// Principal A = V/Gamma bundle with connection theta = dv + A_gauge on the
/// covering chart R^2 x V (R x V on S^1).
///
/// Trivial mode: A_gauge = alpha, curvature d alpha.
/// Magnetic mode: A_gauge = beta + B x dy, beta coexact and B the mean of
/// omega; deck transformations are T_x(x, y, v) = (x + 1, y, v - B y) and
/// T_y(x, y, v) = (x, y + 1, v).
class BundleChart {
 public:
  static BundleChart trivial(const VForm& alpha, const LatticeGroup& gamma);
  static BundleChart trivial(const VForm& alpha);
  static BundleChart magnetic(const VForm& omega, const Tolerances& tol = default_tolerances());

  ChartMode mode() const { return mode_; }
  Base base() const { return base_; }
  int vdim() const { return vdim_; }
  const VForm& omega() const { return omega_; }
  /// Periodic part of the gauge potential.
  const VForm& beta() const { return beta_; }
  const Eigen::VectorXd& flux_density() const { return b_; }
  const LatticeGroup& lattice() const { return lattice_; }

  /// Gauge potential at a covering point: rows dx, dy (dx only on S^1), columns V.
  Eigen::MatrixXd potential(const Point& x) const;
  /// theta at p as a (base_dim + n) x n matrix: gauge rows then the identity.
  Eigen::MatrixXd theta(const ChartPoint& p) const;
  /// Image of p under the deck transformation by the integer vector m.
  ChartPoint deck(const ChartPoint& p, const Eigen::Vector2i& m) const;
  /// sup |d A_gauge - omega| over the coefficients.
  double curvature_residual() const;

 private:
  ChartMode mode_ = ChartMode::Trivial;
  Base base_ = Base::S1;
  int vdim_ = 1;
  VForm omega_, beta_;
  Eigen::VectorXd b_;
  LatticeGroup lattice_;
};

/// Horizontal lift of a path: v' = -A_gauge(c'), RK4 with `steps` per piece.
Eigen::VectorXd parallel_transport(const BundleChart& chart, const Loop& path, const Eigen::VectorXd& v0,
                                   int steps = 256);

struct Holonomy {
  Eigen::VectorXd transport;  // ODE route, reduced mod Gamma
  Eigen::VectorXd stokes;     // Stokes (contractible) or line integral plus deck data, reduced mod Gamma
  Eigen::Vector2i winding = Eigen::Vector2i::Zero();
  double discrepancy = 0.0;   // distance between the two routes in A
};

/// Holonomy h with rho(l_hor(0), h) = l_hor(1). For contractible loops
/// h = -int_Sigma omega.
Holonomy holonomy(const BundleChart& chart, const Loop& loop, const Tolerances& tol = default_tolerances(),
                  int steps = 256);

struct RhoPullback {
  double residual = 0.0;    // |rho(f)^* theta - theta - delta^l f|
  double transition = 0.0;  // distance to Gamma of the changes of f under deck maps and Gamma
};

/// Checks rho(f)^* theta = theta + delta^l f on the sample points.
RhoPullback rho_pullback_check(const BundleChart& chart, const ChartFunction& f,
                               const std::vector<ChartPoint>& samples);

/// Vector field on the chart: horizontal part on the base plus a vertical chart function.
struct PVectorField {
  VectorField horizontal;
  ChartFunction vertical;

  Eigen::VectorXd operator()(const ChartPoint& p) const;
  /// Derivative in chart coordinates (x, y, v) at p; square of size 2 + n.
  Eigen::MatrixXd jacobian(const ChartPoint& p) const;
};

PVectorField horizontal_lift(const BundleChart& chart, const VectorField& eta);
PVectorField vertical_generator(const BundleChart& chart, const Eigen::VectorXd& v);
/// theta(xi) as a chart function.
ChartFunction contract_theta(const BundleChart& chart, const PVectorField& xi);
/// L_xi theta at p from the coordinate formula; (2 + n) x n.
Eigen::MatrixXd lie_derivative_theta(const BundleChart& chart, const PVectorField& xi, const ChartPoint& p);
/// Bracket of chart vector fields at p under the given convention.
Eigen::VectorXd chart_bracket(const PVectorField& a, const PVectorField& b, const ChartPoint& p,
                              Convention c = Convention::Negative);

struct NotAdmissible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SouriauField {
  VectorField eta;
  PVectorField xi;
  double residual = 0.0;  // sup |i_eta omega - df| of the admissibility solve
};

/// Invariant case: xi_f = eta_f^hor - (q^* f) E with i_{eta_f} omega = df.
SouriauField souriau_field(const BundleChart& chart, const VForm& f, int budget = 16,
                           const Tolerances& tol = default_tolerances());
/// Equivariant case: xi_h = eta^hor - rho'(h).
PVectorField souriau_field(const BundleChart& chart, const VectorField& eta, const ChartFunction& h);

struct SouriauCheck {
  double contraction = 0.0;  // |-theta(xi) - h|
  double lie = 0.0;          // |L_xi theta - gamma theta|
};
SouriauCheck check_souriau(const BundleChart& chart, const PVectorField& xi, const ChartFunction& h,
                           const Eigen::MatrixXd& gamma, const std::vector<ChartPoint>& samples);

/// Hamiltonian f of a field with i_eta omega = df, normalised to f(x0) = 0; throws NotAdmissible
/// when i_eta omega is not exact.
VForm hamiltonian_of(const BundleChart& chart, const VectorField& eta, const Point& x0,
                     const Tolerances& tol = default_tolerances());

struct BracketDefect {
  Eigen::VectorXd value;          // theta of the defect at (x0, v0)
  double horizontal = 0.0;        // size of its horizontal part
  double spread = 0.0;            // variation of the defect along the fiber over x0
};

/// [s(eta1), s(eta2)] - s([eta1, eta2]) at x0 for sections built from hamiltonians f1, f2.
BracketDefect quantomorphism_bracket_defect(const BundleChart& chart, const VForm& f1, const VForm& f2,
                                            const Point& x0, Convention c = Convention::Negative,
                                            const Tolerances& tol = default_tolerances());

struct AlmostInvariance {
  Eigen::VectorXd value;  // mean of h - h o rho(a)
  double spread = 0.0;
};
AlmostInvariance almost_invariance(const ChartFunction& h, const Eigen::VectorXd& a,
                                   const std::vector<ChartPoint>& samples);

/// Uniform sample of chart points over a base grid and fiber offsets in [-1, 1]^n.
std::vector<ChartPoint> chart_samples(const BundleChart& chart, int per_axis, Rng& rng);

}  // namespace abext
