#pragma once

#include <functional>
#include <type_traits>
#include <utility>
#include <vector>

#include "abext/diffeo.hpp"

namespace abext {

/// Uniform grid t_k = k/K on [0,1] split into smooth segments at break nodes.
class TimeGrid {
 public:
  explicit TimeGrid(int intervals = 64, std::vector<int> breaks = {});

  int intervals() const { return k_; }
  int nodes() const { return k_ + 1; }
  double step() const { return 1.0 / k_; }
  double t(int k) const { return double(k) / k_; }
  const std::vector<int>& breaks() const { return breaks_; }

  /// Node index ranges [first, last] of the smooth segments.
  std::vector<std::pair<int, int>> segments() const;
  /// Derivative weights at node k using only nodes of segment `seg`.
  std::vector<std::pair<int, double>> derivative_stencil(int k, int seg, int order = 8) const;
  /// Weights integrating over [0,1] a function sampled per segment; entry
  /// (seg, k) refers to the value at node k as seen from that segment.
  std::vector<std::vector<double>> quadrature_weights(int order = 8) const;
  /// Segment containing the interval [t_i, t_{i+1}].
  int segment_of_interval(int i) const;
  /// Weights integrating over [t_i, t_{i+1}] using nodes of that interval's segment.
  std::vector<std::pair<int, double>> interval_quadrature(int i, int order = 8) const;

  /// Grid of the concatenation g * h (first half g, second half h).
  TimeGrid concatenated(const TimeGrid& o) const;

 private:
  int k_;
  std::vector<int> breaks_;
};

/// Finite-difference weights for the first derivative at x0 from nodes xs (Fornberg).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs);

using Matrix = Eigen::MatrixXd;

struct GLPath {
  TimeGrid grid;
  std::vector<Matrix> nodes;

  /// Samples a smooth matrix function on the grid.
  static GLPath sample(const std::function<Matrix(double)>& f, int intervals);
  /// u' = A_t u, u_0 = 1, RK4 in the matrix group with `substeps` per interval.
  static GLPath flow(const std::function<Matrix(double)>& a, int intervals, int substeps = 4);
  static GLPath constant(const Matrix& u, int intervals);

  int dim() const { return static_cast<int>(nodes.front().rows()); }
  GLPath inverse() const;
  /// Pointwise product h1 h2 on a common grid.
  GLPath pointwise(const GLPath& o) const;
  /// Concatenation g then g_1 h (the reparametrised path product).
  GLPath then(const GLPath& o) const;
};

enum class Side { Left, Right };

/// Derivative of the node values within a segment.
std::vector<Matrix> time_derivative(const GLPath& p, int seg);
/// delta^l u = u^{-1} u', delta^r u = u' u^{-1}, per segment then node.
std::vector<std::vector<Matrix>> log_derivative(const GLPath& p, Side side);

/// Path of diffeomorphisms with optional fast trajectory evaluation.
class DiffeoPath {
 public:
  DiffeoPath() = default;
  DiffeoPath(TimeGrid grid, std::vector<Diffeo> nodes);

  /// phi_t = flow of X_t from 0 to t, RK4 with `substeps` steps per interval
  /// (0 picks a step from the field's Lipschitz bound). Throws when the
  /// endpoint loses monotonicity.
  static DiffeoPath flow(const TimeField& x, int intervals, int substeps = 0,
                         const Tolerances& tol = default_tolerances());
  static DiffeoPath family(const std::function<Diffeo(double)>& f, int intervals);
  static DiffeoPath constant(const Diffeo& d, int intervals);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<Diffeo>& nodes() const { return nodes_; }
  Base base() const { return nodes_.front().base(); }

  /// phi_{t_k}(x) for every node.
  std::vector<Point> trajectory(const Point& x) const;
  std::vector<Point> trajectory(const Point& x, std::vector<Eigen::Matrix2d>& jac) const;

  /// d/dt phi_t at x for node k as seen from segment seg.
  Point velocity(int k, int seg, const Point& x) const;
  /// delta^l phi_t (x) = D phi_t(x)^{-1} d/dt phi_t(x).
  Point left_log(int k, int seg, const Point& x) const;
  /// delta^r phi_t (y) = d/dt phi_t (phi_t^{-1}(y)).
  Point right_log(int k, int seg, const Point& y) const;
  /// All nodes of one segment at x: delta^l values.
  std::vector<Point> left_log_all(int seg, const Point& x) const;

  DiffeoPath inverse() const;
  DiffeoPath pointwise(const DiffeoPath& o) const;
  DiffeoPath then(const DiffeoPath& o) const;

 private:
  TimeGrid grid_;
  std::vector<Diffeo> nodes_;
  std::shared_ptr<const TimeField> field_;  // set for flow paths
  int substeps_ = 0;
};

/// Projection of a per-node algebra path to trig polys (S^1 right/left derivative).
std::vector<TrigPoly> log_derivative_circle(const DiffeoPath& p, Side side, int seg, int degree);

// ---------------------------------------------------------------- identities

/// sup over nodes of |delta^r h - h delta^l h h^{-1}| and |delta^r h + delta^l(h^{-1})|.
struct RelaResidual {
  double adjoint = 0.0;
  double inverse = 0.0;
};
RelaResidual rela_check(const GLPath& h);
RelaResidual rela_check(const DiffeoPath& h, const std::vector<Point>& samples);

/// sup |delta^r(h1 h2) - delta^r h1 - Ad(h1) delta^r h2|.
double leibniz_check(const GLPath& h1, const GLPath& h2);
double leibniz_check(const DiffeoPath& h1, const DiffeoPath& h2, const std::vector<Point>& samples);

/// Two-parameter family h(t, s) in GL(V) on [0,1]^2. The identity is sometimes
/// written with both derivatives taken in t; only the mixed form below is checked.
struct MaurerCartanResidual {
  double right = 0.0;  // |d_t eta - d_s xi - [xi, eta]|, xi = h_t h^-1, eta = h_s h^-1
  double left = 0.0;   // |d_t eta^l - d_s xi^l + [xi^l, eta^l]|
};
MaurerCartanResidual maurer_cartan_check(const std::function<Matrix(double, double)>& h, int intervals);

/// Maurer-Cartan for a map into A = V/Gamma given by a lift: |d(dh)| with
/// derivatives by finite differences on an n x n grid.
double maurer_cartan_check_abelian(const std::function<Eigen::VectorXd(double, double)>& lift, int vdim, int intervals);

/// Order-8 central difference of a scalar function of one variable.
template <class F>
auto central_derivative(F&& f, double x, double h) {
  static constexpr double w[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  using T = std::decay_t<decltype(f(x))>;
  T r = (f(x + h) - f(x - h)) * w[0];
  for (int i = 1; i < 4; ++i) r += (f(x + (i + 1) * h) - f(x - (i + 1) * h)) * w[i];
  return T(r / h);
}

}  // namespace abext
