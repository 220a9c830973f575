#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abext/flux.hpp"

namespace abext {

// ------------------------------------------------------------ 1-cocycles

/// Lie algebra 1-cocycle on gl(V) with values in W = R^m, together with the
/// group action of GL(V) on W it is a cocycle for.
struct MatrixCocycle1 {
  int wdim = 1;
  std::function<Eigen::VectorXd(const Eigen::MatrixXd& x)> alpha;
  std::function<Eigen::VectorXd(const Eigen::MatrixXd& g, const Eigen::VectorXd& w)> act;

  static MatrixCocycle1 zero(int wdim);
  /// tr X with the trivial action; integrates to log det.
  static MatrixCocycle1 trace();
  /// X -> [X, B] in gl(V) = R^{n*n} (column-major) with the adjoint action; integrates to g B g^-1 - B.
  static MatrixCocycle1 commutator(const Eigen::MatrixXd& b);
  /// X -> tr(X B) with the trivial action. Only a cocycle when B is central.
  static MatrixCocycle1 trace_pairing(const Eigen::MatrixXd& b);
};

struct CoarsePath : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// int_0^1 g_t . alpha(delta^l g_t) dt. Throws CoarsePath when halving the
/// grid moves the value by more than tau_ode.
Eigen::VectorXd integrate_1cocycle(const MatrixCocycle1& a, const GLPath& g, int order = 8,
                                   const Tolerances& tol = default_tolerances());
/// Running values of the same integral at every node.
std::vector<std::pair<double, Eigen::VectorXd>> integrate_1cocycle_trace(const MatrixCocycle1& a, const GLPath& g,
                                                                         int order = 8);

// ---------------------------------------------------- exact charts and c

/// (phi, u) with phi^* omega = u . omega.
struct EquiPair {
  Diffeo phi;
  Eigen::MatrixXd u;

  static EquiPair identity(Base base, int vdim) { return {Diffeo::identity(base), Eigen::MatrixXd::Identity(vdim, vdim)}; }
  EquiPair operator*(const EquiPair& o) const { return {phi * o.phi, u * o.u}; }
  EquiPair inverse() const { return {phi.inverse(), u.inverse()}; }
};

/// sup |phi^* omega - u . omega| on a sample grid, relative to max(1, sup |omega|).
double equivariance_residual(const VForm& omega, const EquiPair& g);

struct NotExact : std::runtime_error {
  Eigen::MatrixXd evaluations;  // loop integrals of u alpha - phi^* alpha, rows V
  NotExact(const std::string& what, Eigen::MatrixXd ev) : std::runtime_error(what), evaluations(std::move(ev)) {}
};

/// Chart with exact curvature omega = d alpha on S^1 or T^2, the data behind
/// the group 2-cocycle c and the extension group law.
class ExactChart {
 public:
  /// Accepts trivial charts and magnetic charts whose flux density vanishes.
  explicit ExactChart(const BundleChart& chart, const Point& x0 = Point::Zero(), int budget = 32,
                      const Tolerances& tol = default_tolerances());

  const BundleChart& chart() const { return chart_; }
  const VForm& alpha() const { return chart_.beta(); }
  const Point& x0() const { return x0_; }
  int budget() const { return budget_; }
  const Tolerances& tol() const { return tol_; }
  int vdim() const { return chart_.vdim(); }
  Base base() const { return chart_.base(); }
  unsigned long id() const { return id_; }

  /// Same chart with another normalization point.
  ExactChart renormalized(const Point& x1) const;

 private:
  BundleChart chart_;
  Point x0_;
  int budget_;
  Tolerances tol_;
  unsigned long id_;
};

struct PrimitiveMap {
  VForm f;                 // V-valued function with f(x0) = 0
  double residual = 0.0;   // sup |df - (u alpha - phi^* alpha)| on a sample grid
};

/// f(phi, u) with d f = u . alpha - phi^* alpha and f(x0) = 0. Throws NotExact when
/// the right side has nonzero periods and DegreeBudgetExceeded when the budget
/// does not resolve it.
PrimitiveMap primitive_map(const EquiPair& g, const ExactChart& chart);

/// c(g1, g2) = u1 f(g2)(x) - f(g1 g2)(x) + f(g1)(phi2(x)).
Eigen::VectorXd group_2cocycle(const EquiPair& g1, const EquiPair& g2, const ExactChart& chart, const Point& x);

struct CocycleSpread {
  Eigen::VectorXd value;   // c at the first sample point
  double spread = 0.0;     // max deviation over the samples
};
/// c evaluated on a 4 x 4 grid (a 4-point set on S^1 repeated with the y offsets ignored).
CocycleSpread group_2cocycle_spread(const EquiPair& g1, const EquiPair& g2, const ExactChart& chart);

/// u1 c(g2, g3) - c(g1 g2, g3) + c(g1, g2 g3) - c(g1, g2).
Eigen::VectorXd group_cocycle_defect(const std::function<Eigen::VectorXd(const EquiPair&, const EquiPair&)>& c,
                                     const EquiPair& g1, const EquiPair& g2, const EquiPair& g3);

/// |c_{x1} - c_{x0} + delta b| with b(g) = f_{x0}(g)(x1): a change of
/// normalization point changes c by the coboundary of b.
double normalization_coboundary_residual(const EquiPair& g1, const EquiPair& g2, const ExactChart& chart,
                                         const Point& x1);

// -------------------------------------------------------- group law

struct ExtElement {
  EquiPair g;
  Eigen::VectorXd a;
  std::optional<LatticeGroup> lattice;  // a is taken modulo this group when set
  unsigned long chart_id = 0;
};

ExtElement ext_identity(const ExactChart& chart);
ExtElement ext_element(const EquiPair& g, const Eigen::VectorXd& a, const ExactChart& chart);
/// ((phi1,u1),a1)((phi2,u2),a2) = ((phi1 phi2, u1 u2), a1 + u1 a2 + c(g1, g2)).
ExtElement ext_multiply(const ExtElement& e1, const ExtElement& e2, const ExactChart& chart);
/// ((phi,u),a)^-1 = ((phi^-1, u^-1), -u^-1 (a + c(g, g^-1))).
ExtElement ext_inverse(const ExtElement& e, const ExactChart& chart);
/// Largest of the fiber distance (mod the lattice) and the sampled distance of the (phi, u) parts.
double ext_distance(const ExtElement& e1, const ExtElement& e2);

// ------------------------------------------ actions of R^k and pullbacks

/// Action (lambda, b) of the additive group R^k on a chart base, acting on lifts.
struct ToyAction {
  int gdim = 2;
  std::function<EquiPair(const Eigen::VectorXd& g)> element;
  std::vector<VectorField> eta;          // lambda-dot of the basis vectors
  std::vector<Eigen::MatrixXd> gamma;    // b-dot of the basis vectors

  /// Translations of T^2, b = 1.
  static ToyAction translations(int vdim);
  /// (s, t) -> (translation by (-s/2pi, t), rotation of R^2 by s).
  static ToyAction rotations();
  /// lambda = id, b = 1.
  static ToyAction trivial(Base base, int gdim, int vdim);
};

struct NotEquiHamiltonian : std::runtime_error {
  std::vector<CohClass1> obstructions;  // flux class per generator
  NotEquiHamiltonian(const std::string& what, std::vector<CohClass1> ob)
      : std::runtime_error(what), obstructions(std::move(ob)) {}
};

struct PullbackOptions {
  Point x0 = Point::Zero();
  /// Act on the covering plane, where every closed form is exact. Otherwise
  /// the flux of every generator must vanish on the torus chart.
  bool cover = false;
  double fd_step = 1e-3;
  int samples = 8;      // random triples for the identity checks
  unsigned seed = 1;
};

struct PullbackExtension {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> cocycle;  // c(g1, g2) = f(g1, lambda_g2 x0)
  std::vector<Eigen::MatrixXd> lie;        // per V component: antisymmetrised second difference of c at 0
  std::vector<Eigen::MatrixXd> expected;   // per V component: -omega(lambda-dot X_i, lambda-dot X_j)(x0)
  double lie_raw_error = 0.0;      // max |lie - expected|
  double lie_error = 0.0;          // the same modulo coboundaries of the b-dot module
  Eigen::MatrixXd coboundary;      // V x k: l(e_j) realising lie - expected = d l
  double cocycle_identity = 0.0;  // max |b_{g1} c(g2,g3) - c(g1 g2,g3) + c(g1,g2 g3) - c(g1,g2)|
  double associativity = 0.0;     // same defect seen through the group law on G x V
  double normalization = 0.0;     // max |c(g, 0)|, |c(0, g)|
};

/// f(g, x) on the covering plane: d f = b_g alpha - lambda_g^* alpha along the
/// segment from x0 to x, f(g, x0) = 0.
Eigen::VectorXd section_function(const BundleChart& chart, const EquiPair& g, const Point& x0, const Point& x);

PullbackExtension pullback_extension(const BundleChart& chart, const ToyAction& action, PullbackOptions opt = {},
                                     const Tolerances& tol = default_tolerances());

// ------------------------------------------------------- toy groups

enum class ToyKind { Rn, Torus };

/// R^n or T^n with a constant V-valued 2-cocycle sigma and the trivial module.
struct ToyGroup {
  ToyKind kind = ToyKind::Rn;
  int n = 2;
  std::vector<Eigen::MatrixXd> sigma;  // per V component, antisymmetric n x n

  int vdim() const { return static_cast<int>(sigma.size()); }
  static ToyGroup symplectic(ToyKind kind);  // n = 2, sigma(e1, e2) = 1
};

struct Obstructions {
  Eigen::MatrixXd period_generators;        // V x 0: pi_2 vanishes for these groups
  std::vector<std::string> loops;           // pi_1 generators
  std::vector<Eigen::MatrixXd> flux;        // per loop: I_gamma as a V x n matrix
  double ce_residual = 0.0;                 // sigma is closed; exactly 0 for abelian groups
  std::string verdict;                      // "integrates", "does not integrate" or "trivial extension"
};

/// per_sigma and I_gamma(X) = -int_gamma i_{X^r} sigma^eq by quadrature over each generator loop.
Obstructions obstructions(const ToyGroup& toy, const Tolerances& tol = default_tolerances());

/// Group law on R^2 x V obtained from the pullback construction with omega = -sigma^eq.
struct HeisenbergLaw {
  ToyGroup toy;
  BundleChart chart;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> cocycle;

  /// (g, a)(h, a') = (g + h, a + a' + c(g, h)) with a point stored as (g, a).
  Eigen::VectorXd multiply(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const;
  Eigen::VectorXd inverse(const Eigen::VectorXd& p) const;
};
HeisenbergLaw heisenberg_law(const ToyGroup& toy);

/// Independent multiplication: the bundle automorphisms over the translations
/// are built from parallel transport along straight segments and composed.
Eigen::VectorXd transport_multiply(const HeisenbergLaw& law, const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                                   int steps = 64);

/// sup |d p^eq + q^* sigma^eq| at the given points of R^2 x V, with p^eq the
/// left invariant form with identity value the projection onto V.
double peq_check(const HeisenbergLaw& law, const std::vector<Eigen::VectorXd>& points, double h = 1e-2);

}  // namespace abext
