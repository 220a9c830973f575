#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abext/bundle.hpp"
#include "abext/path.hpp"

namespace abext {

/// Cohomology class in H^1(., V), stored through its evaluations on a fixed
/// loop basis. Each loop carries the lattice its value is taken modulo.
struct CohClass1 {
  std::vector<std::string> loops;       // "x", "y", then "fiber<k>" for Gamma generators
  Eigen::MatrixXd evaluations;          // vdim x loops
  std::vector<LatticeGroup> lattices;   // one per loop (rank 0 for plain V values)
  double closedness = 0.0;              // sup |d representative| when a representative exists

  int vdim() const { return static_cast<int>(evaluations.rows()); }
  Eigen::MatrixXd reduced() const;
  /// Largest per-loop distance between the classes in the quotient.
  double distance(const CohClass1& o) const;
  double norm() const;  // distance to the zero class
};

/// P-chart loop basis: base loops through the origin at fiber 0, then one
/// fiber loop per lattice generator over the origin.
std::vector<std::string> chart_loop_names(const BundleChart& chart);

/// True when L_eta omega = gamma omega and gamma kills Gamma, within tau_quad.
double equivariance_residual(const BundleChart& chart, const VectorField& eta, const Eigen::MatrixXd& gamma);

/// flux^eq(eta, gamma) = [q^* i_eta omega - gamma theta] in H^1(P, V).
CohClass1 flux_eq_infinitesimal(const VectorField& eta, const Eigen::MatrixXd& gamma, const BundleChart& chart,
                                const Tolerances& tol = default_tolerances());

struct FluxOptions {
  QuadratureOptions loop_quadrature{4};
  int order = 8;  // time quadrature order
};

/// Flux^eq of a path (phi_t, u_t): int_0^1 u_t (q^* i_{delta^l phi_t} omega - delta^l u_t theta) dt mod H^1(P, Gamma).
CohClass1 flux_eq_path(const DiffeoPath& phi, const GLPath& u, const BundleChart& chart, FluxOptions opt = {});

/// Running values of the Flux^eq integral at every node (rows t_k, unreduced).
std::vector<std::pair<double, Eigen::MatrixXd>> flux_eq_trace(const DiffeoPath& phi, const GLPath& u,
                                                              const BundleChart& chart, FluxOptions opt = {});

/// Closed form q^*[phi^* alpha - u alpha] for a trivial chart (exact omega = d alpha).
CohClass1 flux_eq_closed_form(const Diffeo& phi, const Eigen::MatrixXd& u, const BundleChart& chart,
                              QuadratureOptions q = {64});

struct InvariantFlux {
  CohClass1 right;   // from delta^r phi_t
  CohClass1 left;    // from delta^l phi_t
  double agreement = 0.0;
  double invariance = 0.0;  // sup |phi_t^* omega - omega| over nodes and samples
};

/// Flux(phi) = int_0^1 [i_{delta^r phi_t} omega] dt mod H^1(M, Gamma), also via delta^l.
InvariantFlux flux_invariant_path(const DiffeoPath& phi, const VForm& omega, FluxOptions opt = {},
                                  const Tolerances& tol = default_tolerances());

struct DegreeBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EquiHamiltonian {
  bool exact = false;
  std::optional<ChartFunction> h;  // dh = q^* i_eta omega - gamma theta, h(x0, 0) = 0
  CohClass1 obstruction;           // loop evaluations of the flux class
  double residual = 0.0;
};

/// Solves dh = q^* i_eta omega - gamma theta, or reports NotExact with the obstructing evaluations.
/// Throws DegreeBudgetExceeded when the data needs more than `budget` Fourier modes.
EquiHamiltonian equi_hamiltonian_solve(const VectorField& eta, const Eigen::MatrixXd& gamma, const BundleChart& chart,
                                       const Point& x0 = Point::Zero(), int budget = 16,
                                       const Tolerances& tol = default_tolerances());

}  // namespace abext
