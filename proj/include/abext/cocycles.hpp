#pragma once

#include <functional>
#include <string>
#include <vector>

#include "abext/diffeo.hpp"
#include "abext/random.hpp"

namespace abext {

/// Bracket convention. Negative uses [X,Y] = -[X,Y]_std on vector
/// fields together with the module action X.f = -(standard action), which is
/// the pairing that keeps the action a homomorphism.
enum class Convention { Negative, Standard };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

enum class AlgebraKind { VectorFieldsS1, VectorFieldsT2, AbelianR2 };

struct LieAlgebraModel {
  AlgebraKind kind = AlgebraKind::VectorFieldsS1;
  Convention convention = Convention::Negative;

  Base base() const { return kind == AlgebraKind::VectorFieldsS1 ? Base::S1 : Base::T2; }
  VectorField bracket(const VectorField& x, const VectorField& y) const;
  /// Random element: trig-poly field of the given degree, or a constant field for AbelianR2.
  VectorField random_element(Rng& rng, int degree, double amp) const;
};

enum class ModuleKind { Density, Forms, TrivialRn, FormsModuloExact };

struct ModuleModel {
  ModuleKind kind = ModuleKind::TrivialRn;
  Base base = Base::S1;
  double lambda = 0.0;   // Density
  int form_degree = 0;   // Forms, FormsModuloExact (always 1)
  int vdim = 1;

  static ModuleModel density(double lambda);
  static ModuleModel forms(int k, Base base);
  static ModuleModel trivial(Base base, int n);
  static ModuleModel forms_modulo_exact(Base base);

  /// Algebra action under the given convention.
  VForm act(const VectorField& x, const VForm& f, Convention c) const;
  /// Canonical representative (quotient modules) or the identity.
  VForm reduce(const VForm& f) const;
  std::string describe() const;
};

/// X f' + lambda X' f, the standard-convention density action.
TrigPoly density_action(double lambda, const TrigPoly& x, const TrigPoly& f);
/// (phi')^lambda (f o phi), projected to `degree`.
TrigPoly density_action(double lambda, const Diffeo& phi, const TrigPoly& f, int degree);

/// Removes the exact part of a 1-form on T^2: beta - d phi with lap(phi) = div(beta).
VForm quotient_reduce(const VForm& beta);

struct Cocycle2 {
  std::string name;
  AlgebraKind algebra = AlgebraKind::VectorFieldsS1;
  ModuleModel module;
  std::function<VForm(const VectorField&, const VectorField&)> eval;

  VForm operator()(const VectorField& x, const VectorField& y) const { return module.reduce(eval(x, y)); }
};

std::vector<std::string> builtin_cocycle_names();
Cocycle2 builtin_cocycle(const std::string& name);
/// sigma + eps X Y' on a circle cocycle, used as a negative control.
Cocycle2 perturbed_cocycle(const Cocycle2& s, double eps);

struct CE2Report {
  int trials = 0;
  double max_residual = 0.0;      // relative to the largest individual CE term
  double max_abs_residual = 0.0;
  double max_antisymmetry = 0.0;  // |sigma(X,Y) + sigma(Y,X)| / max(1, |sigma(X,Y)|)
  std::vector<double> residuals;  // one relative residual per trial
};

/// Chevalley-Eilenberg differential evaluated on one triple; returns the
/// reduced residual form and sets `scale` to the largest term's sup norm.
VForm ce_differential(const Cocycle2& s, const VectorField& x, const VectorField& y, const VectorField& z,
                      Convention c, double* scale = nullptr);

CE2Report verify_ce2(const Cocycle2& s, int trials, int degree, Rng& rng, Convention c = Convention::Negative,
                     double amp = 1.0);

struct DescentReport {
  double kernel_residual = 0.0;       // max |sigma(Z, X)|
  double equivariance_residual = 0.0; // max |sigma([Z,X],Y) + sigma(X,[Z,Y]) - Z.sigma(X,Y)|
};

DescentReport verify_descent(const Cocycle2& s, const std::vector<VectorField>& h_span, int trials, int degree,
                             Rng& rng, Convention c = Convention::Negative);

/// Gelfand cocycle summand table: J(i,j) = d_j X^i as trig polys.
std::vector<std::vector<TrigPoly2>> jacobian_table(const VectorField& x);

}  // namespace abext
