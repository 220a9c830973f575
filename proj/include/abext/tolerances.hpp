#pragma once

namespace abext {

/// Numerical tolerances shared by every module.
///
/// `coeff` bounds exact trigonometric-polynomial arithmetic, `quad` bounds
/// quadrature-based evaluations and `ode` bounds anything that integrates a
/// flow or a transport equation.
struct Tolerances {
  double coeff = 1e-12;
  double quad = 1e-8;
  double ode = 1e-7;
  double inv = 1e-10;   // |det u| floor for GL(V) elements
  double mono = 1e-6;   // floor for phi' of a circle diffeomorphism lift
  double disc = 1e-9;   // shortest admissible nonzero lattice vector

  Tolerances scaled(double s) const {
    Tolerances t = *this;
    t.coeff *= s;
    t.quad *= s;
    t.ode *= s;
    return t;
  }
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace abext
