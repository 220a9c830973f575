#include "abext/cocycles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abext {

std::string to_string(Convention c) { return c == Convention::Negative ? "negative" : "standard"; }

Convention convention_from_string(const std::string& s) {
  if (s == "negative") return Convention::Negative;
  if (s == "standard") return Convention::Standard;
  throw std::invalid_argument("unknown bracket convention '" + s + "'");
}

namespace {
double sign_of(Convention c) { return c == Convention::Negative ? -1.0 : 1.0; }

TrigPoly2 fn(const VectorField& x, int i = 0) { return x.comp(i); }

VForm s1_function(const TrigPoly2& f) { return VForm::scalar_function(Base::S1, f); }
}  // namespace

VectorField LieAlgebraModel::bracket(const VectorField& x, const VectorField& y) const {
  if (kind == AlgebraKind::AbelianR2) return VectorField::zero(Base::T2);
  return sign_of(convention) * bracket_std(x, y);
}

VectorField LieAlgebraModel::random_element(Rng& rng, int degree, double amp) const {
  if (kind == AlgebraKind::AbelianR2) return VectorField::constant(Base::T2, Point(uniform(rng, -amp, amp), uniform(rng, -amp, amp)));
  return random_field(rng, base(), degree, amp);
}

// ------------------------------------------------------------------ modules

ModuleModel ModuleModel::density(double lambda) { return {ModuleKind::Density, Base::S1, lambda, 0, 1}; }
ModuleModel ModuleModel::forms(int k, Base base) { return {ModuleKind::Forms, base, 0.0, k, 1}; }
ModuleModel ModuleModel::trivial(Base base, int n) { return {ModuleKind::TrivialRn, base, 0.0, 0, n}; }
ModuleModel ModuleModel::forms_modulo_exact(Base base) { return {ModuleKind::FormsModuloExact, base, 0.0, 1, 1}; }

VForm ModuleModel::act(const VectorField& x, const VForm& f, Convention c) const {
  const double s = sign_of(c);
  switch (kind) {
    case ModuleKind::TrivialRn:
      return VForm(f.base(), f.degree(), f.vdim());
    case ModuleKind::Density: {
      VForm r(f.base(), 0, f.vdim());
      for (int v = 0; v < f.vdim(); ++v) r.comp(0, v) = s * (fn(x) * f.comp(0, v).dx() + lambda * (fn(x).dx() * f.comp(0, v)));
      return r;
    }
    case ModuleKind::Forms:
      return s * lie_derivative(x, f);
    case ModuleKind::FormsModuloExact:
      return reduce(s * lie_derivative(x, f));
  }
  throw std::logic_error("unreachable");
}

VForm ModuleModel::reduce(const VForm& f) const {
  if (kind == ModuleKind::FormsModuloExact) return quotient_reduce(f);
  return f;
}

std::string ModuleModel::describe() const {
  switch (kind) {
    case ModuleKind::Density: return "F_" + std::to_string(static_cast<int>(lambda));
    case ModuleKind::Forms: return "Omega^" + std::to_string(form_degree) + "(" + to_string(base) + ")";
    case ModuleKind::TrivialRn: return "R^" + std::to_string(vdim) + " (trivial)";
    case ModuleKind::FormsModuloExact: return "Omega^1/dOmega^0(" + to_string(base) + ")";
  }
  return "?";
}

TrigPoly density_action(double lambda, const TrigPoly& x, const TrigPoly& f) {
  return x * f.derivative() + lambda * (x.derivative() * f);
}

TrigPoly density_action(double lambda, const Diffeo& phi, const TrigPoly& f, int degree) {
  if (phi.base() != Base::S1) throw std::invalid_argument("density_action: circle diffeomorphism required");
  return project_fn(
      [&](double x) {
        Eigen::Matrix2d j;
        const Point y = phi.value_and_jacobian(Point(x, 0.0), j);
        if (j(0, 0) <= 0.0) throw std::invalid_argument("density_action: phi is not an orientation preserving diffeomorphism");
        return std::pow(j(0, 0), lambda) * f(y.x());
      },
      degree, 4 * degree + 4);
}

VForm quotient_reduce(const VForm& beta) {
  if (beta.base() != Base::T2 || beta.degree() != 1) throw std::invalid_argument("quotient_reduce: 1-form on T2 required");
  VForm r = beta;
  for (int v = 0; v < beta.vdim(); ++v) {
    const TrigPoly2 div = beta.comp(0, v).dx() + beta.comp(1, v).dy();
    const TrigPoly2 phi = div.inverse_laplacian(1e300);
    r.comp(0, v) -= phi.dx();
    r.comp(1, v) -= phi.dy();
  }
  return r;
}

std::vector<std::vector<TrigPoly2>> jacobian_table(const VectorField& x) {
  std::vector<std::vector<TrigPoly2>> j(2, std::vector<TrigPoly2>(2));
  for (int i = 0; i < 2; ++i) {
    j[i][0] = x.comp(i).dx();
    j[i][1] = x.comp(i).dy();
  }
  return j;
}

// ----------------------------------------------------------------- registry

std::vector<std::string> builtin_cocycle_names() {
  return {"sigma0", "sigma1", "sigma2", "barsigma0", "barsigma1", "barsigma2", "divergence", "gelfand-t2", "heisenberg"};
}

Cocycle2 builtin_cocycle(const std::string& name) {
  Cocycle2 s;
  s.name = name;
  auto derivs = [](const VectorField& x, int k) { TrigPoly2 f = fn(x); for (int i = 0; i < k; ++i) f = f.dx(); return f; };
  auto circle_pair = [&](int a, int b) {
    return [=](const VectorField& x, const VectorField& y) {
      return s1_function(derivs(x, a) * derivs(y, b) - derivs(x, b) * derivs(y, a));
    };
  };
  if (name == "sigma0") {
    s.module = ModuleModel::trivial(Base::S1, 1);
    auto inner = circle_pair(1, 2);
    s.eval = [inner](const VectorField& x, const VectorField& y) {
      return s1_function(TrigPoly2::constant(inner(x, y).comp(0).mean()));
    };
  } else if (name == "sigma1") {
    s.module = ModuleModel::density(1);
    s.eval = circle_pair(1, 2);
  } else if (name == "sigma2") {
    s.module = ModuleModel::density(2);
    s.eval = circle_pair(1, 3);
  } else if (name == "barsigma0") {
    s.module = ModuleModel::density(0);
    s.eval = circle_pair(0, 1);
  } else if (name == "barsigma1") {
    s.module = ModuleModel::density(1);
    s.eval = circle_pair(0, 2);
  } else if (name == "barsigma2") {
    s.module = ModuleModel::density(2);
    s.eval = circle_pair(0, 3);
  } else if (name == "divergence") {
    s.algebra = AlgebraKind::VectorFieldsT2;
    s.module = ModuleModel::forms_modulo_exact(Base::T2);
    s.eval = [](const VectorField& x, const VectorField& y) {
      const TrigPoly2 dx = x.divergence(), dy = y.divergence();
      return VForm::one_form(Base::T2, {dx * dy.dx(), dx * dy.dy()});
    };
  } else if (name == "gelfand-t2") {
    s.algebra = AlgebraKind::VectorFieldsT2;
    s.module = ModuleModel::forms(2, Base::T2);
    s.eval = [](const VectorField& x, const VectorField& y) {
      const auto jx = jacobian_table(x), jy = jacobian_table(y);
      TrigPoly2 h(0, 0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const TrigPoly2& a = jx[i][j];
          const TrigPoly2& b = jy[j][i];
          h += a.dx() * b.dy() - a.dy() * b.dx();
        }
      return VForm::area_form(h);
    };
  } else if (name == "heisenberg") {
    s.algebra = AlgebraKind::AbelianR2;
    s.module = ModuleModel::trivial(Base::T2, 1);
    s.eval = [](const VectorField& x, const VectorField& y) {
      const double v = x.comp(0).mean() * y.comp(1).mean() - x.comp(1).mean() * y.comp(0).mean();
      return VForm::scalar_function(Base::T2, TrigPoly2::constant(v));
    };
  } else {
    throw std::invalid_argument("unknown cocycle '" + name + "'");
  }
  return s;
}

Cocycle2 perturbed_cocycle(const Cocycle2& s, double eps) {
  if (s.algebra != AlgebraKind::VectorFieldsS1) throw std::invalid_argument("perturbed_cocycle: circle cocycles only");
  Cocycle2 p = s;
  p.name = s.name + "+perturbation";
  auto base = s.eval;
  p.eval = [base, eps](const VectorField& x, const VectorField& y) {
    VForm v = base(x, y);
    v.comp(0) += eps * (fn(x) * fn(y).dx());
    return v;
  };
  return p;
}

// --------------------------------------------------------------- verifiers

VForm ce_differential(const Cocycle2& s, const VectorField& x, const VectorField& y, const VectorField& z,
                      Convention c, double* scale) {
  const LieAlgebraModel g{s.algebra, c};
  const ModuleModel& m = s.module;
  const VForm terms[6] = {
      m.act(x, s.eval(y, z), c),   -m.act(y, s.eval(x, z), c),  m.act(z, s.eval(x, y), c),
      -s.eval(g.bracket(x, y), z), s.eval(g.bracket(x, z), y),  -s.eval(g.bracket(y, z), x),
  };
  VForm r = terms[0];
  double sc = terms[0].sup_norm();
  for (int i = 1; i < 6; ++i) {
    r += terms[i];
    sc = std::max(sc, terms[i].sup_norm());
  }
  if (scale) *scale = sc;
  return m.reduce(r);
}

CE2Report verify_ce2(const Cocycle2& s, int trials, int degree, Rng& rng, Convention c, double amp) {
  if (!s.eval) throw std::invalid_argument("verify_ce2: cocycle has no evaluator");
  const LieAlgebraModel g{s.algebra, c};
  CE2Report rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const VectorField x = g.random_element(rng, degree, amp);
    const VectorField y = g.random_element(rng, degree, amp);
    const VectorField z = g.random_element(rng, degree, amp);
    double scale = 0.0;
    const double abs_res = ce_differential(s, x, y, z, c, &scale).sup_norm();
    const double rel = abs_res / std::max(1.0, scale);
    rep.residuals.push_back(rel);
    rep.max_residual = std::max(rep.max_residual, rel);
    rep.max_abs_residual = std::max(rep.max_abs_residual, abs_res);
    const VForm sxy = s.eval(x, y);
    rep.max_antisymmetry = std::max(rep.max_antisymmetry, s.module.reduce(sxy + s.eval(y, x)).sup_norm() /
                                                              std::max(1.0, s.module.reduce(sxy).sup_norm()));
  }
  return rep;
}

DescentReport verify_descent(const Cocycle2& s, const std::vector<VectorField>& h_span, int trials, int degree,
                             Rng& rng, Convention c) {
  const LieAlgebraModel g{s.algebra, c};
  DescentReport r;
  for (int t = 0; t < trials; ++t) {
    const VectorField x = g.random_element(rng, degree, 1.0);
    const VectorField y = g.random_element(rng, degree, 1.0);
    for (const auto& z : h_span) {
      r.kernel_residual = std::max(r.kernel_residual, s(z, x).sup_norm());
      const VForm lhs = s.eval(g.bracket(z, x), y) + s.eval(x, g.bracket(z, y));
      const VForm rhs = s.module.act(z, s.eval(x, y), c);
      const double scale = std::max({1.0, lhs.sup_norm(), rhs.sup_norm()});
      r.equivariance_residual = std::max(r.equivariance_residual, s.module.reduce(lhs - rhs).sup_norm() / scale);
    }
  }
  return r;
}

}  // namespace abext
