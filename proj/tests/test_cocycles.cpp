#include <doctest.h>

#include <cmath>
#include <memory>

#include "abext/cocycles.hpp"
#include "abext/path.hpp"

using namespace abext;
using Eigen::Vector2d;

namespace {
constexpr double kPi = kTwoPi / 2;

VectorField circle_field(const TrigPoly& p) { return VectorField::on_circle(p); }

double at(const VForm& f, double x, double y = 0.0, int c = 0) { return f.comp(c)(x, y); }
}  // namespace

TEST_CASE("circle cocycles on basis fields") {
  const VectorField s = circle_field(TrigPoly::sin_mode(1));
  const VectorField c = circle_field(TrigPoly::cos_mode(1));

  const Cocycle2 s0 = builtin_cocycle("sigma0");
  CHECK(at(s0(s, c), 0.3) == doctest::Approx(-8 * kPi * kPi * kPi).epsilon(1e-13));
  CHECK(at(s0(c, s), 0.7) == doctest::Approx(8 * kPi * kPi * kPi).epsilon(1e-13));

  const Cocycle2 b0 = builtin_cocycle("barsigma0");
  for (double x : {0.0, 0.13, 0.5, 0.91}) CHECK(at(b0(s, c), x) == doctest::Approx(-2 * kPi).epsilon(1e-13));

  // sigma1(sin, cos) = X'Y'' - X''Y' = -8 pi^3 pointwise as well
  const Cocycle2 s1 = builtin_cocycle("sigma1");
  for (double x : {0.1, 0.4}) CHECK(at(s1(s, c), x) == doctest::Approx(-8 * kPi * kPi * kPi).epsilon(1e-13));

  // constant fields are killed by the derivative-only cocycles
  const VectorField one = circle_field(TrigPoly::constant(1.0));
  for (const char* n : {"sigma0", "sigma1", "sigma2"}) CHECK(builtin_cocycle(n)(one, s).sup_norm() < 1e-14);
  CHECK(b0(one, s).sup_norm() > 1.0);
}

TEST_CASE("density action example") {
  // lambda = 2, X = sin, f = cos: X f' + 2 X' f = 2 pi (2 cos^2 - sin^2)
  const TrigPoly r = density_action(2.0, TrigPoly::sin_mode(1), TrigPoly::cos_mode(1));
  for (double x : {0.0, 0.2, 0.55, 0.8}) {
    const double sn = std::sin(kTwoPi * x), cs = std::cos(kTwoPi * x);
    CHECK(r(x) == doctest::Approx(kTwoPi * (2 * cs * cs - sn * sn)).epsilon(1e-13));
  }
  const ModuleModel m = ModuleModel::density(2.0);
  const VForm f = VForm::scalar_function(Base::S1, TrigPoly2::from_x(TrigPoly::cos_mode(1)));
  const VectorField x = circle_field(TrigPoly::sin_mode(1));
  CHECK(at(m.act(x, f, Convention::Standard), 0.2) == doctest::Approx(r(0.2)).epsilon(1e-13));
  CHECK(at(m.act(x, f, Convention::Negative), 0.2) == doctest::Approx(-r(0.2)).epsilon(1e-13));
}

TEST_CASE("every builtin cocycle is closed and antisymmetric under both conventions") {
  for (const auto& name : builtin_cocycle_names()) {
    for (Convention c : {Convention::Negative, Convention::Standard}) {
      Rng rng(2024);
      const CE2Report r = verify_ce2(builtin_cocycle(name), 100, 4, rng, c);
      INFO(name << " " << to_string(c));
      CHECK(r.trials == 100);
      CHECK(r.max_residual < 1e-8);
      CHECK(r.max_antisymmetry < 1e-9);
    }
  }
  CHECK_THROWS_AS(builtin_cocycle("nope"), std::invalid_argument);
}

TEST_CASE("negative bracket with the standard action is not a cocycle pairing") {
  Rng rng(5);
  const Cocycle2 s = builtin_cocycle("sigma1");
  const LieAlgebraModel g{AlgebraKind::VectorFieldsS1, Convention::Negative};
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const VectorField x = g.random_element(rng, 4, 1.0), y = g.random_element(rng, 4, 1.0),
                      z = g.random_element(rng, 4, 1.0);
    const auto act = [&](const VectorField& a, const VForm& f) { return s.module.act(a, f, Convention::Standard); };
    const VForm r = act(x, s(y, z)) - act(y, s(x, z)) + act(z, s(x, y)) - s(g.bracket(x, y), z) +
                    s(g.bracket(x, z), y) - s(g.bracket(y, z), x);
    const double scale = std::max({1.0, s(g.bracket(x, y), z).sup_norm(), act(x, s(y, z)).sup_norm()});
    worst = std::max(worst, r.sup_norm() / scale);
  }
  CHECK(worst > 1e-2);
}

TEST_CASE("perturbed cocycle is detected") {
  Rng rng(99);
  for (double eps : {1e-3, 1e-1}) {
    const CE2Report r = verify_ce2(perturbed_cocycle(builtin_cocycle("sigma1"), eps), 20, 4, rng);
    CHECK(r.max_residual > 1e-6);
  }
  Rng rng2(99);
  CHECK(verify_ce2(perturbed_cocycle(builtin_cocycle("sigma1"), 0.0), 20, 4, rng2).max_residual < 1e-8);
}

TEST_CASE("descent along translations") {
  Rng rng(17);
  const std::vector<VectorField> circle_span = {circle_field(TrigPoly::constant(1.0))};
  for (const char* n : {"sigma0", "sigma1", "sigma2"}) {
    const DescentReport d = verify_descent(builtin_cocycle(n), circle_span, 10, 4, rng);
    CHECK(d.kernel_residual < 1e-12);
    CHECK(d.equivariance_residual < 1e-10);
  }
  CHECK(verify_descent(builtin_cocycle("barsigma0"), circle_span, 10, 4, rng).kernel_residual > 1e-3);

  const std::vector<VectorField> torus_span = {VectorField::constant(Base::T2, Vector2d(1, 0)),
                                               VectorField::constant(Base::T2, Vector2d(0, 1))};
  const DescentReport d = verify_descent(builtin_cocycle("divergence"), torus_span, 5, 3, rng);
  CHECK(d.kernel_residual < 1e-12);
  CHECK(d.equivariance_residual < 1e-10);
}

TEST_CASE("quotient reduction removes exact parts only") {
  Rng rng(3);
  const TrigPoly2 phi = random_trigpoly2(rng, 3, 3, 1.0);
  const VForm exact = exterior_derivative(VForm::scalar_function(Base::T2, phi));
  CHECK(quotient_reduce(exact).sup_norm() < 1e-12);

  // harmonic plus coexact parts survive unchanged
  const TrigPoly2 psi = random_trigpoly2(rng, 3, 3, 1.0);
  const VForm coexact = VForm::one_form(Base::T2, {-1.0 * psi.dy() + TrigPoly2::constant(0.5), psi.dx() + TrigPoly2::constant(-2.0)});
  CHECK((quotient_reduce(coexact) - coexact).sup_norm() < 1e-12);
  CHECK((quotient_reduce(coexact + exact) - coexact).sup_norm() < 1e-12);

  // reduction is idempotent and preserves periods
  const VForm b = random_form(rng, Base::T2, 1, 1, 3, 1.0);
  const VForm r = quotient_reduce(b);
  CHECK((quotient_reduce(r) - r).sup_norm() < 1e-12);
  CHECK(r.comp(0).mean() == doctest::Approx(b.comp(0).mean()).epsilon(1e-13));
  CHECK(r.comp(1).mean() == doctest::Approx(b.comp(1).mean()).epsilon(1e-13));
}

TEST_CASE("density group action differentiates to the algebra action") {
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const TrigPoly xp = random_trigpoly(rng, 2, 0.3), f = random_trigpoly(rng, 3, 1.0);
    const auto field = std::make_shared<const TimeField>(TimeField::autonomous(circle_field(xp)));
    for (double lambda : {0.0, 1.0, 2.0, 0.5}) {
      const TrigPoly expected = density_action(lambda, xp, f);
      for (double x : {0.1, 0.37, 0.8}) {
        const double d = central_derivative(
            [&](double t) {
              const Diffeo phi = Diffeo::flow(field, 0.0, t, 64);
              Eigen::Matrix2d j;
              const Point y = phi.value_and_jacobian(Point(x, 0.0), j);
              return std::pow(j(0, 0), lambda) * f(y.x());
            },
            0.0, 2e-3);
        INFO(lambda << " " << d - expected(x));
        CHECK(d == doctest::Approx(expected(x)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("density group action composes") {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const Diffeo phi = Diffeo::from_displacement(random_trigpoly(rng, 2, 0.05));
    const Diffeo psi = Diffeo::from_displacement(random_trigpoly(rng, 3, 0.03));
    const TrigPoly f = random_trigpoly(rng, 3, 1.0);
    for (double lambda : {0.0, 1.0, 2.0}) {
      const TrigPoly once = density_action(lambda, phi * psi, f, 48);
      const TrigPoly twice = density_action(lambda, psi, density_action(lambda, phi, f, 48), 48);
      for (double x : {0.05, 0.5, 0.77}) CHECK(once(x) == doctest::Approx(twice(x)).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(density_action(1.0, Diffeo::translation(Base::T2, Point(0.1, 0.2)), TrigPoly::constant(1.0), 4),
                  std::invalid_argument);
}

TEST_CASE("Gelfand cocycle matches a finite-difference evaluation") {
  Rng rng(13);
  for (int trial = 0; trial < 4; ++trial) {
    const VectorField x = random_field(rng, Base::T2, 2, 0.5), y = random_field(rng, Base::T2, 2, 0.5);
    const VForm g = builtin_cocycle("gelfand-t2")(x, y);
    const double h = 1e-3;
    const auto jac = [&](const VectorField& v, int i, int j, Point p) {
      return central_derivative([&](double s) { Point q = p; q[j] = s; return v(q)[i]; }, p[j], h);
    };
    const auto djac = [&](const VectorField& v, int i, int j, int k, const Point& p) {
      return central_derivative([&](double s) { Point q = p; q[k] = s; return jac(v, i, j, q); }, p[k], h);
    };
    for (const Point p : {Point(0.1, 0.2), Point(0.6, 0.35)}) {
      double expected = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          expected += djac(x, i, j, 0, p) * djac(y, j, i, 1, p) - djac(x, i, j, 1, p) * djac(y, j, i, 0, p);
      CHECK(g.comp(0)(p.x(), p.y()) == doctest::Approx(expected).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("Heisenberg cocycle on constant fields") {
  const Cocycle2 s = builtin_cocycle("heisenberg");
  const VectorField e1 = VectorField::constant(Base::T2, Vector2d(1, 0));
  const VectorField e2 = VectorField::constant(Base::T2, Vector2d(0, 1));
  CHECK(at(s(e1, e2), 0.3, 0.4) == doctest::Approx(1.0));
  CHECK(at(s(e2, e1), 0.3, 0.4) == doctest::Approx(-1.0));
  Rng rng(1);
  CHECK(verify_ce2(s, 20, 0, rng).max_abs_residual == 0.0);
}

TEST_CASE("brackets satisfy Jacobi and module actions are homomorphisms") {
  Rng rng(21);
  for (Convention c : {Convention::Negative, Convention::Standard}) {
    for (AlgebraKind k : {AlgebraKind::VectorFieldsS1, AlgebraKind::VectorFieldsT2}) {
      const LieAlgebraModel g{k, c};
      const VectorField x = g.random_element(rng, 3, 1.0), y = g.random_element(rng, 3, 1.0),
                        z = g.random_element(rng, 3, 1.0);
      const VectorField jac = g.bracket(x, g.bracket(y, z)) + g.bracket(y, g.bracket(z, x)) + g.bracket(z, g.bracket(x, y));
      CHECK(jac.sup_norm() < 1e-8);
      CHECK((g.bracket(x, y) + g.bracket(y, x)).sup_norm() == 0.0);
    }
    const LieAlgebraModel g{AlgebraKind::VectorFieldsS1, c};
    const VectorField x = g.random_element(rng, 3, 1.0), y = g.random_element(rng, 3, 1.0);
    const VForm f = VForm::scalar_function(Base::S1, TrigPoly2::from_x(random_trigpoly(rng, 3, 1.0)));
    for (double lambda : {0.0, 1.0, 2.0}) {
      const ModuleModel m = ModuleModel::density(lambda);
      const VForm r = m.act(g.bracket(x, y), f, c) - m.act(x, m.act(y, f, c), c) + m.act(y, m.act(x, f, c), c);
      CHECK(r.sup_norm() < 1e-8);
    }
    const LieAlgebraModel t{AlgebraKind::VectorFieldsT2, c};
    const VectorField u = t.random_element(rng, 2, 1.0), v = t.random_element(rng, 2, 1.0);
    const VForm w = random_form(rng, Base::T2, 1, 1, 2, 1.0);
    const ModuleModel m = ModuleModel::forms(1, Base::T2);
    CHECK((m.act(t.bracket(u, v), w, c) - m.act(u, m.act(v, w, c), c) + m.act(v, m.act(u, w, c), c)).sup_norm() < 1e-8);
  }
}

TEST_CASE("divergence cocycle descends along divergence-free fields") {
  Rng rng(77);
  std::vector<VectorField> span;
  for (int i = 0; i < 3; ++i) {
    const TrigPoly2 psi = random_trigpoly2(rng, 2, 2, 1.0);
    span.push_back(VectorField::on_torus(-1.0 * psi.dy(), psi.dx()));
  }
  for (Convention c : {Convention::Negative, Convention::Standard}) {
    const DescentReport d = verify_descent(builtin_cocycle("divergence"), span, 4, 2, rng, c);
    CHECK(d.kernel_residual < 1e-12);
    CHECK(d.equivariance_residual < 1e-10);
  }
}

TEST_CASE("Gelfand cocycle vanishes on fields with constant Jacobian") {
  const Cocycle2 s = builtin_cocycle("gelfand-t2");
  Rng rng(4);
  const VectorField x = VectorField::constant(Base::T2, Vector2d(0.3, -1.2));
  const VectorField y = random_field(rng, Base::T2, 3, 1.0);
  CHECK(s(x, y).sup_norm() == 0.0);
  CHECK(s(y, y).sup_norm() < 1e-12);
}
