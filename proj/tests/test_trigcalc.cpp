#include <doctest.h>

#include <cmath>

#include "abext/io.hpp"
#include "abext/random.hpp"

using namespace abext;
using Eigen::Vector2d;

namespace {
constexpr double kPi = kTwoPi / 2;

std::vector<double> grid_of(int m, double (*f)(double)) {
  std::vector<double> s(m);
  for (int j = 0; j < m; ++j) s[j] = f(double(j) / m);
  return s;
}
}  // namespace

TEST_CASE("project recovers basis functions and products") {
  auto s = grid_of(9, [](double x) { return std::sin(kTwoPi * x); });
  TrigPoly p = project(s, 4);
  CHECK(p.b(1) == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 0; i < 9; ++i)
    if (i != 2) CHECK(std::abs(p.coeffs()[i]) < 1e-14);

  TrigPoly c = project(std::vector<double>(5, 3.0), 2);
  CHECK(c.a0() == doctest::Approx(3.0));
  CHECK(c.max_abs_coeff() == doctest::Approx(3.0));

  // sin cos = sin(4 pi x) / 2
  auto sc = grid_of(5, [](double x) { return std::sin(kTwoPi * x) * std::cos(kTwoPi * x); });
  TrigPoly q = project(sc, 2);
  CHECK(q.b(2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(q.a(1)) + std::abs(q.b(1)) + std::abs(q.a(2)) + std::abs(q.a0()) < 1e-14);

  CHECK_THROWS_AS(project(std::vector<double>(8, 0.0), 4), std::invalid_argument);
}

TEST_CASE("project after sample is the identity") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 12;
    TrigPoly p = random_trigpoly(rng, n, 1.0);
    for (int m : {2 * n + 1, 2 * n + 2, 4 * n + 3}) {
      TrigPoly q = project(p.sample(m), n);
      CHECK((q - p).max_abs_coeff() < 1e-13);
    }
    TrigPoly2 f = random_trigpoly2(rng, n % 5, (n + 2) % 4, 1.0);
    TrigPoly2 g = project2_fn([&](double x, double y) { return f(x, y); }, f.degree_x(), f.degree_y());
    CHECK((g - f).max_abs_coeff() < 1e-13);
  }
}

TEST_CASE("pointwise products match sampled values") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    TrigPoly a = random_trigpoly(rng, 3, 1.0), b = random_trigpoly(rng, 5, 1.0);
    TrigPoly ab = a * b;
    CHECK(ab.degree() == 8);
    for (double x : {0.0, 0.137, 0.5, 0.91}) CHECK(ab(x) == doctest::Approx(a(x) * b(x)).epsilon(1e-13));
    TrigPoly2 f = random_trigpoly2(rng, 2, 3, 1.0), g = random_trigpoly2(rng, 3, 1, 1.0);
    TrigPoly2 fg = f * g;
    for (double x : {0.1, 0.77})
      for (double y : {0.3, 0.05}) CHECK(fg(x, y) == doctest::Approx(f(x, y) * g(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("derivatives against symbolic oracles") {
  // d sin(2 pi x) = 2 pi cos(2 pi x) dx
  VForm f = VForm::scalar_function(Base::S1, TrigPoly2::from_x(TrigPoly::sin_mode(1)));
  VForm df = exterior_derivative(f);
  REQUIRE(df.degree() == 1);
  for (double x : {0.0, 0.2, 0.71}) CHECK(df(Vector2d(x, 0))(0, 0) == doctest::Approx(kTwoPi * std::cos(kTwoPi * x)));

  VForm cdx = VForm::one_form(Base::S1, {TrigPoly2::constant(2.5)});
  CHECK(exterior_derivative(cdx).structurally_zero());

  // d(cos(2 pi x) dy) = -2 pi sin(2 pi x) dx^dy
  VForm w = VForm::one_form(Base::T2, {TrigPoly2(0, 0), TrigPoly2::from_x(TrigPoly::cos_mode(1))});
  VForm dw = exterior_derivative(w);
  for (double x : {0.1, 0.4})
    CHECK(dw(Vector2d(x, 0.3))(0, 0) == doctest::Approx(-kTwoPi * std::sin(kTwoPi * x)));

  // mixed partials of a separable function
  TrigPoly2 g = TrigPoly2::separable(TrigPoly::sin_mode(2), TrigPoly::cos_mode(3));
  const double x = 0.123, y = 0.456;
  CHECK(g.dx().dy()(x, y) == doctest::Approx(-2 * kTwoPi * 3 * kTwoPi * std::cos(2 * kTwoPi * x) * std::sin(3 * kTwoPi * y)));
  CHECK(g.laplacian()(x, y) == doctest::Approx(-kTwoPi * kTwoPi * 13 * g(x, y)));
}

TEST_CASE("d squared vanishes on random forms") {
  Rng rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    for (Base b : {Base::S1, Base::T2}) {
      VForm f = random_form(rng, b, 0, 2, 4, 1.0);
      VForm ddf = exterior_derivative(exterior_derivative(f));
      const double scale = exterior_derivative(f).max_abs_coeff();
      CHECK(ddf.max_abs_coeff() <= 1e-12 * scale);
    }
    VForm a = random_form(rng, Base::T2, 1, 1, 4, 1.0);
    CHECK(exterior_derivative(exterior_derivative(a)).structurally_zero());
  }
}

TEST_CASE("Lie derivative examples") {
  // L_{d/dx} sin(2 pi x) dx = 2 pi cos(2 pi x) dx
  VectorField ddx = VectorField::constant(Base::S1, Vector2d(1, 0));
  VForm f = VForm::one_form(Base::S1, {TrigPoly2::from_x(TrigPoly::sin_mode(1))});
  VForm l = lie_derivative(ddx, f);
  for (double x : {0.0, 0.3}) CHECK(l(Vector2d(x, 0))(0, 0) == doctest::Approx(kTwoPi * std::cos(kTwoPi * x)));

  // rotation example: L_eta sin(2 pi x) dx^dy = -cos(2 pi x) dx^dy for eta = -(1/2pi) d/dx
  VectorField eta = VectorField::constant(Base::T2, Vector2d(-1.0 / kTwoPi, 0));
  VForm w1 = VForm::area_form(TrigPoly2::from_x(TrigPoly::sin_mode(1)));
  VForm w2 = VForm::area_form(TrigPoly2::from_x(TrigPoly::cos_mode(1)));
  CHECK((lie_derivative(eta, w1) + w2).max_abs_coeff() < 1e-14);
  CHECK((lie_derivative(eta, w2) - w1).max_abs_coeff() < 1e-14);

  // closed form with i_X f = 0: dx on T^2 and X = d/dy
  VectorField ddy = VectorField::constant(Base::T2, Vector2d(0, 1));
  VForm dx = VForm::one_form(Base::T2, {TrigPoly2::constant(1), TrigPoly2(0, 0)});
  CHECK(lie_derivative(ddy, dx).max_abs_coeff() == 0.0);
}

TEST_CASE("Cartan formula on random inputs") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    for (Base b : {Base::S1, Base::T2}) {
      VectorField x = random_field(rng, b, 4, 1.0);
      for (int k = 0; k <= base_dim(b); ++k) {
        VForm f = random_form(rng, b, k, 2, 4, 1.0);
        VForm direct = lie_derivative(x, f);
        VForm cartan = cartan_lie_derivative(x, f);
        const double scale = std::max(1.0, direct.sup_norm());
        CHECK((direct - cartan).sup_norm() < 1e-10 * scale);
      }
    }
  }
  CHECK_THROWS_AS(lie_derivative(VectorField::zero(Base::S1), VForm(Base::T2, 1, 1)), std::invalid_argument);
}

TEST_CASE("integration over the base, loops and chains") {
  CHECK(integrate_base(VForm::area_form(TrigPoly2::constant(1.0)))[0] == doctest::Approx(1.0));
  VForm c = VForm::one_form(Base::S1, {TrigPoly2::from_x(TrigPoly::cos_mode(1))});
  CHECK(std::abs(integrate_base(c)[0]) < 1e-16);

  // full-period integral kills every nonconstant mode
  Rng rng(9);
  VForm r = random_form(rng, Base::T2, 2, 3, 5, 1.0);
  Eigen::VectorXd full = integrate_base(r);
  Eigen::VectorXd by_chain = integrate_chain(r, Chain2::rectangle(Vector2d(0, 0), 1, 1));
  CHECK((full - by_chain).norm() < 1e-12);

  // y dx around the counter-clockwise square [0,1/4]^2 has integral -1/16
  Loop sq = Loop::polygon({{0, 0}, {0.25, 0}, {0.25, 0.25}, {0, 0.25}});
  Eigen::VectorXd v = integrate_along([](const Point& p, const Point& t) { return Eigen::VectorXd::Constant(1, p.y() * t.x()); }, 1, sq);
  CHECK(v[0] == doctest::Approx(-1.0 / 16).epsilon(1e-14));
  CHECK_THROWS_AS(integrate_along(c, Loop::constant(Point(0.2, 0.0))), std::invalid_argument);

  // Stokes on a random form and the cone over a circle
  VForm a = random_form(rng, Base::T2, 1, 2, 3, 1.0);
  Loop circ = Loop::circle(Point(0.3, 0.6), 0.2);
  Eigen::VectorXd lhs = integrate_along(a, circ);
  Eigen::VectorXd rhs = integrate_chain(exterior_derivative(a), Chain2::cone(circ, Point(0.35, 0.5)), {8});
  CHECK((lhs - rhs).norm() < 1e-10);
}

TEST_CASE("primitive of closed one-forms") {
  Rng rng(21);
  TrigPoly2 f = random_trigpoly2(rng, 3, 4, 1.0);
  VForm w = exterior_derivative(VForm::scalar_function(Base::T2, f));
  w.comp(1) += TrigPoly2::constant(0.75);
  Primitive p = solve_primitive(w);
  CHECK(p.residual < 1e-12);
  CHECK(p.periods(0, 0) == doctest::Approx(0.0));
  CHECK(p.periods(1, 0) == doctest::Approx(0.75));
  TrigPoly2 g = p.function.comp(0) - f;
  CHECK((g - TrigPoly2::constant(g.mean())).max_abs_coeff() < 1e-12);

  // a non-closed form leaves a residual
  VForm nc = VForm::one_form(Base::T2, {TrigPoly2::from_y(TrigPoly::sin_mode(1)), TrigPoly2(0, 0)});
  CHECK(solve_primitive(nc).residual > 0.1);
}

TEST_CASE("json round trip") {
  Rng rng(1);
  VForm f = random_form(rng, Base::T2, 1, 2, 3, 1.0);
  VForm g = vform_from_json(json::parse(to_json(f).dump()));
  CHECK((f - g).max_abs_coeff() == 0.0);
  TrigPoly p = random_trigpoly(rng, 4, 1.0);
  CHECK((trigpoly_from_json(to_json(p)) - p).max_abs_coeff() == 0.0);
  VectorField x = random_field(rng, Base::S1, 2, 1.0);
  CHECK((vector_field_from_json(to_json(x)) - x).max_abs_coeff() == 0.0);
  CHECK_THROWS(vform_from_json(json{{"base", "K3"}, {"degree", 0}, {"components", json::array()}}));
}
