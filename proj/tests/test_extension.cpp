#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "abext/extension.hpp"
#include "abext/random.hpp"

using namespace abext;
using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

VForm cos_alpha(double c = 0.0) {
  return VForm::one_form(Base::S1, {TrigPoly2::from_x(TrigPoly::cos_mode(1)) + TrigPoly2::constant(c)});
}

EquiPair scaling(double u) { return {Diffeo::identity(Base::S1), MatrixXd::Constant(1, 1, u)}; }
EquiPair rotation(double s, double u = 1.0) { return {Diffeo::rotation(s), MatrixXd::Constant(1, 1, u)}; }

EquiPair random_circle_pair(Rng& rng) {
  TrigPoly p = random_trigpoly(rng, 2, 0.015);
  p.coeffs()[0] = uniform(rng, -0.5, 0.5);
  return {Diffeo::from_displacement(p), MatrixXd::Constant(1, 1, uniform(rng, 0.5, 2.0))};
}

double sin2pi(double x) { return std::sin(kTwoPi * x); }

MatrixXd random_gen(Rng& rng) { return random_matrix(rng, 2, 0.5); }

// g(t) = exp(tA) exp(t^2 C), delta^l g = exp(-t^2 C) A exp(t^2 C) + 2t C
struct GLSample {
  MatrixXd a, c;
  MatrixXd operator()(double t) const { return MatrixXd((t * a).exp() * (t * t * c).exp()); }
  MatrixXd left_log(double t) const {
    return MatrixXd((-t * t * c).exp() * a * (t * t * c).exp() + 2.0 * t * c);
  }
};

VForm rotation_omega() {
  return VForm::stack({VForm::area_form(TrigPoly2::from_x(TrigPoly::sin_mode(1))),
                       VForm::area_form(TrigPoly2::from_x(TrigPoly::cos_mode(1)))});
}

}  // namespace

TEST_CASE("integrated 1-cocycles") {
  Rng rng(11);
  const GLSample s{random_gen(rng), random_gen(rng)};
  const GLPath g = GLPath::sample(s, 32);

  CHECK(integrate_1cocycle(MatrixCocycle1::zero(3), g).norm() == 0.0);

  // R as unipotent matrices, alpha reads the off-diagonal entry
  const GLPath line = GLPath::sample([](double t) {
    Matrix2d m;
    m << 1, std::sin(2.0 * t) + t * t, 0, 1;
    return MatrixXd(m);
  }, 32);
  const MatrixCocycle1 id{1, [](const MatrixXd& x) { return VectorXd::Constant(1, x(0, 1)); },
                          [](const MatrixXd&, const VectorXd& w) { return w; }};
  CHECK(integrate_1cocycle(id, line)(0) == doctest::Approx(std::sin(2.0) + 1.0).epsilon(1e-9));

  // trace integrates to log det
  CHECK(integrate_1cocycle(MatrixCocycle1::trace(), g)(0) == doctest::Approx(std::log(s(1.0).determinant())).epsilon(1e-9));

  // [X, B] with the adjoint action integrates to g B g^-1 - B, at every node of the running integral
  const MatrixXd b = random_gen(rng);
  const MatrixCocycle1 ad = MatrixCocycle1::commutator(b);
  for (const auto& [t, v] : integrate_1cocycle_trace(ad, g)) {
    const MatrixXd expect = s(t) * b * s(t).inverse() - b;
    CHECK((v - Eigen::Map<const VectorXd>(expect.data(), 4)).cwiseAbs().maxCoeff() < 1e-8);
  }

  // cocycle identity on concatenations
  const GLSample s2{random_gen(rng), random_gen(rng)};
  const GLPath h = GLPath::sample(s2, 32);
  const VectorXd a1 = integrate_1cocycle(ad, g), a2 = integrate_1cocycle(ad, h);
  const VectorXd a12 = integrate_1cocycle(ad, g.then(h));
  CHECK((a12 - a1 - ad.act(g.nodes.back(), a2)).cwiseAbs().maxCoeff() < 1e-6);

  // tr(XB) is not a cocycle for a generic B; only quadrature against a refined oracle is meaningful
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double t) { return (s.left_log(t) * b).trace(); }, 0.0, 1.0, 15, 1e-14);
  CHECK(integrate_1cocycle(MatrixCocycle1::trace_pairing(b), g)(0) == doctest::Approx(oracle).epsilon(1e-7));

  // a path oscillating faster than the grid resolves
  const GLPath fast = GLPath::sample([&](double t) { return MatrixXd((std::sin(30.0 * t) * b).exp()); }, 16);
  CHECK_THROWS_AS(integrate_1cocycle(MatrixCocycle1::trace_pairing(b), fast), CoarsePath);
}

TEST_CASE("primitive maps on the circle") {
  const ExactChart chart(BundleChart::trivial(cos_alpha()));
  CHECK(primitive_map(scaling(1.0), chart).f.max_abs_coeff() < 1e-15);

  const PrimitiveMap f2 = primitive_map(scaling(2.0), chart);
  const PrimitiveMap fr = primitive_map(rotation(0.3), chart);
  for (double x : {0.0, 0.17, 0.5, 0.81}) {
    CHECK(f2.f(Point(x, 0))(0, 0) == doctest::Approx(sin2pi(x) / kTwoPi).epsilon(1e-12));
    const double expect = (sin2pi(x) - sin2pi(x + 0.3) + sin2pi(0.3)) / kTwoPi;
    CHECK(std::abs(fr.f(Point(x, 0))(0, 0) - expect) < 1e-12);
  }
  CHECK(f2.residual < 1e-12);

  // a harmonic part in alpha makes scalings non-exact
  const ExactChart shifted(BundleChart::trivial(cos_alpha(0.5)));
  try {
    primitive_map(scaling(2.0), shifted);
    FAIL("expected NotExact");
  } catch (const NotExact& e) {
    CHECK(e.evaluations(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  }

  const ExactChart small(BundleChart::trivial(cos_alpha()), Point::Zero(), 4);
  CHECK_THROWS_AS(primitive_map({Diffeo::from_displacement(TrigPoly::sin_mode(1) * 0.15), MatrixXd::Ones(1, 1)}, small),
                  DegreeBudgetExceeded);
}

TEST_CASE("group 2-cocycle on the circle") {
  const ExactChart chart(BundleChart::trivial(cos_alpha()));
  const Point x0 = Point::Zero();
  CHECK(group_2cocycle(scaling(2.0), rotation(0.25), chart, x0)(0) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-9));
  CHECK(std::abs(group_2cocycle(scaling(2.0), scaling(3.0), chart, x0)(0)) < 1e-12);

  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const EquiPair g1 = random_circle_pair(rng), g2 = random_circle_pair(rng), g3 = random_circle_pair(rng);
    const EquiPair id = EquiPair::identity(Base::S1, 1);
    CHECK(std::abs(group_2cocycle(g1, id, chart, x0)(0)) < 1e-12);
    CHECK(std::abs(group_2cocycle(id, g1, chart, x0)(0)) < 1e-12);
    CHECK(group_2cocycle_spread(g1, g2, chart).spread < 1e-8);
    const auto c = [&](const EquiPair& a, const EquiPair& b) { return group_2cocycle(a, b, chart, x0); };
    CHECK(group_cocycle_defect(c, g1, g2, g3).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(normalization_coboundary_residual(g1, g2, chart, Point(0.37, 0)) < 1e-8);
  }
}

TEST_CASE("extension group law") {
  const ExactChart chart(BundleChart::trivial(cos_alpha()));
  const ExtElement one = ext_identity(chart);
  const ExtElement e = ext_element(rotation(0.1, 1.5), VectorXd::Constant(1, 0.4), chart);
  CHECK(ext_distance(ext_multiply(e, one, chart), e) < 1e-12);
  CHECK(ext_distance(ext_multiply(one, e, chart), e) < 1e-12);

  const ExtElement f1 = ext_element(EquiPair::identity(Base::S1, 1), VectorXd::Constant(1, 0.25), chart);
  const ExtElement f2 = ext_element(EquiPair::identity(Base::S1, 1), VectorXd::Constant(1, -1.5), chart);
  CHECK(ext_multiply(f1, f2, chart).a(0) == doctest::Approx(-1.25).epsilon(1e-14));

  const ExtElement p = ext_multiply(ext_element(scaling(2.0), VectorXd::Zero(1), chart),
                                    ext_element(rotation(0.25), VectorXd::Zero(1), chart), chart);
  CHECK(ext_distance(p, ext_element(rotation(0.25, 2.0), VectorXd::Constant(1, 1.0 / kTwoPi), chart)) < 1e-9);

  Rng rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    const ExtElement a = ext_element(random_circle_pair(rng), VectorXd::Constant(1, uniform(rng, -1, 1)), chart);
    const ExtElement b = ext_element(random_circle_pair(rng), VectorXd::Constant(1, uniform(rng, -1, 1)), chart);
    const ExtElement c = ext_element(random_circle_pair(rng), VectorXd::Constant(1, uniform(rng, -1, 1)), chart);
    CHECK(ext_distance(ext_multiply(ext_multiply(a, b, chart), c, chart), ext_multiply(a, ext_multiply(b, c, chart), chart)) < 1e-8);
    CHECK(ext_distance(ext_multiply(a, ext_inverse(a, chart), chart), one) < 1e-8);
    CHECK(ext_distance(ext_multiply(ext_inverse(a, chart), a, chart), one) < 1e-8);
  }

  const ExactChart other(BundleChart::trivial(cos_alpha()));
  CHECK_THROWS_AS(ext_multiply(e, ext_identity(other), chart), std::invalid_argument);
}

TEST_CASE("perturbed cocycle breaks both the cocycle identity and associativity") {
  const ExactChart chart(BundleChart::trivial(cos_alpha()));
  const double eps = 1e-3;
  const auto c = [&](const EquiPair& a, const EquiPair& b) {
    return VectorXd(group_2cocycle(a, b, chart, chart.x0()) + VectorXd::Constant(1, eps * (a.u(0, 0) - 1) * std::pow(b.u(0, 0) - 1, 2)));
  };
  // the same law written out with the perturbed cocycle
  struct El {
    EquiPair g;
    double a;
  };
  const auto mul = [&](const El& x, const El& y) { return El{x.g * y.g, x.a + x.g.u(0, 0) * y.a + c(x.g, y.g)(0)}; };
  const El a{scaling(2.0), 0.1}, b{rotation(0.2, 3.0), -0.3}, d{scaling(0.5), 0.7};
  const double defect = std::abs(group_cocycle_defect(c, a.g, b.g, d.g)(0));
  const double assoc = std::abs(mul(mul(a, b), d).a - mul(a, mul(b, d)).a);
  CHECK(defect > eps / 10);
  CHECK(assoc > eps / 10);
  CHECK(std::abs(defect - assoc) < 1e-12);
}

TEST_CASE("rotation-equivariant pairs on the torus") {
  const BundleChart rot = BundleChart::magnetic(rotation_omega());
  const ExactChart chart(rot, Point::Zero(), 8);
  const ToyAction act = ToyAction::rotations();
  Rng rng(14);
  auto random_el = [&] {
    const Vector2d g(uniform(rng, -2, 2), uniform(rng, -1, 1));
    return ext_element(act.element(g), Vector2d(uniform(rng, -1, 1), uniform(rng, -1, 1)), chart);
  };
  for (int trial = 0; trial < 4; ++trial) {
    const ExtElement a = random_el(), b = random_el(), c = random_el();
    CHECK(equivariance_residual(rot.omega(), a.g) < 1e-12);
    CHECK(group_2cocycle_spread(a.g, b.g, chart).spread < 1e-8);
    CHECK(ext_distance(ext_multiply(ext_multiply(a, b, chart), c, chart), ext_multiply(a, ext_multiply(b, c, chart), chart)) < 1e-7);
  }
  // translations in x alone do not preserve omega up to a linear map
  const EquiPair bad{Diffeo::translation(Base::T2, Point(0.1, 0)), MatrixXd::Identity(2, 2)};
  CHECK_THROWS_AS(primitive_map(bad, chart), std::invalid_argument);
  CHECK_THROWS_AS(ExactChart(BundleChart::magnetic(VForm::area_form(TrigPoly2::constant(1.0)))), std::invalid_argument);
}

TEST_CASE("pullback extensions") {
  const BundleChart symp = BundleChart::magnetic(VForm::area_form(TrigPoly2::constant(1.0)));

  PullbackOptions cover;
  cover.cover = true;
  const PullbackExtension triv = pullback_extension(symp, ToyAction::trivial(Base::T2, 2, 1), cover);
  CHECK(triv.cocycle(Vector2d(0.3, 0.4), Vector2d(-0.2, 0.9)).norm() == 0.0);
  CHECK(triv.lie[0].norm() == 0.0);

  const PullbackExtension tr = pullback_extension(symp, ToyAction::translations(1), cover);
  CHECK(tr.expected[0](0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(tr.lie[0](0, 1) == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(tr.lie_error < 1e-4);
  CHECK(tr.lie_raw_error < 1e-4);
  CHECK(tr.cocycle_identity < 1e-10);
  CHECK(tr.associativity < 1e-10);
  CHECK(tr.normalization < 1e-12);

  // on the torus itself the translations carry flux
  try {
    pullback_extension(symp, ToyAction::translations(1));
    FAIL("expected NotEquiHamiltonian");
  } catch (const NotEquiHamiltonian& e) {
    REQUIRE(e.obstructions.size() == 2);
    CHECK(e.obstructions[0].evaluations(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // rotations mixing the two components of omega are equi-hamiltonian on the torus
  for (const Point x0 : {Point(0, 0), Point(0.3, 0.6)}) {
    PullbackOptions opt;
    opt.x0 = x0;
    const PullbackExtension r = pullback_extension(BundleChart::magnetic(rotation_omega()), ToyAction::rotations(), opt);
    // the rotation generator acts invertibly on V, so agreement only holds in cohomology
    CHECK(r.lie_error < 1e-4);
    CHECK(r.cocycle_identity < 1e-8);
    CHECK(r.associativity < 1e-8);
    CHECK(r.normalization < 1e-12);
  }
}

TEST_CASE("integration obstructions of toy groups") {
  const Obstructions rn = obstructions(ToyGroup::symplectic(ToyKind::Rn));
  CHECK(rn.verdict == "integrates");
  CHECK(rn.loops.empty());
  CHECK(rn.period_generators.cols() == 0);
  CHECK(rn.ce_residual == 0.0);

  const Obstructions t2 = obstructions(ToyGroup::symplectic(ToyKind::Torus));
  CHECK(t2.verdict == "does not integrate");
  REQUIRE(t2.flux.size() == 2);
  // I_{gamma1}(X) = x2, I_{gamma2}(X) = -x1
  CHECK((t2.flux[0] - Eigen::RowVector2d(0, 1)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((t2.flux[1] - Eigen::RowVector2d(-1, 0)).cwiseAbs().maxCoeff() < 1e-12);

  ToyGroup zero = ToyGroup::symplectic(ToyKind::Torus);
  zero.sigma[0].setZero();
  CHECK(obstructions(zero).verdict == "trivial extension");

  ToyGroup bad = ToyGroup::symplectic(ToyKind::Rn);
  bad.sigma[0](0, 1) = 2.0;
  CHECK_THROWS_AS(obstructions(bad), std::invalid_argument);
}

TEST_CASE("Heisenberg group law") {
  const HeisenbergLaw law = heisenberg_law(ToyGroup::symplectic(ToyKind::Rn));
  Rng rng(15);
  auto random_point = [&] { return Eigen::Vector3d(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -1, 1)); };
  std::vector<VectorXd> pts;
  for (int trial = 0; trial < 10; ++trial) {
    const VectorXd p = random_point(), q = random_point(), r = random_point();
    CHECK((law.multiply(p, q) - transport_multiply(law, p, q)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((law.multiply(law.multiply(p, q), r) - law.multiply(p, law.multiply(q, r))).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((law.multiply(p, law.inverse(p))).cwiseAbs().maxCoeff() < 1e-12);
    pts.push_back(p);
  }
  // commutator of the lifts of the generators is the central element sigma(e1, e2)
  const VectorXd e1 = Eigen::Vector3d(1, 0, 0), e2 = Eigen::Vector3d(0, 1, 0);
  const VectorXd comm = law.multiply(law.multiply(e1, e2), law.inverse(law.multiply(e2, e1)));
  CHECK(comm(2) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(peq_check(law, pts) < 1e-8);
}
