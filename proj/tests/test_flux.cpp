#include <doctest.h>

#include <cmath>
#include <memory>
#include <unsupported/Eigen/MatrixFunctions>

#include "abext/flux.hpp"

using namespace abext;
using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

VForm area(double c) { return VForm::area_form(TrigPoly2::constant(c)); }

VForm rotation_omega() {
  return VForm::stack({VForm::area_form(TrigPoly2::from_x(TrigPoly::sin_mode(1))),
                       VForm::area_form(TrigPoly2::from_x(TrigPoly::cos_mode(1)))});
}

Matrix2d rotation_generator() {
  Matrix2d g;
  g << 0, -1, 1, 0;
  return g;
}

// Hamiltonian field of psi for omega = dx^dy: i_X omega = d psi.
VectorField hamiltonian_field(const TrigPoly2& psi) { return VectorField::on_torus(psi.dy(), -1.0 * psi.dx()); }

std::shared_ptr<const TimeField> autonomous(const VectorField& x) {
  return std::make_shared<const TimeField>(TimeField::autonomous(x));
}

// phi_t = flow of s(t) (-(1/2pi) d_x) + c(t) f(x) d_y, u_t = rotation by s(t): equivariant on rotation_omega.
struct RotationPath {
  DiffeoPath phi;
  GLPath u;
};

RotationPath rotation_path(Rng& rng, int intervals) {
  const double s = uniform(rng, -1.0, 1.0), c = uniform(rng, -0.3, 0.3);
  const TrigPoly f = random_trigpoly(rng, 2, 1.0);
  const auto fx = std::make_shared<const TimeField>(
      TimeField{Base::T2, {VectorField::on_torus(TrigPoly2::constant(-s / kTwoPi), c * TrigPoly2::from_x(f))}});
  RotationPath p;
  p.phi = DiffeoPath::flow(*fx, intervals);
  const Matrix2d g = rotation_generator();
  p.u = GLPath::sample([&](double t) { return MatrixXd((t * s * g).exp()); }, intervals);
  return p;
}

}  // namespace

TEST_CASE("infinitesimal flux classes") {
  const BundleChart symp = BundleChart::magnetic(area(1.0));
  const MatrixXd zero = MatrixXd::Zero(1, 1);

  const CohClass1 dx = flux_eq_infinitesimal(VectorField::constant(Base::T2, Vector2d(1, 0)), zero, symp);
  REQUIRE(dx.loops == std::vector<std::string>{"x", "y", "fiber0"});
  CHECK(std::abs(dx.evaluations(0, 0)) < 1e-14);
  CHECK(dx.evaluations(0, 1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(dx.evaluations(0, 2) == 0.0);

  Rng rng(1);
  const CohClass1 ham = flux_eq_infinitesimal(hamiltonian_field(random_trigpoly2(rng, 3, 3, 1.0)), zero, symp);
  CHECK(ham.norm() < 1e-12);
  CHECK(ham.closedness < 1e-12);

  const BundleChart rot = BundleChart::magnetic(rotation_omega());
  const VectorField eta = VectorField::constant(Base::T2, Vector2d(-1.0 / kTwoPi, 0));
  const CohClass1 r = flux_eq_infinitesimal(eta, rotation_generator(), rot);
  CHECK(r.closedness < 1e-12);
  CHECK(r.norm() < 1e-12);
  CHECK_THROWS_AS(flux_eq_infinitesimal(eta, -rotation_generator(), rot), std::invalid_argument);
  // gamma must vanish on Gamma
  CHECK_THROWS_AS(flux_eq_infinitesimal(VectorField::zero(Base::T2), MatrixXd::Ones(1, 1), symp), std::invalid_argument);
}

TEST_CASE("changing the connection by a closed form shifts the class by -gamma alpha") {
  Rng rng(2);
  const BundleChart rot = BundleChart::magnetic(rotation_omega());
  const VForm beta = rot.beta();
  VForm closed = exterior_derivative(VForm::function(Base::T2, {random_trigpoly2(rng, 2, 2, 1.0), random_trigpoly2(rng, 2, 2, 1.0)}));
  closed.comp(0, 0) += TrigPoly2::constant(0.7);
  closed.comp(1, 1) += TrigPoly2::constant(-0.4);
  const BundleChart a = BundleChart::trivial(beta), b = BundleChart::trivial(beta + closed);
  const VectorField eta = VectorField::constant(Base::T2, Vector2d(-1.0 / kTwoPi, 0));
  const MatrixXd g = rotation_generator();
  const CohClass1 ca = flux_eq_infinitesimal(eta, g, a), cb = flux_eq_infinitesimal(eta, g, b);
  const Vector2d px = integrate_along(closed, Loop::segment(Point(0, 0), Point(1, 0)));
  const Vector2d py = integrate_along(closed, Loop::segment(Point(0, 0), Point(0, 1)));
  CHECK((cb.evaluations.col(0) - ca.evaluations.col(0) + g * px).norm() < 1e-12);
  CHECK((cb.evaluations.col(1) - ca.evaluations.col(1) + g * py).norm() < 1e-12);
}

TEST_CASE("flux of translation and identity paths") {
  const BundleChart symp = BundleChart::magnetic(area(1.0));
  const GLPath one = GLPath::constant(MatrixXd::Identity(1, 1), 16);
  const CohClass1 id = flux_eq_path(DiffeoPath::constant(Diffeo::identity(Base::T2), 16), one, symp);
  CHECK(id.evaluations.norm() == 0.0);

  for (const Vector2d s : {Vector2d(0.3, -0.2), Vector2d(1.25, 0.5)}) {
    const DiffeoPath tr = DiffeoPath::family([&](double t) { return Diffeo::translation(Base::T2, t * s); }, 16);
    const CohClass1 c = flux_eq_path(tr, one, symp);
    CohClass1 expected = c;
    expected.evaluations << -s.y(), s.x(), 0.0;
    CHECK(c.distance(expected) < 1e-12);
    // relation with the flux homomorphism of the invariant path
    const InvariantFlux f = flux_invariant_path(tr, area(1.0));
    CHECK(f.agreement < 1e-12);
    CHECK(f.invariance < 1e-12);
    CHECK((f.left.evaluations - c.evaluations.leftCols(2)).norm() < 1e-12);
  }
}

TEST_CASE("path flux matches the closed form on exact charts") {
  Rng rng(3);
  // circle, alpha = (cos(2 pi x) + c) dx
  for (int trial = 0; trial < 4; ++trial) {
    const double c = uniform(rng, -1.0, 1.0), a = uniform(rng, -1.0, 1.0);
    const BundleChart ch = BundleChart::trivial(
        VForm::one_form(Base::S1, {TrigPoly2::from_x(TrigPoly::cos_mode(1)) + TrigPoly2::constant(c)}));
    const VectorField x0 = VectorField::on_circle(random_trigpoly(rng, 3, 0.1));
    const DiffeoPath phi = DiffeoPath::flow(TimeField::autonomous(x0), 32);
    const GLPath u = GLPath::sample([&](double t) { return MatrixXd::Constant(1, 1, std::exp(a * t)); }, 32);
    const CohClass1 path = flux_eq_path(phi, u, ch);
    const CohClass1 closed = flux_eq_closed_form(phi.nodes().back(), u.nodes.back(), ch);
    CHECK(path.distance(closed) < 1e-9);
    CHECK(path.evaluations(0, 0) == doctest::Approx(-(std::exp(a) - 1) * c).epsilon(1e-9));
  }
  // torus, V = R^2, connection beta_rot plus a harmonic part, rotation-equivariant paths
  const BundleChart rot = BundleChart::magnetic(rotation_omega());
  VForm alpha = rot.beta();
  alpha.comp(0, 0) += TrigPoly2::constant(0.3);
  alpha.comp(1, 1) += TrigPoly2::constant(-0.8);
  const BundleChart ch = BundleChart::trivial(alpha);
  for (int trial = 0; trial < 3; ++trial) {
    const RotationPath p = rotation_path(rng, 32);
    const CohClass1 path = flux_eq_path(p.phi, p.u, ch);
    const CohClass1 closed = flux_eq_closed_form(p.phi.nodes().back(), p.u.nodes.back(), ch);
    CHECK(path.distance(closed) < 1e-8);
  }
}

TEST_CASE("flux of loops lies in the period lattice") {
  Rng rng(4);
  const BundleChart symp = BundleChart::magnetic(area(1.0));
  const GLPath one = GLPath::constant(MatrixXd::Identity(1, 1), 48);
  for (int trial = 0; trial < 3; ++trial) {
    const int m = static_cast<int>(std::floor(uniform(rng, -2.0, 3.0))), n = static_cast<int>(std::floor(uniform(rng, -2.0, 3.0)));
    const auto field = autonomous(hamiltonian_field(random_trigpoly2(rng, 2, 2, 0.005)));
    const DiffeoPath loop = DiffeoPath::family(
        [&](double t) {
          const double a = 4.0 * t * (1.0 - t);
          return Diffeo::translation(Base::T2, Point(t * m, t * n)) * Diffeo::flow(field, 0.0, a, 32);
        },
        48);
    const CohClass1 c = flux_eq_path(loop, one, symp);
    CohClass1 lattice_point = c;
    lattice_point.evaluations << -n, m, 0.0;
    CHECK((c.evaluations - lattice_point.evaluations).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(c.norm() < 1e-6);
  }
}

TEST_CASE("flux is a 1-cocycle on paths") {
  Rng rng(5);
  const BundleChart rot = BundleChart::magnetic(rotation_omega());
  for (int trial = 0; trial < 2; ++trial) {
    const RotationPath g1 = rotation_path(rng, 24), g2 = rotation_path(rng, 24);
    const CohClass1 f1 = flux_eq_path(g1.phi, g1.u, rot), f2 = flux_eq_path(g2.phi, g2.u, rot);
    const CohClass1 f12 = flux_eq_path(g1.phi.then(g2.phi), g1.u.then(g2.u), rot);
    CohClass1 rhs = f1;
    rhs.evaluations += g1.u.nodes.back() * f2.evaluations;
    CHECK(f12.distance(rhs) < 1e-6);
  }
}

TEST_CASE("hamiltonian paths stay in the kernel of the flux") {
  Rng rng(6);
  const BundleChart symp = BundleChart::magnetic(area(1.0));
  const GLPath one = GLPath::constant(MatrixXd::Identity(1, 1), 16);
  const VectorField x = hamiltonian_field(random_trigpoly2(rng, 2, 2, 0.01));
  const DiffeoPath ham = DiffeoPath::flow(TimeField::autonomous(x), 16);
  for (const auto& [t, ev] : flux_eq_trace(ham, one, symp)) CHECK(ev.cwiseAbs().maxCoeff() < 1e-6);
  CHECK(flux_eq_infinitesimal(x, MatrixXd::Zero(1, 1), symp).norm() < 1e-12);

  // a translation path leaves the kernel immediately
  const DiffeoPath tr = DiffeoPath::family([](double t) { return Diffeo::translation(Base::T2, Point(0.5 * t, 0)); }, 16);
  const auto trace = flux_eq_trace(tr, one, symp);
  REQUIRE(trace.size() == 17);
  CHECK(trace[8].second(0, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(trace.back().second(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("invariant flux: left and right formulas, loops and invariance") {
  Rng rng(7);
  const VForm w = area(1.0);
  const auto field = autonomous(hamiltonian_field(random_trigpoly2(rng, 2, 2, 0.005)));
  const DiffeoPath p = DiffeoPath::family(
      [&](double t) { return Diffeo::translation(Base::T2, Point(0.3 * t, -0.6 * t)) * Diffeo::flow(field, 0.0, t, 128); }, 24);
  const InvariantFlux f = flux_invariant_path(p, w);
  CHECK(f.agreement < 1e-7);
  CHECK(f.right.evaluations(0, 0) == doctest::Approx(0.6).epsilon(1e-7));
  CHECK(f.right.evaluations(0, 1) == doctest::Approx(0.3).epsilon(1e-7));

  const DiffeoPath loop = DiffeoPath::family([](double t) { return Diffeo::translation(Base::T2, Point(t, 2 * t)); }, 16);
  CHECK(flux_invariant_path(loop, w).right.norm() < 1e-12);

  const auto shear = autonomous(VectorField::on_torus(TrigPoly2::from_x(TrigPoly::sin_mode(1)), TrigPoly2(0, 0)));
  const DiffeoPath bad = DiffeoPath::family([&](double t) { return Diffeo::flow(shear, 0.0, 0.1 * t, 8); }, 8);
  CHECK_THROWS_AS(flux_invariant_path(bad, w), std::invalid_argument);
}

TEST_CASE("equi-hamiltonian functions") {
  const BundleChart symp = BundleChart::magnetic(area(1.0));
  const MatrixXd zero = MatrixXd::Zero(1, 1);
  Rng rng(8);

  const EquiHamiltonian z = equi_hamiltonian_solve(VectorField::zero(Base::T2), zero, symp);
  REQUIRE(z.exact);
  CHECK(z.h->periodic[0].max_abs_coeff() == 0.0);

  // forward-constructed instance: eta is the hamiltonian field of f
  const TrigPoly2 f = TrigPoly2::from_x(TrigPoly::sin_mode(1)) * (1.0 / kTwoPi);
  const Point x0(0.2, 0.7);
  const EquiHamiltonian e = equi_hamiltonian_solve(hamiltonian_field(f), zero, symp, x0);
  REQUIRE(e.exact);
  for (const Point p : {Point(0.1, 0.2), Point(0.77, 0.4)})
    CHECK((*e.h)({p, VectorXd::Constant(1, 0.3)})(0) == doctest::Approx(f(p.x(), p.y()) - f(x0.x(), x0.y())).epsilon(1e-12));
  CHECK(e.residual < 1e-8);

  const EquiHamiltonian ne = equi_hamiltonian_solve(VectorField::constant(Base::T2, Vector2d(1, 0)), zero, symp);
  CHECK_FALSE(ne.exact);
  CHECK_FALSE(ne.h.has_value());
  CHECK(ne.obstruction.evaluations(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

  // rotation example: h = -gamma v, checked through the Souriau field and almost invariance
  const BundleChart rot = BundleChart::magnetic(rotation_omega());
  const VectorField eta = VectorField::constant(Base::T2, Vector2d(-1.0 / kTwoPi, 0));
  const MatrixXd g = rotation_generator();
  const EquiHamiltonian er = equi_hamiltonian_solve(eta, g, rot);
  REQUIRE(er.exact);
  const auto samples = chart_samples(rot, 4, rng);
  const SouriauCheck sc = check_souriau(rot, souriau_field(rot, eta, *er.h), *er.h, g, samples);
  CHECK(sc.contraction < 1e-8);
  CHECK(sc.lie < 1e-8);
  const Vector2d a(0.5, 1.5);
  const AlmostInvariance ai = almost_invariance(*er.h, a, samples);
  CHECK(ai.spread < 1e-8);
  CHECK((ai.value - g * a).norm() < 1e-8);

  // random equivariant pairs on the rotation chart, with hamiltonian y-dependence removed
  for (int trial = 0; trial < 3; ++trial) {
    const double s = uniform(rng, -1.0, 1.0);
    const VectorField e2 = VectorField::on_torus(TrigPoly2::constant(-s / kTwoPi), TrigPoly2::from_x(random_trigpoly(rng, 2, 1.0)));
    const EquiHamiltonian r2 = equi_hamiltonian_solve(e2, s * g, rot);
    if (!r2.exact) continue;
    const SouriauCheck c2 = check_souriau(rot, souriau_field(rot, e2, *r2.h), *r2.h, s * g, samples);
    CHECK(c2.contraction < 1e-8);
    CHECK(c2.lie < 1e-8);
  }

  // data beyond the Fourier budget
  const VectorField high = hamiltonian_field(TrigPoly2::from_x(TrigPoly::sin_mode(20)));
  CHECK_THROWS_AS(equi_hamiltonian_solve(high, zero, symp, Point::Zero(), 16), DegreeBudgetExceeded);
}
