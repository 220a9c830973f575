#include "abext/random.hpp"

namespace abext {

double uniform(Rng& rng, double lo, double hi) {
  // explicit mapping keeps streams identical across standard libraries
  const double u = double(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

TrigPoly random_trigpoly(Rng& rng, int degree, double amp) {
  TrigPoly p(degree);
  for (double& c : p.coeffs()) c = uniform(rng, -amp, amp);
  return p;
}

TrigPoly2 random_trigpoly2(Rng& rng, int degree_x, int degree_y, double amp) {
  TrigPoly2 p(degree_x, degree_y);
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) p.at(i, j) = uniform(rng, -amp, amp);
  return p;
}

VectorField random_field(Rng& rng, Base base, int degree, double amp) {
  if (base == Base::S1) return VectorField::on_circle(random_trigpoly(rng, degree, amp));
  TrigPoly2 x = random_trigpoly2(rng, degree, degree, amp);
  TrigPoly2 y = random_trigpoly2(rng, degree, degree, amp);
  return VectorField::on_torus(x, y);
}

VForm random_form(Rng& rng, Base base, int k, int vdim, int degree, double amp) {
  VForm f(base, k, vdim);
  const int dy = base == Base::S1 ? 0 : degree;
  for (int c = 0; c < f.ncomp(); ++c)
    for (int v = 0; v < vdim; ++v) f.comp(c, v) = random_trigpoly2(rng, degree, dy, amp);
  return f;
}

Eigen::MatrixXd random_matrix(Rng& rng, int n, double amp) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = uniform(rng, -amp, amp);
  return m;
}

}  // namespace abext
