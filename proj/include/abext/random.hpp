#pragma once

#include <random>

#include "abext/forms.hpp"

namespace abext {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
TrigPoly random_trigpoly(Rng& rng, int degree, double amp);
TrigPoly2 random_trigpoly2(Rng& rng, int degree_x, int degree_y, double amp);
VectorField random_field(Rng& rng, Base base, int degree, double amp);
VForm random_form(Rng& rng, Base base, int k, int vdim, int degree, double amp);
Eigen::MatrixXd random_matrix(Rng& rng, int n, double amp);

}  // namespace abext
