#pragma once

#include <json.hpp>

#include "abext/forms.hpp"

namespace abext {

using json = nlohmann::json;

json to_json(const TrigPoly& p);
json to_json(const TrigPoly2& p);
json to_json(const VectorField& x);
json to_json(const VForm& f);
json to_json(const Eigen::MatrixXd& m);
json to_json(const Eigen::VectorXd& v);

/// Accepts {"degree":N,"a0":..,"a":[..],"b":[..]} or {"ebasis":[..]}.
TrigPoly trigpoly_from_json(const json& j);
/// Accepts {"degree":[N1,N2],"coeffs":[[..],..]} in the product e-basis, or
/// {"x": TrigPoly} / {"y": TrigPoly} for functions of one variable.
TrigPoly2 trigpoly2_from_json(const json& j);
VectorField vector_field_from_json(const json& j);
VForm vform_from_json(const json& j);
Eigen::MatrixXd matrix_from_json(const json& j);
Eigen::VectorXd vector_from_json(const json& j);

}  // namespace abext
