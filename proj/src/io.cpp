#include "abext/io.hpp"

#include <stdexcept>

namespace abext {

json to_json(const TrigPoly& p) {
  json a = json::array(), b = json::array();
  for (int k = 1; k <= p.degree(); ++k) {
    a.push_back(p.a(k));
    b.push_back(p.b(k));
  }
  return {{"degree", p.degree()}, {"a0", p.a0()}, {"a", a}, {"b", b}};
}

json to_json(const TrigPoly2& p) {
  json rows = json::array();
  for (int i = 0; i < p.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < p.cols(); ++j) r.push_back(p.at(i, j));
    rows.push_back(r);
  }
  return {{"degree", {p.degree_x(), p.degree_y()}}, {"coeffs", rows}};
}

json to_json(const VectorField& x) {
  json c = json::array();
  for (const auto& f : x.comps()) c.push_back(to_json(f));
  return {{"base", to_string(x.base())}, {"components", c}};
}

json to_json(const VForm& f) {
  json comps = json::array();
  for (int c = 0; c < f.ncomp(); ++c) {
    json per_v = json::array();
    for (int v = 0; v < f.vdim(); ++v) per_v.push_back(to_json(f.comp(c, v)));
    comps.push_back(per_v);
  }
  return {{"base", to_string(f.base())}, {"degree", f.degree()}, {"vdim", f.vdim()}, {"components", comps}};
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

json to_json(const Eigen::VectorXd& v) {
  json r = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) r.push_back(v[i]);
  return r;
}

TrigPoly trigpoly_from_json(const json& j) {
  if (j.is_number()) return TrigPoly::constant(j.get<double>());
  if (j.contains("ebasis")) return TrigPoly(j.at("ebasis").get<std::vector<double>>());
  const auto a = j.value("a", std::vector<double>{});
  const auto b = j.value("b", std::vector<double>{});
  int n = j.value("degree", static_cast<int>(std::max(a.size(), b.size())));
  if (a.size() > static_cast<std::size_t>(n) || b.size() > static_cast<std::size_t>(n))
    throw std::invalid_argument("TrigPoly json: more coefficients than degree");
  TrigPoly p(n);
  p.set_a(0, j.value("a0", 0.0));
  for (std::size_t k = 0; k < a.size(); ++k) p.set_a(static_cast<int>(k) + 1, a[k]);
  for (std::size_t k = 0; k < b.size(); ++k) p.set_b(static_cast<int>(k) + 1, b[k]);
  return p;
}

TrigPoly2 trigpoly2_from_json(const json& j) {
  if (j.is_number()) return TrigPoly2::constant(j.get<double>());
  if (j.contains("x") && j.contains("y"))
    return TrigPoly2::separable(trigpoly_from_json(j.at("x")), trigpoly_from_json(j.at("y")));
  if (j.contains("x")) return TrigPoly2::from_x(trigpoly_from_json(j.at("x")));
  if (j.contains("y")) return TrigPoly2::from_y(trigpoly_from_json(j.at("y")));
  const auto deg = j.at("degree").get<std::vector<int>>();
  if (deg.size() != 2) throw std::invalid_argument("TrigPoly2 json: degree must be a pair");
  TrigPoly2 p(deg[0], deg[1]);
  const auto& rows = j.at("coeffs");
  if (static_cast<int>(rows.size()) != p.rows()) throw std::invalid_argument("TrigPoly2 json: row count");
  for (int i = 0; i < p.rows(); ++i) {
    if (static_cast<int>(rows[i].size()) != p.cols()) throw std::invalid_argument("TrigPoly2 json: column count");
    for (int k = 0; k < p.cols(); ++k) p.at(i, k) = rows[i][k].get<double>();
  }
  return p;
}

VectorField vector_field_from_json(const json& j) {
  const Base b = base_from_string(j.at("base").get<std::string>());
  std::vector<TrigPoly2> c;
  for (const auto& e : j.at("components")) c.push_back(trigpoly2_from_json(e));
  return VectorField(b, std::move(c));
}

VForm vform_from_json(const json& j) {
  const Base b = base_from_string(j.at("base").get<std::string>());
  VForm f(b, j.at("degree").get<int>(), j.value("vdim", 1));
  const auto& comps = j.at("components");
  if (static_cast<int>(comps.size()) != f.ncomp()) throw std::invalid_argument("VForm json: component count");
  for (int c = 0; c < f.ncomp(); ++c) {
    if (static_cast<int>(comps[c].size()) != f.vdim()) throw std::invalid_argument("VForm json: value count");
    for (int v = 0; v < f.vdim(); ++v) f.comp(c, v) = trigpoly2_from_json(comps[c][v]);
  }
  return f;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (j.is_number()) return Eigen::MatrixXd::Constant(1, 1, j.get<double>());
  const Eigen::Index r = static_cast<Eigen::Index>(j.size());
  const Eigen::Index c = r ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != c) throw std::invalid_argument("matrix json: ragged rows");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (j.is_number()) return Eigen::VectorXd::Constant(1, j.get<double>());
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

}  // namespace abext
