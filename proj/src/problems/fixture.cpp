#include "semaopt/problems/fixture.hpp"

#include <fstream>
#include <sstream>

namespace semaopt {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const json& data = j.at("data");
  require_config(rows >= 0 && cols >= 0 && data.size() == static_cast<std::size_t>(rows * cols),
                 "fixture: matrix data size mismatch");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index c = 0; c < cols; ++c) m(i, c) = data[k++].get<double>();
  return m;
}

json vector_to_json(const Vector& v) {
  json data = json::array();
  for (Index i = 0; i < v.size(); ++i) data.push_back(v[i]);
  return data;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = j[i].get<double>();
  return v;
}

namespace {

json header(ProblemKind kind, std::uint64_t seed) {
  return json{{"format", "semaopt-fixture"},
              {"version", kFixtureVersion},
              {"kind", std::string(to_string(kind))},
              {"seed", seed}};
}

void expect_kind(const json& j, ProblemKind kind) {
  require_config(fixture_kind(j) == kind,
                 "fixture: expected kind '" + std::string(to_string(kind)) + "'");
}

}  // namespace

ProblemKind fixture_kind(const json& j) {
  require_config(j.is_object() && j.value("format", "") == "semaopt-fixture",
                 "fixture: missing format tag");
  require_config(j.value("version", 0) == kFixtureVersion, "fixture: unsupported version");
  return parse_problem_kind(j.at("kind").get<std::string>());
}

json to_fixture(const QuadraticProblem& p) {
  json j = header(ProblemKind::Quadratic, p.seed);
  j["d"] = p.dim();
  j["cond"] = p.cond;
  j["l_f"] = p.l_f();
  j["mu"] = p.mu();
  j["q"] = matrix_to_json(p.q);
  j["x_star"] = vector_to_json(p.x_star);
  j["eigenvalues"] = vector_to_json(p.eigenvalues);
  return j;
}

QuadraticProblem quadratic_from_fixture(const json& j) {
  expect_kind(j, ProblemKind::Quadratic);
  QuadraticProblem p;
  p.seed = j.at("seed").get<std::uint64_t>();
  p.cond = j.at("cond").get<double>();
  p.q = matrix_from_json(j.at("q"));
  p.x_star = vector_from_json(j.at("x_star"));
  p.eigenvalues = vector_from_json(j.at("eigenvalues"));
  return p;
}

json to_fixture(const PlLeastSquaresProblem& p) {
  json j = header(ProblemKind::PLLeastSquares, p.seed);
  j["d"] = p.dim();
  j["r"] = p.rank();
  j["mu"] = p.mu();
  j["l_f"] = p.l_f();
  j["a"] = matrix_to_json(p.a);
  j["b"] = vector_to_json(p.b);
  j["x_particular"] = vector_to_json(p.x_particular);
  j["row_basis"] = matrix_to_json(p.row_basis);
  j["spectrum"] = vector_to_json(p.spectrum);
  return j;
}

PlLeastSquaresProblem pl_least_squares_from_fixture(const json& j) {
  expect_kind(j, ProblemKind::PLLeastSquares);
  PlLeastSquaresProblem p;
  p.seed = j.at("seed").get<std::uint64_t>();
  p.a = matrix_from_json(j.at("a"));
  p.b = vector_from_json(j.at("b"));
  p.x_particular = vector_from_json(j.at("x_particular"));
  p.row_basis = matrix_from_json(j.at("row_basis"));
  p.spectrum = vector_from_json(j.at("spectrum"));
  return p;
}

json to_fixture(const ReddiDriftProblem& p) {
  json j = header(ProblemKind::ReddiDrift, 0);
  j["c"] = p.c;
  j["p"] = p.p;
  j["mean_grad"] = p.mean_grad();
  return j;
}

ReddiDriftProblem reddi_drift_from_fixture(const json& j) {
  expect_kind(j, ProblemKind::ReddiDrift);
  return make_reddi_drift(j.at("c").get<double>(), j.at("p").get<double>());
}

json to_fixture(const SaddleProblem& p) {
  json j = header(p.kind, p.seed);
  j["d"] = p.dim_x();
  j["d_prime"] = p.dim_y();
  j["lambda"] = p.lambda;
  j["pl_lambda"] = p.pl_lambda;
  j["l_f"] = p.l_f;
  j["l_F"] = p.l_F;
  j["f_star"] = p.f_star;
  j["a"] = matrix_to_json(p.a);
  j["c"] = vector_to_json(p.c);
  j["b"] = matrix_to_json(p.b);
  j["y_map"] = matrix_to_json(p.y_map);
  j["dual_basis"] = matrix_to_json(p.dual_basis);
  j["x_star"] = vector_to_json(p.x_star);
  return j;
}

SaddleProblem saddle_from_fixture(const json& j) {
  const ProblemKind kind = fixture_kind(j);
  require_config(kind == ProblemKind::SaddleQuadratic || kind == ProblemKind::DualPLSaddle,
                 "fixture: expected a saddle problem");
  SaddleProblem p;
  p.kind = kind;
  p.seed = j.at("seed").get<std::uint64_t>();
  p.lambda = j.at("lambda").get<double>();
  p.pl_lambda = j.at("pl_lambda").get<double>();
  p.l_f = j.at("l_f").get<double>();
  p.l_F = j.at("l_F").get<double>();
  p.f_star = j.at("f_star").get<double>();
  p.a = matrix_from_json(j.at("a"));
  p.c = vector_from_json(j.at("c"));
  p.b = matrix_from_json(j.at("b"));
  p.y_map = matrix_from_json(j.at("y_map"));
  p.dual_basis = matrix_from_json(j.at("dual_basis"));
  p.x_star = vector_from_json(j.at("x_star"));
  return p;
}

json to_fixture(const AucProblem& p) {
  json j = header(ProblemKind::AucMinMax, p.seed);
  j["d"] = p.dim();
  j["separation"] = p.separation;
  j["p"] = p.p;
  j["features"] = matrix_to_json(p.features);
  j["labels"] = p.labels;
  return j;
}

AucProblem auc_from_fixture(const json& j) {
  expect_kind(j, ProblemKind::AucMinMax);
  AucProblem p;
  p.seed = j.at("seed").get<std::uint64_t>();
  p.separation = j.at("separation").get<double>();
  p.features = matrix_from_json(j.at("features"));
  p.labels = j.at("labels").get<std::vector<int>>();
  require_config(p.labels.size() == static_cast<std::size_t>(p.features.rows()),
                 "fixture: label count mismatch");
  std::size_t pos = 0;
  for (int l : p.labels) pos += l == 1 ? 1 : 0;
  require_config(pos > 0 && pos < p.labels.size(), "auc_minmax: degenerate single-class data");
  p.p = static_cast<double>(pos) / static_cast<double>(p.labels.size());
  return p;
}

json to_fixture(const BilevelQuadraticProblem& p) {
  json j = header(ProblemKind::BilevelQuadratic, p.seed);
  const BilevelQuadraticOptions& o = p.options;
  j["d"] = p.dim_x();
  j["d_prime"] = p.dim_y();
  j["options"] = {{"c_gyy", o.c_gyy},         {"h_max_ratio", o.h_max_ratio},
                  {"b_norm", o.b_norm},       {"c_norm", o.c_norm},
                  {"alpha", o.alpha},         {"target_norm", o.target_norm},
                  {"y_radius", o.y_radius},   {"sigma2", o.sigma2}};
  const BilevelConstants& c = p.constants;
  j["constants"] = {{"lambda", c.lambda}, {"c_fy", c.c_fy},   {"c_gxy", c.c_gxy},
                    {"c_gyy", c.c_gyy},   {"l_fx", c.l_fx},   {"l_fy", c.l_fy},
                    {"l_gy", c.l_gy},     {"l_gxy", c.l_gxy}, {"l_gyy", c.l_gyy},
                    {"l_y", c.l_y},       {"sigma2", c.sigma2}};
  j["l_F"] = p.l_F;
  j["f_star"] = p.f_star;
  j["h"] = matrix_to_json(p.h);
  j["b"] = matrix_to_json(p.b);
  j["c"] = vector_to_json(p.c);
  j["y_target"] = vector_to_json(p.y_target);
  j["x_star"] = vector_to_json(p.x_star);
  return j;
}

BilevelQuadraticProblem bilevel_quadratic_from_fixture(const json& j) {
  expect_kind(j, ProblemKind::BilevelQuadratic);
  BilevelQuadraticProblem p;
  p.seed = j.at("seed").get<std::uint64_t>();
  const json& o = j.at("options");
  p.options.c_gyy = o.at("c_gyy").get<double>();
  p.options.h_max_ratio = o.at("h_max_ratio").get<double>();
  p.options.b_norm = o.at("b_norm").get<double>();
  p.options.c_norm = o.at("c_norm").get<double>();
  p.options.alpha = o.at("alpha").get<double>();
  p.options.target_norm = o.at("target_norm").get<double>();
  p.options.y_radius = o.at("y_radius").get<double>();
  p.options.sigma2 = o.at("sigma2").get<double>();
  const json& c = j.at("constants");
  BilevelConstants& k = p.constants;
  k.lambda = c.at("lambda").get<double>();
  k.c_fy = c.at("c_fy").get<double>();
  k.c_gxy = c.at("c_gxy").get<double>();
  k.c_gyy = c.at("c_gyy").get<double>();
  k.l_fx = c.at("l_fx").get<double>();
  k.l_fy = c.at("l_fy").get<double>();
  k.l_gy = c.at("l_gy").get<double>();
  k.l_gxy = c.at("l_gxy").get<double>();
  k.l_gyy = c.at("l_gyy").get<double>();
  k.l_y = c.at("l_y").get<double>();
  k.sigma2 = c.at("sigma2").get<double>();
  p.l_F = j.at("l_F").get<double>();
  p.f_star = j.at("f_star").get<double>();
  p.h = matrix_from_json(j.at("h"));
  p.b = matrix_from_json(j.at("b"));
  p.c = vector_from_json(j.at("c"));
  p.y_target = vector_from_json(j.at("y_target"));
  p.x_star = vector_from_json(j.at("x_star"));
  return p;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require_config(static_cast<bool>(in), "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  require_config(static_cast<bool>(out), "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  require_config(static_cast<bool>(out), "cannot write '" + path + "'");
}

}  // namespace semaopt
