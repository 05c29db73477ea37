#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "semaopt/problems/auc.hpp"
#include "semaopt/problems/bilevel_quadratic.hpp"
#include "semaopt/problems/pl_least_squares.hpp"
#include "semaopt/problems/quadratic.hpp"
#include "semaopt/problems/reddi_drift.hpp"
#include "semaopt/problems/saddle.hpp"

namespace semaopt {

inline constexpr int kFixtureVersion = 1;

/// Matrices are stored as {"rows", "cols", "data"} with data in row-major order.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

/// Self-describing records: {"format": "semaopt-fixture", "version", "kind",
/// "seed", ...fields}.
nlohmann::json to_fixture(const QuadraticProblem& p);
nlohmann::json to_fixture(const PlLeastSquaresProblem& p);
nlohmann::json to_fixture(const ReddiDriftProblem& p);
nlohmann::json to_fixture(const SaddleProblem& p);
nlohmann::json to_fixture(const AucProblem& p);
nlohmann::json to_fixture(const BilevelQuadraticProblem& p);

QuadraticProblem quadratic_from_fixture(const nlohmann::json& j);
PlLeastSquaresProblem pl_least_squares_from_fixture(const nlohmann::json& j);
ReddiDriftProblem reddi_drift_from_fixture(const nlohmann::json& j);
SaddleProblem saddle_from_fixture(const nlohmann::json& j);
AucProblem auc_from_fixture(const nlohmann::json& j);
BilevelQuadraticProblem bilevel_quadratic_from_fixture(const nlohmann::json& j);

/// Checks the format tag and version and returns the kind.
ProblemKind fixture_kind(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace semaopt
