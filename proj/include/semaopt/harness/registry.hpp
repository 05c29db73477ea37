#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "semaopt/bilevel.hpp"
#include "semaopt/harness/config.hpp"
#include "semaopt/minimize.hpp"
#include "semaopt/minmax.hpp"
#include "semaopt/problems/fixture.hpp"

namespace semaopt {

struct ProblemInfo {
  ProblemKind kind;
  SolverType solver;
  std::string_view summary;
};

const std::vector<ProblemInfo>& problem_list();

using ProblemInstance = std::variant<QuadraticProblem, PlLeastSquaresProblem, ReddiDriftProblem,
                                     SaddleProblem, AucProblem, BilevelQuadraticProblem>;

/// Builds the instance described by `spec`, or loads `spec.fixture`.
ProblemInstance build_problem(const ProblemSpec& spec);
nlohmann::json instance_to_fixture(const ProblemInstance& instance);

/// Everything a solver needs, built once per spec and shared read-only by
/// the seed workers.
struct PreparedProblem {
  ProblemInstance instance;
  SolverType type = SolverType::Minimize;
  std::optional<GradOracle> oracle;
  ScalarFn objective;
  double f_star = 0.0;
  double l_f = 0.0;
  std::optional<double> mu;
  std::optional<MinMaxModel> minmax;
  std::optional<MinMaxMeta> minmax_meta;
  std::optional<BilevelModel> bilevel;
  Vector x0;
  Vector y0;
};

PreparedProblem prepare_problem(const ProblemSpec& spec);

}  // namespace semaopt
