#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semaopt/problems/common.hpp"
#include "semaopt/scalers.hpp"

namespace semaopt {

/// Problem construction parameters. Keys that do not apply to `kind` are
/// ignored; `fixture` loads a serialized instance instead of building one.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::Quadratic;
  std::uint64_t seed = 1;
  int dim = 10;
  int dim_y = 5;
  int rank = 6;
  double cond = 10.0;
  double lambda = 1.0;
  /// Oracle noise level: per-coordinate standard deviation for the
  /// minimization problems, total standard deviation for the saddle and
  /// bilevel problems. Unset means the problem's default (1, 0.3, 0.1, 0.1,
  /// sqrt(0.001)); the AUC and drift problems sample data instead.
  std::optional<double> sigma;
  double clip = std::numeric_limits<double>::infinity();
  std::string oracle = "gaussian";
  double c = 2.0;
  double p = 0.4;
  int n_pos = 200;
  int n_neg = 200;
  double separation = 3.0;
  /// x0 is drawn at objective gap `start_gap` from stream `start_seed`
  /// (for bilevel problems `start_gap` is ||x0||); a negative gap starts at
  /// the origin. The AUC and drift problems always start at the origin.
  double start_gap = 0.25;
  std::uint64_t start_seed = 7;
  std::optional<std::string> fixture;
};

enum class SolverType { Minimize, MinMax, Bilevel };

std::string to_string(SolverType type);
SolverType solver_type_for(ProblemKind kind);

struct SolverSpec {
  SolverType type = SolverType::Minimize;
  /// asa | stagewise (minimize), pdsm | pdada (minmax), smb | sbma (bilevel).
  std::string mode = "asa";
  ScalerKind scaler;
  double g0 = 0.0;
  /// Oracle sup-norm bound G behind the scale bounds; required for the
  /// analytic schedules of Adam, AMSGrad, AdaFom and Adam+.
  std::optional<double> g_bound;
  bool carry_u = false;
  bool exact_inverse = false;
  bool exact_lower = false;
};

struct ScheduleSpec {
  /// theorem | decreasing | explicit. "theorem" picks the constant schedule
  /// for asa, the stagewise one for stagewise, and the dedicated schedules
  /// of the min-max and bilevel solvers.
  std::string kind = "theorem";
  double eps = 0.2;
  double gamma = 1.0;
  double eta = 0.0;
  double eta_y = 0.0;
  std::size_t T = 0;
  int k = 1;
  /// Stagewise: eps = eps0 / ratio when ratio > 0, else `eps`.
  double ratio = 0.0;
};

struct RunSpec {
  ProblemSpec problem;
  SolverSpec solver;
  ScheduleSpec schedule;
  std::vector<std::uint64_t> seeds{0};
  std::string output = "semaopt-out";
  std::size_t dense_limit = 100000;
  /// Rate fit range for the summary; t_max <= 0 means the run length.
  double fit_t_min = 10.0;
  double fit_t_max = 0.0;
};

/// Canonical JSON form. Unknown keys and unresolved tags are ConfigErrors.
RunSpec run_spec_from_json(const nlohmann::json& j);
nlohmann::json run_spec_to_json(const RunSpec& spec);

/// Flat text form: one `a.b = value` assignment per line, `#` starts a
/// comment, values are JSON literals or bare strings.
nlohmann::json parse_flat_config(const std::string& text);

/// Reads a spec file, JSON when the first non-blank character is '{', the
/// flat form otherwise.
RunSpec load_run_spec(const std::string& path);

/// Seeds from SEMA_OPT_SEED_BASE, 0 when unset. Malformed values are a
/// ConfigError.
std::uint64_t seed_base_from_env();

}  // namespace semaopt
