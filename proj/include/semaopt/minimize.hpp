#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "semaopt/oracle.hpp"
#include "semaopt/rng.hpp"
#include "semaopt/scalers.hpp"
#include "semaopt/trajectory.hpp"
#include "semaopt/types.hpp"

namespace semaopt {

/// Problem constants consumed by the analytic schedules.
struct MinimizeMeta {
  std::optional<double> sigma2;   ///< total oracle variance
  double c = 0.0;                 ///< relative variance constant
  std::optional<double> l_f;      ///< gradient Lipschitz constant L_F
  std::optional<double> delta_f;  ///< bound on F(x0) - F*
  std::optional<double> delta_0;  ///< bound on the initial tracking error
};

enum class ScheduleKind { Constant, Decreasing, Stagewise };

struct Stage {
  double eps = 0.0;
  double gamma = 1.0;
  double eta = 0.0;
  std::size_t T = 0;
};

struct Schedule {
  ScheduleKind kind = ScheduleKind::Constant;
  /// Constant: gamma, eta used at every step.
  double gamma = 1.0;
  double eta = 0.0;
  /// Loop runs t = 0..T (T + 1 oracle calls after the v0 draw).
  std::size_t T = 0;
  /// Decreasing: gamma_t = min(1, gamma_coeff / sqrt(t+1)),
  /// eta_t = min(eta_ratio * gamma_t, eta_cap).
  double gamma_coeff = 0.0;
  double eta_ratio = 0.0;
  double eta_cap = 0.0;
  /// Decreasing: the declared c was 0 and 1 was used instead.
  bool c_substituted = false;
  /// Stagewise.
  double eps0 = 0.0;
  double mu = 0.0;
  std::vector<Stage> stages;

  double gamma_at(std::size_t t) const;
  double eta_at(std::size_t t) const;
  std::size_t total_steps() const;
};

/// Constant momentum: gamma, eta and T from the constant-rate bounds.
Schedule make_schedule_constant(double eps, const MinimizeMeta& meta, ScaleBounds bounds);
/// Increasing momentum / decreasing step; `T` is the run length.
Schedule make_schedule_decreasing(const MinimizeMeta& meta, ScaleBounds bounds, std::size_t T);
/// Double loop for mu-PL objectives; eps0 = max(delta_f, delta_0).
Schedule make_schedule_stagewise(double mu, double eps, const MinimizeMeta& meta,
                                 ScaleBounds bounds);
/// Explicit schedule.
Schedule make_schedule_explicit(double gamma, double eta, std::size_t T);

/// Mean of ||O(x0) - grad F(x0)||^2 over n draws.
double estimate_delta0(const GradOracle& oracle, const Vector& x0, std::size_t n, Rng& rng);

/// Read-only view of one update, handed to observers after x_{t+1} is formed.
struct StepInfo {
  std::size_t t = 0;
  const Vector* x = nullptr;       ///< x_t
  const Vector* x_next = nullptr;  ///< x_{t+1}
  const Vector* v = nullptr;       ///< v_{t+1}
  const Vector* scale = nullptr;   ///< s_t
  double eta = 0.0;
  double gamma = 0.0;
};

using StepObserver = std::function<void(const StepInfo&)>;

struct AsaOptions {
  /// Initial moving average; defaults to one oracle draw at x0.
  std::optional<Vector> v0;
  /// Initial scaler state; defaults to a fresh one.
  std::optional<ScalerState> u0;
  /// Objective value, evaluated at logged steps only.
  ScalarFn objective;
  std::size_t dense_limit = 100000;
  /// Counts steps whose scale leaves [c_l, c_u] (relative tolerance 1e-12).
  std::optional<ScaleBounds> check_bounds;
  /// Adam+: throw VerificationError if ||v|| exceeds this bound.
  std::optional<double> adamplus_bound;
  /// Added to t when evaluating the schedule and labelling records.
  std::size_t t_offset = 0;
  StepObserver observer;
};

struct RunResult {
  Trajectory trajectory;
  Vector x_out;
  Vector v_out;
  std::size_t tau = 0;
  Vector x_last;  ///< x_{T+1}
  Vector v_last;  ///< v_{T+1}
  ScalerState scaler_state;
  double scale_min = 0.0;
  double scale_max = 0.0;
  std::size_t bound_violations = 0;
};

/// Adam-style algorithm: v <- SEMA, u <- scaler, x <- x - eta v / (sqrt(u) + G0),
/// for t = 0..T, returning (x_tau, v_tau) with tau uniform on {0..T}.
/// The oracle consumes `rng`; tau comes from an independent child stream.
RunResult asa_run(const GradOracle& oracle, const Vector& x0, const ScalerKind& scaler, double g0,
                  const Schedule& schedule, Rng& rng, const AsaOptions& opts = {});

struct StageResult {
  Stage stage;
  Vector x_out;
  Vector v_out;
  double objective_out = kNotAvailable;
};

struct StagewiseResult {
  std::vector<StageResult> stages;
  Vector x_final;
  Trajectory trajectory;
};

/// Runs each stage as an ASA call warm-started from the previous stage's
/// (x_tau, v_tau). The scaler state is reset per stage unless `carry_u`.
StagewiseResult stagewise_run(const GradOracle& oracle, const Vector& x0,
                              const ScalerKind& scaler, double g0, const Schedule& schedule,
                              Rng& rng, const ScalarFn& objective = {}, bool carry_u = false);

struct ShbEquivalenceReport {
  double max_deviation = 0.0;
  std::size_t first_divergent_step = 0;  ///< 0 when none
  std::size_t steps = 0;
};

/// Replays one sample stream through the moving-average form
///   v <- beta v + (1-beta) O, x <- x - eta v
/// and the heavy-ball form
///   w <- beta w - eta (1-beta) O, x <- x + w
/// with w_0 = -eta v_0, reporting the largest iterate gap.
ShbEquivalenceReport shb_equivalence_check(double eta, double beta, const GradOracle& oracle,
                                           const Vector& x0, std::size_t T, Rng& rng,
                                           double tol = 1e-10);

}  // namespace semaopt
