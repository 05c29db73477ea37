#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "semaopt/minimize.hpp"
#include "semaopt/oracle.hpp"
#include "semaopt/rng.hpp"
#include "semaopt/scalers.hpp"
#include "semaopt/trajectory.hpp"

namespace semaopt {

/// Feasible set for the dual variable.
struct DualSet {
  enum class Kind { Unconstrained, Ball, Box };
  Kind kind = Kind::Unconstrained;
  double radius = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  Vector project(const Vector& y) const;
  static DualSet unconstrained() { return {}; }
  static DualSet ball(double r) { return {Kind::Ball, r, 0.0, 0.0}; }
  static DualSet box(double lo, double hi) { return {Kind::Box, 0.0, lo, hi}; }
};

using PairFn = std::function<double(const Vector&, const Vector&)>;

/// Oracle plus the closed-form handles used for metrics.
struct MinMaxModel {
  MinMaxOracle oracle;
  VectorFn grad_F;  ///< gradient of F(x) = max_y f(x, y)
  VectorFn y_star;  ///< designated maximizer y*(x)
  ScalarFn F;
  PairFn f;
};

struct MinMaxMeta {
  double lambda = 0.0;
  double l_f = 0.0;   ///< Lipschitz constant of the joint gradient of f
  double l_F = 0.0;   ///< smoothness of F
  double sigma2 = 0.0;
  double delta_f = 0.0;
  double delta_x0 = 0.0;
  bool dual_pl = false;

  double kappa() const { return l_f / lambda; }
};

struct MinMaxConfig {
  double gamma = 1.0;
  double eta_x = 0.0;
  double eta_y = 0.0;
  std::size_t T = 0;
  DualSet dual;
  /// PDSM uses the identity scale (SHB with G0 = 0); PDAda uses `scaler`.
  bool pdsm = true;
  ScalerKind scaler;
  double g0 = 0.0;
  std::size_t dense_limit = 100000;

  void validate() const;
};

/// Step sizes and horizon from the min-max rate bounds; the dual
/// step is capped at min(lambda/L_f^2, lambda), or lambda/(2 L_f^2) for
/// dual-side PL problems.
MinMaxConfig make_minmax_schedule(double eps, const MinMaxMeta& meta, ScaleBounds bounds);

struct PdResult {
  /// delta = ||v_{t+1} - grad F(x_t)||^2, delta_y = ||y_t - y*(x_t)||^2,
  /// objective = f(x_t, y_t).
  Trajectory trajectory;
  /// Running mean of ||v_{t+1} - grad_x f(x_t, y_t)||^2.
  double avg_delta_xy = kNotAvailable;
  Vector x_out;
  Vector y_out;
  std::size_t tau = 0;
  Vector x_last;
  Vector y_last;
  Vector v_last;
};

struct PdStepInfo {
  std::size_t t = 0;
  const Vector* x = nullptr;
  const Vector* y = nullptr;
  const Vector* x_next = nullptr;
  const Vector* y_next = nullptr;
  const Vector* v = nullptr;
  const Vector* scale = nullptr;
};

using PdObserver = std::function<void(const PdStepInfo&)>;

/// Primal-dual stochastic momentum / adaptive method.
PdResult pd_run(const MinMaxModel& model, const MinMaxConfig& cfg, const Vector& x0,
                const Vector& y0, Rng& rng, const PdObserver& observer = {});

struct DualGap {
  double delta_y = 0.0;
  bool has_grad_F = false;
};

/// ||y - y*(x)||^2 for the model's designated selection.
DualGap dual_gap_probe(const MinMaxModel& model, const Vector& x, const Vector& y);

}  // namespace semaopt
