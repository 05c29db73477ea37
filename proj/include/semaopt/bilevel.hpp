#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "semaopt/oracle.hpp"
#include "semaopt/rng.hpp"
#include "semaopt/scalers.hpp"
#include "semaopt/sema.hpp"
#include "semaopt/trajectory.hpp"

namespace semaopt {

using PairMatrixFn = std::function<Matrix(const Vector&, const Vector&)>;
using PairVectorFn = std::function<Vector(const Vector&, const Vector&)>;

/// Bilevel oracle plus the closed-form handles used for metrics and the
/// debug modes.
struct BilevelModel {
  BilevelOracle oracle;
  VectorFn hypergrad;       ///< exact grad F(x)
  VectorFn y_star;          ///< lower-level solution
  ScalarFn F;
  PairVectorFn grad_fx;     ///< exact partials, used by the exact-inverse mode
  PairVectorFn grad_fy;
  PairMatrixFn hess_xy;     ///< d x d'
  PairMatrixFn hess_yy;     ///< d' x d'
  std::function<Vector(const Vector&)> project_y;  ///< projection onto Y
};

/// Exact hypergradient grad_x f - g_xy [g_yy]^{-1} grad_y f at y = y*(x).
Vector hypergradient_exact(const BilevelModel& model, const Vector& x);

struct SmbConfig {
  double gamma = 1.0;
  double eta_x = 0.0;
  double eta_y = 0.0;
  std::size_t T = 0;
  int k = 1;
  NeumannIndexing indexing = NeumannIndexing::ZeroBased;
  /// Replace the Neumann draw by the exact inverse of g_yy(x_t, y_t).
  bool exact_inverse = false;
  /// Hold y at y*(x_t) instead of running the lower-level iteration.
  bool exact_lower = false;
  /// Optional coordinate-wise adaptive scaling of the x step.
  std::optional<ScalerKind> scaler;
  double g0 = 0.0;
  std::size_t dense_limit = 100000;
};

/// Constants of the momentum bilevel schedule.
struct SmbConstants {
  double c0 = 0.0;
  double c1 = 0.0;
  double l_F = 0.0;
  double k_real = 0.0;  ///< real-valued lower bound on the series length
};

SmbConstants smb_constants(const BilevelConstants& c, double eps, int k);
/// (C_gyy / (2 lambda)) ln(64 C_gxy^2 / (lambda^2 eps^2)).
double smb_k_bound(const BilevelConstants& c, double eps);

struct SmbSchedule {
  SmbConfig cfg;
  SmbConstants constants;
};

SmbSchedule make_smb_schedule(double eps, const BilevelConstants& c, double delta_f,
                              double delta_z0);

struct BilevelResult {
  /// delta = ||z_{t+1} - grad F(x_t)||^2, delta_y = ||y_t - y*(x_t)||^2,
  /// objective = F(x_t).
  Trajectory trajectory;
  Vector x_out;
  Vector y_out;
  std::size_t tau = 0;
  Vector x_last;
  Vector y_last;
  Vector z_last;
  double final_delta = kNotAvailable;  ///< ||z_{T+1} - grad F(x_T)||^2
};

struct BilevelStepInfo {
  std::size_t t = 0;
  const Vector* x = nullptr;
  const Vector* y = nullptr;
  const Vector* z = nullptr;  ///< z_{t+1}
  const Vector* x_next = nullptr;
};

using BilevelObserver = std::function<void(const BilevelStepInfo&)>;

/// One draw of O_fx - O_gxy h O_fy at (x, y).
Vector smb_composite_sample(const BilevelModel& model, const SmbConfig& cfg, const Vector& x,
                            const Vector& y, Rng& rng);

BilevelResult smb_run(const BilevelModel& model, const SmbConfig& cfg, const Vector& x0,
                      const Vector& y0, Rng& rng, const BilevelObserver& observer = {});

struct SbmaConfig {
  double gamma = 1.0;
  double eta_x = 0.0;
  double eta_y = 0.0;
  std::size_t T = 0;
  int k = 1;
  /// Scale of the Neumann factors (the per-sample Lipschitz constant of grad_y g).
  double l_gy = 1.0;
  double lambda = 1.0;
  double c_fy = 1.0;    ///< radius for v
  double c_gxy = 1.0;   ///< spectral-norm radius for V
  NeumannIndexing indexing = NeumannIndexing::ZeroBased;
  bool exact_lower = false;
  std::size_t dense_limit = 100000;
};

struct SbmaConstants {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;
  double k_real = 0.0;
  int fixed_point_iterations = 0;
};

/// Initial errors consumed by the projected-estimator schedule.
struct SbmaInit {
  double delta_f = 0.0;
  double delta_y0 = 0.0;
  double d_fx0 = 0.0;
  double d_fy0 = 0.0;
  double d_gxy0 = 0.0;
  double d_gyy0 = 0.0;
};

struct SbmaSchedule {
  SbmaConfig cfg;
  SbmaConstants constants;
};

/// gamma and k are coupled through C5 and solved by fixed-point iteration.
SbmaSchedule make_sbma_schedule(double eps, const BilevelConstants& c, const SbmaInit& init);

BilevelResult sbma_run(const BilevelModel& model, const SbmaConfig& cfg, const Vector& x0,
                       const Vector& y0, Rng& rng, const BilevelObserver& observer = {});

/// Mean of ||z_0 - grad F(x0)||^2 over n composite draws at (x0, y0).
double estimate_delta_z0(const BilevelModel& model, const SmbConfig& cfg, const Vector& x0,
                         const Vector& y0, std::size_t n, Rng& rng);

/// Monte Carlo estimate of the SBMA initial errors at (x0, y0).
SbmaInit estimate_sbma_init(const BilevelModel& model, const Vector& x0, const Vector& y0,
                            int k, std::size_t n, Rng& rng);

}  // namespace semaopt
