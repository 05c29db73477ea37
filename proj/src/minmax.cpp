#include "semaopt/minmax.hpp"

#include <algorithm>
#include <cmath>

#include "semaopt/linalg.hpp"
#include "semaopt/sema.hpp"

namespace semaopt {

Vector DualSet::project(const Vector& y) const {
  switch (kind) {
    case Kind::Unconstrained: return y;
    case Kind::Ball: return project_ball(y, radius);
    case Kind::Box: return project_box(y, lo, hi);
  }
  return y;
}

void MinMaxConfig::validate() const {
  require_config(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  require_config(eta_x >= 0.0 && eta_y >= 0.0, "step sizes must be nonnegative");
  if (dual.kind == DualSet::Kind::Ball) require_config(dual.radius > 0.0, "dual ball radius must be positive");
  if (dual.kind == DualSet::Kind::Box) require_config(dual.lo <= dual.hi, "dual box needs lo <= hi");
}

MinMaxConfig make_minmax_schedule(double eps, const MinMaxMeta& meta, ScaleBounds bounds) {
  require_config(eps > 0.0, "eps must be positive");
  require_config(meta.lambda > 0.0, "lambda must be positive");
  require_config(meta.l_f > 0.0 && meta.l_F > 0.0, "L_f and L_F must be positive");
  require_config(bounds.lower > 0.0 && bounds.lower <= bounds.upper,
                 "scale bounds must satisfy 0 < c_l <= c_u");
  const double cl = bounds.lower;
  const double cu = bounds.upper;
  const double e2 = eps * eps;
  const double lf2 = meta.l_f * meta.l_f;
  MinMaxConfig cfg;
  cfg.gamma = meta.sigma2 > 0.0 ? std::min(1.0, cl * e2 / (40.0 * cu * meta.sigma2)) : 1.0;
  const double cap = meta.dual_pl ? meta.lambda / (2.0 * lf2)
                                  : std::min(meta.lambda / lf2, meta.lambda);
  const double eta_y = meta.sigma2 > 0.0 ? cl * meta.lambda * e2 / (400.0 * cu * lf2 * meta.sigma2)
                                         : cap;
  cfg.eta_y = std::min(eta_y, cap);
  cfg.eta_x = std::sqrt(cl / (cu * cu * cu)) *
              std::min(cfg.eta_y * meta.lambda / (48.0 * meta.l_f * meta.kappa()),
                       cfg.gamma / (8.0 * meta.l_F));
  const double t1 = 10.0 * meta.delta_f / (cfg.eta_x * cl * e2);
  const double t2 = 10.0 * cu * meta.delta_x0 / (cfg.gamma * cl * e2);
  const double t3 = 200.0 * cu * lf2 / (cl * cfg.eta_y * meta.lambda * e2);
  const double T = std::max({t1, t2, t3});
  require_config(std::isfinite(T), "min-max schedule produced a non-finite horizon");
  cfg.T = static_cast<std::size_t>(std::ceil(T));
  return cfg;
}

PdResult pd_run(const MinMaxModel& model, const MinMaxConfig& cfg, const Vector& x0,
                const Vector& y0, Rng& rng, const PdObserver& observer) {
  cfg.validate();
  const MinMaxOracle& oracle = model.oracle;
  require_config(x0.size() == oracle.dim_x && y0.size() == oracle.dim_y,
                 "pd_run: initial point dimension mismatch");
  ScalerKind kind = cfg.scaler;
  double g0 = cfg.g0;
  if (cfg.pdsm) {
    kind = ScalerKind{};
    g0 = 0.0;
  }
  Rng tau_rng = rng.split(0x7461755FULL);
  PdResult out;
  out.tau = static_cast<std::size_t>(tau_rng.uniform_index(cfg.T + 1));
  out.trajectory = Trajectory(cfg.dense_limit);

  Vector x = x0;
  Vector y = cfg.dual.project(y0);
  Vector v = oracle.sample(x, y, rng).first;
  ScalerState u = make_scaler_state(kind, oracle.dim_x, g0);
  double sum_xy = 0.0;

  for (std::size_t t = 0; t <= cfg.T; ++t) {
    if (t == out.tau) {
      out.x_out = x;
      out.y_out = y;
    }
    const auto [gx, gy] = oracle.sample(x, y, rng);
    sema_update(v, cfg.gamma, gx);
    scaler_update(u, kind, gx, v);
    const Vector s = step_scale(u);

    TrajectoryRecord rec;
    rec.t = t;
    rec.eta = cfg.eta_x;
    rec.gamma = cfg.gamma;
    if (model.grad_F) {
      const Vector g = model.grad_F(x);
      rec.grad_norm_sq = g.squaredNorm();
      rec.delta = (v - g).squaredNorm();
    }
    if (model.y_star) rec.delta_y = (y - model.y_star(x)).squaredNorm();
    if (oracle.grad_x) sum_xy += (v - (*oracle.grad_x)(x, y)).squaredNorm();
    const bool force = t == cfg.T;
    if (model.f && (force || out.trajectory.wants(t))) rec.objective = model.f(x, y);
    out.trajectory.add(rec, force);

    Vector x_next = x - cfg.eta_x * s.cwiseProduct(v);
    Vector y_next = cfg.dual.project(y + cfg.eta_y * gy);
    if (observer) observer(PdStepInfo{t, &x, &y, &x_next, &y_next, &v, &s});
    x = std::move(x_next);
    y = std::move(y_next);
    const double n = std::sqrt(x.squaredNorm() + y.squaredNorm());
    if (!std::isfinite(n) || n > kDivergenceRadius) throw DivergenceError(t + 1, out.trajectory);
  }
  if (oracle.grad_x) out.avg_delta_xy = sum_xy / static_cast<double>(cfg.T + 1);
  out.x_last = x;
  out.y_last = y;
  out.v_last = v;
  return out;
}

DualGap dual_gap_probe(const MinMaxModel& model, const Vector& x, const Vector& y) {
  if (!model.y_star) throw ConfigError("probe unavailable");
  DualGap gap;
  gap.delta_y = (y - model.y_star(x)).squaredNorm();
  gap.has_grad_F = static_cast<bool>(model.grad_F);
  return gap;
}

}  // namespace semaopt
