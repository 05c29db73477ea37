#include "semaopt/bilevel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semaopt/linalg.hpp"

namespace semaopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_div(double num, double den) { return den > 0.0 ? num / den : kInf; }

std::size_t ceil_horizon(double T) {
  require_config(std::isfinite(T), "bilevel schedule produced a non-finite horizon");
  return static_cast<std::size_t>(std::ceil(std::max(T, 0.0)));
}

Vector project_lower(const BilevelModel& model, const Vector& y) {
  return model.project_y ? model.project_y(y) : y;
}

void guard(const Vector& x, const Vector& y, std::size_t step, const Trajectory& traj) {
  const double n = std::sqrt(x.squaredNorm() + y.squaredNorm());
  if (!std::isfinite(n) || n > kDivergenceRadius) throw DivergenceError(step, traj);
}

Matrix neumann_at(const BilevelModel& model, const Vector& x, const Vector& y, int k, double scale,
                  double lambda, NeumannIndexing indexing, Rng& rng) {
  NeumannConfig cfg;
  cfg.k = k;
  cfg.c_gyy = scale;
  cfg.lambda = std::min(lambda, scale);
  cfg.indexing = indexing;
  const HessianSampler hs = [&](Rng& r) { return model.oracle.gyy(x, y, r); };
  return neumann_inverse_sample(hs, cfg, rng);
}

}  // namespace

Vector hypergradient_exact(const BilevelModel& model, const Vector& x) {
  if (!model.y_star || !model.grad_fx || !model.grad_fy || !model.hess_xy || !model.hess_yy)
    throw ConfigError("hypergradient_exact: closed forms unavailable");
  const Vector y = model.y_star(x);
  const Matrix hyy = model.hess_yy(x, y);
  const Vector w = hyy.ldlt().solve(model.grad_fy(x, y));
  return model.grad_fx(x, y) - model.hess_xy(x, y) * w;
}

double smb_k_bound(const BilevelConstants& c, double eps) {
  require_config(c.lambda > 0.0 && c.c_gyy >= c.lambda, "require 0 < lambda <= C_gyy");
  require_config(eps > 0.0, "eps must be positive");
  const double arg = 64.0 * c.c_gxy * c.c_gxy / (c.lambda * c.lambda * eps * eps);
  return arg > 0.0 ? c.c_gyy / (2.0 * c.lambda) * std::log(arg) : -kInf;
}

SmbConstants smb_constants(const BilevelConstants& c, double eps, int k) {
  require_config(c.lambda > 0.0, "lambda must be positive");
  const double l2 = c.lambda * c.lambda;
  const double l4 = l2 * l2;
  const double cfy2 = c.c_fy * c.c_fy;
  const double cgxy2 = c.c_gxy * c.c_gxy;
  const double s2 = c.sigma2;
  SmbConstants out;
  out.c0 = 2.0 * c.l_fx * c.l_fx + 6.0 * cfy2 * c.l_gxy * c.l_gxy / l2 +
           6.0 * cfy2 * cgxy2 * c.l_gyy * c.l_gyy / l4 + 6.0 * c.l_fy * c.l_fy * cgxy2 / l2;
  const double lf_core = 2.0 * c.l_fx * c.l_fx + 6.0 * cgxy2 * c.l_fy * c.l_fy / l2 +
                         6.0 * cgxy2 * c.l_gyy * c.l_gyy * cfy2 / l4 +
                         6.0 * c.l_gxy * c.l_gxy * cfy2 / l2;
  out.l_F = lf_core * (1.0 + c.l_y * c.l_y);
  const double kc = static_cast<double>(k) * static_cast<double>(k) / (c.c_gyy * c.c_gyy);
  out.c1 = 2.0 * s2 + 6.0 * s2 * kc * (cfy2 + s2) + 24.0 * cgxy2 * kc * (cfy2 + s2) +
           6.0 * cgxy2 * kc * s2;
  out.k_real = smb_k_bound(c, eps);
  return out;
}

SmbSchedule make_smb_schedule(double eps, const BilevelConstants& c, double delta_f,
                              double delta_z0) {
  require_config(eps > 0.0, "eps must be positive");
  require_config(c.lambda > 0.0 && c.c_gyy >= c.lambda, "require 0 < lambda <= C_gyy");
  const double k_real = smb_k_bound(c, eps);
  const int k = std::max(1, static_cast<int>(std::ceil(k_real)));
  SmbSchedule s;
  s.constants = smb_constants(c, eps, k);
  const SmbConstants& K = s.constants;
  require_config(K.c0 > 0.0 && K.c1 > 0.0 && K.l_F > 0.0, "bilevel constants must be positive");
  const double e2 = eps * eps;
  SmbConfig& cfg = s.cfg;
  cfg.k = k;
  cfg.gamma = std::min(1.0, e2 / (20.0 * K.c1));
  const double cap = std::min(c.lambda, safe_div(c.lambda, c.l_gy * c.l_gy));
  cfg.eta_y = std::min(safe_div(c.lambda * e2, 640.0 * K.c0 * c.sigma2), cap);
  cfg.eta_x = std::min(safe_div(cfg.eta_y * c.lambda, 32.0 * std::sqrt(K.c0) * c.l_y),
                       cfg.gamma / (8.0 * K.l_F));
  cfg.T = ceil_horizon(std::max({20.0 * delta_f / (cfg.eta_x * e2),
                                 20.0 * delta_z0 / (cfg.gamma * e2),
                                 320.0 * K.c0 / (cfg.eta_y * c.lambda * e2)}));
  return s;
}

Vector smb_composite_sample(const BilevelModel& model, const SmbConfig& cfg, const Vector& x,
                            const Vector& y, Rng& rng) {
  const BilevelOracle& o = model.oracle;
  Matrix h;
  if (cfg.exact_inverse) {
    if (!model.hess_yy) throw ConfigError("exact-inverse mode needs the exact lower Hessian");
    const Matrix hyy = model.hess_yy(x, y);
    h = hyy.ldlt().solve(Matrix::Identity(hyy.rows(), hyy.cols()));
  } else {
    h = neumann_at(model, x, y, cfg.k, o.constants.c_gyy, o.constants.lambda, cfg.indexing, rng);
  }
  const Vector fx = o.fx(x, y, rng);
  const Matrix gxy = o.gxy(x, y, rng);
  const Vector fy = o.fy(x, y, rng);
  return fx - gxy * (h * fy);
}

BilevelResult smb_run(const BilevelModel& model, const SmbConfig& cfg, const Vector& x0,
                      const Vector& y0, Rng& rng, const BilevelObserver& observer) {
  require_config(cfg.gamma > 0.0 && cfg.gamma <= 1.0, "gamma must lie in (0, 1]");
  require_config(cfg.k >= 1, "k must be at least 1");
  require_config(cfg.eta_x >= 0.0 && cfg.eta_y >= 0.0, "step sizes must be nonnegative");
  const BilevelOracle& o = model.oracle;
  require_config(x0.size() == o.dim_x && y0.size() == o.dim_y, "smb_run: dimension mismatch");
  if (cfg.exact_lower) require_config(static_cast<bool>(model.y_star), "exact lower level needs y*");

  Rng tau_rng = rng.split(0x7461755FULL);
  BilevelResult out;
  out.tau = static_cast<std::size_t>(tau_rng.uniform_index(cfg.T + 1));
  out.trajectory = Trajectory(cfg.dense_limit);

  Vector x = x0;
  Vector y = cfg.exact_lower ? model.y_star(x0) : project_lower(model, y0);
  Vector z = smb_composite_sample(model, cfg, x, y, rng);
  std::optional<ScalerState> u;
  if (cfg.scaler) u = make_scaler_state(*cfg.scaler, o.dim_x, cfg.g0);

  for (std::size_t t = 0; t <= cfg.T; ++t) {
    if (cfg.exact_lower) y = model.y_star(x);
    if (t == out.tau) {
      out.x_out = x;
      out.y_out = y;
    }
    const Vector comp = smb_composite_sample(model, cfg, x, y, rng);
    sema_update(z, cfg.gamma, comp);

    TrajectoryRecord rec;
    rec.t = t;
    rec.eta = cfg.eta_x;
    rec.gamma = cfg.gamma;
    if (model.hypergrad) {
      const Vector g = model.hypergrad(x);
      rec.grad_norm_sq = g.squaredNorm();
      rec.delta = (z - g).squaredNorm();
    }
    if (model.y_star) rec.delta_y = (y - model.y_star(x)).squaredNorm();
    const bool force = t == cfg.T;
    if (model.F && (force || out.trajectory.wants(t))) rec.objective = model.F(x);
    out.trajectory.add(rec, force);
    if (force) out.final_delta = rec.delta;

    Vector x_next;
    if (u) {
      scaler_update(*u, *cfg.scaler, comp, z);
      x_next = x - cfg.eta_x * step_scale(*u).cwiseProduct(z);
    } else {
      x_next = x - cfg.eta_x * z;
    }
    if (observer) observer(BilevelStepInfo{t, &x, &y, &z, &x_next});
    if (!cfg.exact_lower) y = project_lower(model, y - cfg.eta_y * o.gy(x, y, rng));
    x = std::move(x_next);
    guard(x, y, t + 1, out.trajectory);
  }
  out.x_last = x;
  out.y_last = y;
  out.z_last = z;
  return out;
}

SbmaSchedule make_sbma_schedule(double eps, const BilevelConstants& c, const SbmaInit& init) {
  require_config(eps > 0.0, "eps must be positive");
  require_config(c.lambda > 0.0, "lambda must be positive");
  require_config(c.l_gy >= c.lambda, "require lambda <= L_gy");
  const double l2 = c.lambda * c.lambda;
  const double l4 = l2 * l2;
  const double e2 = eps * eps;
  const double s2 = c.sigma2;
  SbmaSchedule s;
  SbmaConstants& K = s.constants;
  K.c0 = smb_constants(c, eps, 1).c0;
  K.c1 = 2.0;
  K.c2 = 6.0 * c.c_fy * c.c_fy / l2;
  K.c3 = 6.0 * c.c_fy * c.c_fy * c.c_gxy * c.c_gxy;
  K.c4 = 6.0 * c.c_gxy * c.c_gxy / l2;

  const auto k_bound = [&](double gamma) {
    const double arg = (4.0 / gamma) * (4.0 / c.lambda + 4.0 * gamma * gamma / c.lambda) / (c.lambda * e2);
    return c.l_gy / c.lambda * std::log(arg);
  };
  double gamma = std::min(1.0, e2 / (80.0 * s2 * (K.c1 + K.c2 + K.c3)));
  int k = 1;
  for (int it = 0; it < 200; ++it) {
    K.k_real = k_bound(gamma);
    k = std::max(1, static_cast<int>(std::ceil(K.k_real)));
    const double kc = static_cast<double>(k) * k / (c.l_gy * c.l_gy);
    K.c5 = 2.0 * gamma * gamma * (kc + 1.0 / l2);
    const double next = std::min(1.0, e2 / (80.0 * (s2 * (K.c1 + K.c2 + K.c3) + K.c4 * K.c5)));
    K.fixed_point_iterations = it + 1;
    if (std::abs(next - gamma) <= 1e-14 * gamma) {
      gamma = next;
      break;
    }
    gamma = next;
  }
  const double lip = K.c1 * c.l_fx * c.l_fx + K.c2 * c.l_fy * c.l_fy + K.c3 * c.l_gxy * c.l_gxy +
                     K.c4 * c.l_gyy * c.l_gyy / l4;
  SbmaConfig& cfg = s.cfg;
  cfg.gamma = gamma;
  cfg.k = k;
  cfg.l_gy = c.l_gy;
  cfg.lambda = c.lambda;
  cfg.c_fy = c.c_fy;
  cfg.c_gxy = c.c_gxy;
  const double cap = std::min(c.lambda, safe_div(c.lambda, c.l_gy * c.l_gy));
  cfg.eta_y = std::min(safe_div(c.lambda * e2, (80.0 * K.c0 + 1600.0 * lip) * s2), cap);
  const double root = std::sqrt(K.c0 + K.c1 + K.c2 + K.c3 + K.c4 * c.l_gyy * c.l_gyy / l4);
  const double lip2 = K.c1 * c.l_fx * c.l_fx + K.c2 * c.l_fy * c.l_fy + K.c3 * c.l_gxy * c.l_gxy +
                      2.0 * K.c4 * c.l_gyy * c.l_gyy / l4;
  cfg.eta_x = std::min(safe_div(cfg.eta_y * c.lambda, 56.0 * root * c.l_y),
                       safe_div(gamma, 8.0 * (1.0 + c.l_y) * lip2));
  const double t1 = 20.0 * init.delta_f / (cfg.eta_x * e2);
  const double t2 = 800.0 * (K.c0 + lip) * init.delta_y0 / (cfg.eta_y * c.lambda * e2);
  const double t3 = 40.0 / e2 *
                    (K.c1 * init.d_fx0 + K.c2 * init.d_fy0 + K.c3 * init.d_gxy0 + K.c4 * init.d_gyy0) /
                    gamma;
  cfg.T = ceil_horizon(std::max({t1, t2, t3}));
  return s;
}

BilevelResult sbma_run(const BilevelModel& model, const SbmaConfig& cfg, const Vector& x0,
                       const Vector& y0, Rng& rng, const BilevelObserver& observer) {
  require_config(cfg.gamma > 0.0 && cfg.gamma <= 1.0, "gamma must lie in (0, 1]");
  require_config(cfg.k >= 1, "k must be at least 1");
  require_config(cfg.lambda > 0.0 && cfg.c_fy > 0.0 && cfg.c_gxy > 0.0 && cfg.l_gy > 0.0,
                 "projection radii must be positive");
  const BilevelOracle& o = model.oracle;
  require_config(x0.size() == o.dim_x && y0.size() == o.dim_y, "sbma_run: dimension mismatch");
  const double inv_lambda = 1.0 / cfg.lambda;
  const double slack = 1.0 + 1e-9;

  Rng tau_rng = rng.split(0x7461755FULL);
  BilevelResult out;
  out.tau = static_cast<std::size_t>(tau_rng.uniform_index(cfg.T + 1));
  out.trajectory = Trajectory(cfg.dense_limit);

  Vector x = x0;
  Vector y = cfg.exact_lower ? model.y_star(x0) : project_lower(model, y0);
  Vector u = o.fx(x, y, rng);
  Vector v = project_ball(o.fy(x, y, rng), cfg.c_fy);
  Matrix V = project_spectral_norm(o.gxy(x, y, rng), cfg.c_gxy);
  Matrix H = project_spectral_norm(
      neumann_at(model, x, y, cfg.k, cfg.l_gy, cfg.lambda, cfg.indexing, rng), inv_lambda);

  for (std::size_t t = 0; t <= cfg.T; ++t) {
    if (cfg.exact_lower) y = model.y_star(x);
    if (t == out.tau) {
      out.x_out = x;
      out.y_out = y;
    }
    sema_update(u, cfg.gamma, o.fx(x, y, rng));
    sema_update(v, cfg.gamma, o.fy(x, y, rng));
    v = project_ball(v, cfg.c_fy);
    sema_update(V, cfg.gamma, o.gxy(x, y, rng));
    double v_norm = 0.0;
    V = project_spectral_norm(V, cfg.c_gxy, &v_norm);
    const Matrix h = neumann_at(model, x, y, cfg.k, cfg.l_gy, cfg.lambda, cfg.indexing, rng);
    sema_update(H, cfg.gamma, h);
    double h_norm = 0.0;
    H = project_spectral_norm(H, inv_lambda, &h_norm);
    if (v.norm() > cfg.c_fy * slack || v_norm > cfg.c_gxy * slack || h_norm > inv_lambda * slack)
      throw InternalError("sbma: projected estimator outside its bound at step " +
                          std::to_string(t));
    const Vector z = u - V * (H * v);

    TrajectoryRecord rec;
    rec.t = t;
    rec.eta = cfg.eta_x;
    rec.gamma = cfg.gamma;
    if (model.hypergrad) {
      const Vector g = model.hypergrad(x);
      rec.grad_norm_sq = g.squaredNorm();
      rec.delta = (z - g).squaredNorm();
    }
    if (model.y_star) rec.delta_y = (y - model.y_star(x)).squaredNorm();
    const bool force = t == cfg.T;
    if (model.F && (force || out.trajectory.wants(t))) rec.objective = model.F(x);
    out.trajectory.add(rec, force);
    if (force) {
      out.final_delta = rec.delta;
      out.z_last = z;
    }

    Vector x_next = x - cfg.eta_x * z;
    if (observer) observer(BilevelStepInfo{t, &x, &y, &z, &x_next});
    if (!cfg.exact_lower) y = project_lower(model, y - cfg.eta_y * o.gy(x, y, rng));
    x = std::move(x_next);
    guard(x, y, t + 1, out.trajectory);
  }
  out.x_last = x;
  out.y_last = y;
  return out;
}

double estimate_delta_z0(const BilevelModel& model, const SmbConfig& cfg, const Vector& x0,
                         const Vector& y0, std::size_t n, Rng& rng) {
  require_config(n >= 1, "need at least one draw");
  require_config(static_cast<bool>(model.hypergrad), "hypergradient required");
  const Vector g = model.hypergrad(x0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += (smb_composite_sample(model, cfg, x0, y0, rng) - g).squaredNorm();
  return sum / static_cast<double>(n);
}

SbmaInit estimate_sbma_init(const BilevelModel& model, const Vector& x0, const Vector& y0, int k,
                            std::size_t n, Rng& rng) {
  require_config(n >= 1, "need at least one draw");
  require_config(model.y_star && model.grad_fx && model.grad_fy && model.hess_xy && model.hess_yy,
                 "closed forms required");
  const BilevelOracle& o = model.oracle;
  const BilevelConstants& c = o.constants;
  const Vector ys = model.y_star(x0);
  const Vector fx = model.grad_fx(x0, ys);
  const Vector fy = model.grad_fy(x0, ys);
  const Matrix gxy = model.hess_xy(x0, ys);
  const Matrix hyy = model.hess_yy(x0, ys);
  const Matrix inv = hyy.ldlt().solve(Matrix::Identity(hyy.rows(), hyy.cols()));
  SbmaInit init;
  init.delta_y0 = (y0 - ys).squaredNorm();
  for (std::size_t i = 0; i < n; ++i) {
    init.d_fx0 += (o.fx(x0, y0, rng) - fx).squaredNorm();
    init.d_fy0 += (project_ball(o.fy(x0, y0, rng), c.c_fy) - fy).squaredNorm();
    init.d_gxy0 += (project_spectral_norm(o.gxy(x0, y0, rng), c.c_gxy) - gxy).squaredNorm();
    const Matrix h = neumann_at(model, x0, y0, k, c.l_gy, c.lambda, NeumannIndexing::ZeroBased, rng);
    init.d_gyy0 += (project_spectral_norm(h, 1.0 / c.lambda) - inv).squaredNorm();
  }
  const double dn = static_cast<double>(n);
  init.d_fx0 /= dn;
  init.d_fy0 /= dn;
  init.d_gxy0 /= dn;
  init.d_gyy0 /= dn;
  return init;
}

}  // namespace semaopt
