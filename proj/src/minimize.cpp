#include "semaopt/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semaopt/sema.hpp"

namespace semaopt {

namespace {

void require_meta(const MinimizeMeta& meta, bool need_delta) {
  std::vector<std::string> missing;
  if (!meta.sigma2) missing.emplace_back("sigma2");
  if (!meta.l_f) missing.emplace_back("L_F");
  if (need_delta && !meta.delta_f) missing.emplace_back("Delta_F");
  if (need_delta && !meta.delta_0) missing.emplace_back("Delta_0");
  if (missing.empty()) return;
  std::ostringstream msg;
  msg << "schedule requires constants:";
  for (const auto& m : missing) msg << ' ' << m;
  throw ConfigError(msg.str());
}

void require_bounds(ScaleBounds b) {
  require_config(b.lower > 0.0 && b.lower <= b.upper, "scale bounds must satisfy 0 < c_l <= c_u");
}

// min(gamma sqrt(c_l) / (2 L sqrt(c_u^3)), cap / (L c_u))
double eta_rule(double gamma, double l_f, ScaleBounds b, double cap) {
  const double a = gamma * std::sqrt(b.lower) / (2.0 * l_f * std::sqrt(b.upper * b.upper * b.upper));
  return std::min(a, cap / (l_f * b.upper));
}

std::size_t ceil_count(double value) {
  require_config(std::isfinite(value), "schedule produced a non-finite iteration count");
  return static_cast<std::size_t>(std::ceil(std::max(value, 0.0)));
}

void check_finite(const Vector& x, std::size_t step, const Trajectory& traj) {
  const double n = x.norm();
  if (!std::isfinite(n) || n > kDivergenceRadius) throw DivergenceError(step, traj);
}

}  // namespace

double Schedule::gamma_at(std::size_t t) const {
  if (kind == ScheduleKind::Decreasing)
    return std::min(1.0, gamma_coeff / std::sqrt(static_cast<double>(t) + 1.0));
  return gamma;
}

double Schedule::eta_at(std::size_t t) const {
  if (kind == ScheduleKind::Decreasing) return std::min(eta_ratio * gamma_at(t), eta_cap);
  return eta;
}

std::size_t Schedule::total_steps() const {
  if (kind != ScheduleKind::Stagewise) return T + 1;
  std::size_t total = 0;
  for (const auto& s : stages) total += s.T + 1;
  return total;
}

Schedule make_schedule_constant(double eps, const MinimizeMeta& meta, ScaleBounds bounds) {
  require_config(eps > 0.0, "eps must be positive");
  require_meta(meta, true);
  require_bounds(bounds);
  const double l_f = *meta.l_f;
  require_config(l_f > 0.0, "L_F must be positive");
  Schedule s;
  s.kind = ScheduleKind::Constant;
  const double sigma2 = *meta.sigma2;
  s.gamma = sigma2 > 0.0 ? std::min(1.0, eps * eps * bounds.lower / (12.0 * sigma2 * bounds.upper))
                         : 1.0;
  s.eta = eta_rule(s.gamma, l_f, bounds, 1.0 / std::sqrt(2.0));
  const double e2 = eps * eps * bounds.lower;
  s.T = ceil_count(std::max(6.0 * *meta.delta_0 * bounds.upper / (s.gamma * e2),
                            12.0 * *meta.delta_f / (s.eta * e2)));
  return s;
}

Schedule make_schedule_decreasing(const MinimizeMeta& meta, ScaleBounds bounds, std::size_t T) {
  require_meta(meta, false);
  require_bounds(bounds);
  const double l_f = *meta.l_f;
  require_config(l_f > 0.0, "L_F must be positive");
  Schedule s;
  s.kind = ScheduleKind::Decreasing;
  s.T = T;
  double c = meta.c;
  if (c <= 0.0) {
    c = 1.0;
    s.c_substituted = true;
  }
  const double sigma2 = *meta.sigma2;
  s.gamma_coeff = sigma2 > 0.0 ? bounds.lower / (8.0 * sigma2 * c * bounds.upper)
                               : std::numeric_limits<double>::infinity();
  s.eta_ratio = std::sqrt(bounds.lower) / (2.0 * l_f * std::sqrt(std::pow(bounds.upper, 3)));
  s.eta_cap = 1.0 / (2.0 * l_f * bounds.upper);
  return s;
}

Schedule make_schedule_stagewise(double mu, double eps, const MinimizeMeta& meta,
                                 ScaleBounds bounds) {
  require_config(mu > 0.0 && mu <= 1.0, "mu must lie in (0, 1]");
  require_config(eps > 0.0, "eps must be positive");
  require_meta(meta, true);
  require_bounds(bounds);
  const double l_f = *meta.l_f;
  require_config(l_f > 0.0, "L_F must be positive");
  Schedule s;
  s.kind = ScheduleKind::Stagewise;
  s.mu = mu;
  s.eps0 = std::max(*meta.delta_f, *meta.delta_0);
  const double ratio = s.eps0 / eps;
  const int K = ratio <= 1.0 ? 0 : static_cast<int>(std::ceil(std::log2(ratio) - 1e-9));
  const double sigma2 = *meta.sigma2;
  double eps_k = s.eps0;
  for (int k = 0; k < K; ++k) {
    Stage st;
    st.eps = eps_k;
    st.gamma = sigma2 > 0.0
                   ? std::min(1.0, mu * bounds.lower * eps_k / (24.0 * bounds.upper * sigma2))
                   : 1.0;
    st.eta = eta_rule(st.gamma, l_f, bounds, 1.0 / std::sqrt(2.0));
    st.T = ceil_count(std::max(48.0 * bounds.upper / (mu * st.gamma * bounds.lower),
                               1.0 / (6.0 * mu * st.eta * bounds.lower)));
    s.stages.push_back(st);
    eps_k *= 0.5;
  }
  return s;
}

Schedule make_schedule_explicit(double gamma, double eta, std::size_t T) {
  require_config(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  require_config(eta > 0.0, "eta must be positive");
  Schedule s;
  s.kind = ScheduleKind::Constant;
  s.gamma = gamma;
  s.eta = eta;
  s.T = T;
  return s;
}

double estimate_delta0(const GradOracle& oracle, const Vector& x0, std::size_t n, Rng& rng) {
  require_config(n >= 1, "estimate_delta0: need at least one draw");
  const Vector g = oracle.true_grad(x0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += (oracle.sample(x0, rng) - g).squaredNorm();
  return sum / static_cast<double>(n);
}

RunResult asa_run(const GradOracle& oracle, const Vector& x0, const ScalerKind& scaler, double g0,
                  const Schedule& schedule, Rng& rng, const AsaOptions& opts) {
  require_config(schedule.kind != ScheduleKind::Stagewise, "asa_run: use stagewise_run");
  require_config(x0.size() == oracle.dim(), "asa_run: x0 dimension mismatch");
  const bool have_grad = oracle.has_true_grad();
  const std::size_t T = schedule.T;
  Rng tau_rng = rng.split(0x7461755FULL);
  RunResult out;
  out.tau = static_cast<std::size_t>(tau_rng.uniform_index(T + 1));

  Vector x = x0;
  Vector v = opts.v0 ? *opts.v0 : oracle.sample(x0, rng);
  ScalerState u = opts.u0 ? *opts.u0 : make_scaler_state(scaler, oracle.dim(), g0);
  out.trajectory = Trajectory(opts.dense_limit);
  out.scale_min = std::numeric_limits<double>::infinity();
  out.scale_max = 0.0;

  for (std::size_t t = 0; t <= T; ++t) {
    const std::size_t gt = t + opts.t_offset;
    if (t == out.tau) {
      out.x_out = x;
      out.v_out = v;
    }
    const double gamma = schedule.gamma_at(gt);
    const double eta = schedule.eta_at(gt);
    const Vector g = oracle.sample(x, rng);
    sema_update(v, gamma, g);
    scaler_update(u, scaler, g, v);
    if (opts.adamplus_bound && scaler.tag == ScalerTag::AdamPlus && v.norm() > *opts.adamplus_bound)
      throw VerificationError("adamplus: ||v|| exceeds the declared bound at step " +
                              std::to_string(gt));
    const Vector s = step_scale(u);
    const double smin = s.minCoeff();
    const double smax = s.maxCoeff();
    out.scale_min = std::min(out.scale_min, smin);
    out.scale_max = std::max(out.scale_max, smax);
    if (opts.check_bounds) {
      const auto& b = *opts.check_bounds;
      if (smin < b.lower * (1.0 - 1e-12) || smax > b.upper * (1.0 + 1e-12)) ++out.bound_violations;
    }

    TrajectoryRecord rec;
    rec.t = gt;
    rec.eta = eta;
    rec.gamma = gamma;
    if (have_grad) {
      const Vector grad = oracle.true_grad(x);
      rec.grad_norm_sq = grad.squaredNorm();
      rec.delta = (v - grad).squaredNorm();
    }
    const bool force = t == T;
    if (opts.objective && (force || out.trajectory.wants(gt))) rec.objective = opts.objective(x);
    out.trajectory.add(rec, force);

    Vector x_next = x - eta * s.cwiseProduct(v);
    if (opts.observer) opts.observer(StepInfo{gt, &x, &x_next, &v, &s, eta, gamma});
    x = std::move(x_next);
    check_finite(x, gt + 1, out.trajectory);
  }
  out.x_last = x;
  out.v_last = v;
  out.scaler_state = u;
  return out;
}

StagewiseResult stagewise_run(const GradOracle& oracle, const Vector& x0,
                              const ScalerKind& scaler, double g0, const Schedule& schedule,
                              Rng& rng, const ScalarFn& objective, bool carry_u) {
  require_config(schedule.kind == ScheduleKind::Stagewise, "stagewise_run: stagewise schedule required");
  StagewiseResult out;
  Vector x = x0;
  Vector v = oracle.sample(x0, rng);
  std::optional<ScalerState> u;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < schedule.stages.size(); ++k) {
    const Stage& st = schedule.stages[k];
    AsaOptions opts;
    opts.v0 = v;
    if (carry_u) opts.u0 = u;
    opts.objective = objective;
    opts.t_offset = offset;
    Rng stage_rng = rng.split(k + 1);
    const RunResult r =
        asa_run(oracle, x, scaler, g0, make_schedule_explicit(st.gamma, st.eta, st.T), stage_rng, opts);
    x = r.x_out;
    v = r.v_out;
    u = r.scaler_state;
    offset += st.T + 1;
    StageResult sr;
    sr.stage = st;
    sr.x_out = x;
    sr.v_out = v;
    if (objective) sr.objective_out = objective(x);
    out.stages.push_back(std::move(sr));
    out.trajectory.append(r.trajectory);
  }
  out.x_final = x;
  return out;
}

ShbEquivalenceReport shb_equivalence_check(double eta, double beta, const GradOracle& oracle,
                                           const Vector& x0, std::size_t T, Rng& rng,
                                           double tol) {
  require_config(beta >= 0.0 && beta < 1.0, "beta must lie in [0, 1)");
  Rng rng_a = rng;
  Rng rng_b = rng;
  Vector xa = x0;
  Vector xb = x0;
  Vector v = oracle.sample(x0, rng_a);
  Vector w = -eta * oracle.sample(x0, rng_b);
  const double eta_hb = eta * (1.0 - beta);
  ShbEquivalenceReport report;
  report.steps = T + 1;
  for (std::size_t t = 0; t <= T; ++t) {
    const Vector ga = oracle.sample(xa, rng_a);
    const Vector gb = oracle.sample(xb, rng_b);
    v = beta * v + (1.0 - beta) * ga;
    xa = xa - eta * v;
    w = beta * w - eta_hb * gb;
    xb = xb + w;
    const double dev = (xa - xb).cwiseAbs().maxCoeff();
    report.max_deviation = std::max(report.max_deviation, dev);
    if (report.first_divergent_step == 0 && dev > tol) report.first_divergent_step = t + 1;
  }
  rng = rng_a;
  return report;
}

}  // namespace semaopt
