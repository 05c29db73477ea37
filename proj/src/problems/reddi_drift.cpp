#include "semaopt/problems/reddi_drift.hpp"

#include <algorithm>
#include <cmath>

#include "semaopt/scalers.hpp"
#include "semaopt/sema.hpp"

namespace semaopt {

ReddiDriftProblem make_reddi_drift(double c, double p) {
  require_config(c > 0.0, "reddi_drift: C must be positive");
  require_config(p > 0.0 && p < 1.0, "reddi_drift: p must lie in (0, 1)");
  require_config(p * c - (1.0 - p) > 0.0, "no drift gap");
  return ReddiDriftProblem{c, p};
}

double ReddiDriftProblem::grad_variance() const {
  const double m = mean_grad();
  return p * c * c + (1.0 - p) - m * m;
}

GradOracle ReddiDriftProblem::oracle() const {
  const ReddiDriftProblem self = *this;
  auto sampler = [self](const Vector&, Rng& rng) -> Vector {
    return Vector::Constant(1, self.sample(rng));
  };
  const double m = mean_grad();
  return GradOracle(1, std::move(sampler),
                    VectorFn([m](const Vector&) -> Vector { return Vector::Constant(1, m); }),
                    VarianceParams{grad_variance(), 0.0});
}

namespace {

struct DriftAccumulator {
  // Sums of P_w times the lower / upper bound of E[v/(sqrt(u)+G0) | w].
  double lower = 0.0;
  double upper = 0.0;
};

struct DriftContext {
  double c = 0.0;
  double p = 0.0;
  double mean = 0.0;
  double gamma = 0.0;   // 1 - beta1
  double beta2 = 0.0;
  double g0 = 0.0;
  int horizon = 0;
  double tail_v = 0.0;   // (1 - gamma)^H
  double tail_u_lo = 0.0;
  double tail_u_hi = 0.0;
  double g_abs_max = 0.0;
};

void enumerate(const DriftContext& ctx, int j, double prob, double v_w, double u_w,
               double v_weight, double u_weight, DriftAccumulator& acc) {
  if (j == ctx.horizon) {
    const double a = 1.0 / (std::sqrt(u_w + ctx.tail_u_hi) + ctx.g0);
    const double b = 1.0 / (std::sqrt(u_w + ctx.tail_u_lo) + ctx.g0);
    double lo = v_w >= 0.0 ? v_w * a : v_w * b;
    double hi = v_w >= 0.0 ? v_w * b : v_w * a;
    const double centre = ctx.tail_v * ctx.mean * a;
    const double slack = ctx.tail_v * ctx.g_abs_max * (b - a);
    lo += centre - slack;
    hi += centre + slack;
    acc.lower += prob * lo;
    acc.upper += prob * hi;
    return;
  }
  const double next_v = v_weight * (1.0 - ctx.gamma);
  const double next_u = u_weight * ctx.beta2;
  enumerate(ctx, j + 1, prob * ctx.p, v_w + v_weight * ctx.c, u_w + u_weight * ctx.c * ctx.c,
            next_v, next_u, acc);
  enumerate(ctx, j + 1, prob * (1.0 - ctx.p), v_w - v_weight, u_w + u_weight, next_v, next_u,
            acc);
}

}  // namespace

DriftInterval ReddiDriftProblem::drift(double beta1, double beta2, double eta, double g0,
                                       int horizon) const {
  require_config(beta1 >= 0.0 && beta1 < 1.0, "drift: beta1 must lie in [0, 1)");
  require_config(beta2 >= 0.0 && beta2 < 1.0, "drift: beta2 must lie in [0, 1)");
  require_config(eta > 0.0 && g0 >= 0.0, "drift: need eta > 0 and G0 >= 0");
  require_config(horizon >= 1 && horizon <= 26, "drift: horizon must lie in [1, 26]");
  DriftContext ctx;
  ctx.c = c;
  ctx.p = p;
  ctx.mean = mean_grad();
  ctx.gamma = 1.0 - beta1;
  ctx.beta2 = beta2;
  ctx.g0 = g0;
  ctx.horizon = horizon;
  ctx.tail_v = std::pow(beta1, horizon);
  const double b2h = std::pow(beta2, horizon);
  ctx.tail_u_lo = b2h * std::min(1.0, c * c);
  ctx.tail_u_hi = b2h * std::max(1.0, c * c);
  ctx.g_abs_max = std::max(1.0, c);
  // Stationary v = sum_j gamma beta1^j g_{t-j}, u = sum_j (1-beta2) beta2^j g_{t-j}^2.
  DriftAccumulator acc;
  enumerate(ctx, 0, 1.0, 0.0, 0.0, ctx.gamma, 1.0 - beta2, acc);
  DriftInterval out;
  out.lower = -eta * acc.upper;
  out.upper = -eta * acc.lower;
  out.horizon = horizon;
  return out;
}

DriftEstimate ReddiDriftProblem::empirical_drift(double beta1, double beta2, double eta,
                                                 double g0, std::size_t seeds,
                                                 std::size_t steps, std::size_t burn_in,
                                                 std::uint64_t seed_base) const {
  require_config(seeds >= 2 && steps >= 1, "empirical_drift: need >= 2 seeds and >= 1 step");
  ScalerKind kind;
  kind.tag = ScalerTag::Adam;
  kind.beta2 = beta2;
  const double gamma = 1.0 - beta1;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    Rng rng(seed_base + s, 0x72646466);
    ScalerState state = make_scaler_state(kind, 1, g0);
    Vector g(1);
    g[0] = sample(rng);
    Vector v = g;
    double total = 0.0;
    for (std::size_t t = 0; t < burn_in + steps; ++t) {
      g[0] = sample(rng);
      sema_update(v, gamma, g);
      scaler_update(state, kind, g, v);
      const double step = -eta * v[0] * step_scale(state)[0];
      if (t >= burn_in) total += step;
    }
    const double mean = total / static_cast<double>(steps);
    sum += mean;
    sum_sq += mean * mean;
  }
  const double n = static_cast<double>(seeds);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return DriftEstimate{mean, std::sqrt(var / n), seeds, steps};
}

std::vector<ReddiGridPoint> reddi_grid_search(const std::vector<double>& cs,
                                              const std::vector<double>& ps,
                                              const std::vector<double>& beta2s,
                                              double beta1_small, double beta1_large,
                                              double eta, int horizon) {
  std::vector<ReddiGridPoint> found;
  for (double c : cs)
    for (double p : ps) {
      if (!(p * c - (1.0 - p) > 0.0)) continue;
      const ReddiDriftProblem prob = make_reddi_drift(c, p);
      for (double b2 : beta2s) {
        const DriftInterval small = prob.drift(beta1_small, b2, eta, 0.0, horizon);
        if (!small.positive()) continue;
        const DriftInterval large = prob.drift(beta1_large, b2, eta, 0.0, horizon);
        if (!large.negative()) continue;
        found.push_back(ReddiGridPoint{c, p, b2, small, large});
      }
    }
  return found;
}

}  // namespace semaopt
