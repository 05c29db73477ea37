#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "semaopt/minmax.hpp"
#include "semaopt/problems/saddle.hpp"
#include "test_support.hpp"

using namespace semaopt;

namespace {

// f(x, y) = x y - y^2 / 2: y*(x) = x, F(x) = x^2 / 2.
MinMaxModel bilinear_model() {
  MinMaxModel m;
  m.oracle.dim_x = 1;
  m.oracle.dim_y = 1;
  m.oracle.sample = [](const Vector& x, const Vector& y, Rng&) -> std::pair<Vector, Vector> {
    return {y, x - y};
  };
  m.oracle.grad_x = [](const Vector&, const Vector& y) { return y; };
  m.oracle.grad_y = [](const Vector& x, const Vector& y) -> Vector { return x - y; };
  m.grad_F = [](const Vector& x) { return x; };
  m.y_star = [](const Vector& x) { return x; };
  m.F = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  m.f = [](const Vector& x, const Vector& y) { return x.dot(y) - 0.5 * y.squaredNorm(); };
  return m;
}

Vector scalar(double v) { return Vector::Constant(1, v); }

SaddleProblem identity_saddle(double lambda) {
  SaddleProblem p;
  p.lambda = lambda;
  p.a = Matrix::Identity(2, 2);
  p.b = Matrix::Identity(2, 2);
  p.c = Vector::Zero(2);
  p.y_map = Matrix::Identity(2, 2) / lambda;
  p.dual_basis = Matrix::Identity(2, 2);
  p.x_star = Vector::Zero(2);
  p.pl_lambda = lambda;
  return p;
}

MinMaxMeta unit_meta(double lambda, double sigma2) {
  MinMaxMeta m;
  m.lambda = lambda;
  m.l_f = 1.0;
  m.l_F = 1.0;
  m.sigma2 = sigma2;
  m.delta_f = 1.0;
  m.delta_x0 = 1.0;
  return m;
}

}  // namespace

TEST(PdRun, HandStepOnBilinearRegularized) {
  const MinMaxModel m = bilinear_model();
  MinMaxConfig cfg;
  cfg.gamma = 1.0;
  cfg.eta_x = 0.1;
  cfg.eta_y = 0.1;
  cfg.T = 5;
  Vector x1, y1;
  Rng rng(1);
  pd_run(m, cfg, scalar(1.0), scalar(1.0), rng, [&](const PdStepInfo& s) {
    if (s.t == 0) {
      x1 = *s.x_next;
      y1 = *s.y_next;
    }
  });
  EXPECT_DOUBLE_EQ(x1[0], 0.9);
  EXPECT_DOUBLE_EQ(y1[0], 1.0);
}

TEST(PdRun, NoiselessGammaOneIsGradientDescentAscent) {
  const MinMaxModel m = bilinear_model();
  MinMaxConfig cfg;
  cfg.gamma = 1.0;
  cfg.eta_x = 0.05;
  cfg.eta_y = 0.2;
  cfg.T = 300;
  Rng rng(2);
  const PdResult r = pd_run(m, cfg, scalar(1.0), scalar(-0.5), rng);
  double x = 1.0, y = -0.5;
  for (int t = 0; t <= 300; ++t) {
    const double nx = x - 0.05 * y;
    const double ny = y + 0.2 * (x - y);
    x = nx;
    y = ny;
  }
  EXPECT_NEAR(r.x_last[0], x, 1e-12);
  EXPECT_NEAR(r.y_last[0], y, 1e-12);
}

TEST(PdRun, DualProjection) {
  const MinMaxModel m = bilinear_model();
  MinMaxConfig cfg;
  cfg.eta_x = 0.0;
  cfg.eta_y = 1.0;
  cfg.T = 3;
  cfg.dual = DualSet::box(-0.25, 0.25);
  Rng rng(3);
  const PdResult r = pd_run(m, cfg, scalar(5.0), scalar(0.0), rng);
  EXPECT_DOUBLE_EQ(r.y_last[0], 0.25);
  EXPECT_EQ(DualSet::ball(1.0).project((Vector(2) << 3.0, 4.0).finished())[1], 0.8);
  cfg.dual = DualSet::box(1.0, 0.0);
  EXPECT_THROW(pd_run(m, cfg, scalar(5.0), scalar(0.0), rng), ConfigError);
}

TEST(PdRun, PdsmEqualsPdadaWithShbScaler) {
  const SaddleProblem p = make_saddle_quadratic(4, 3, 1.0, 4);
  const MinMaxModel m = p.model(0.05);
  MinMaxConfig a;
  a.gamma = 0.2;
  a.eta_x = 0.05;
  a.eta_y = 0.1;
  a.T = 3000;
  MinMaxConfig b = a;
  b.pdsm = false;
  b.scaler.tag = ScalerTag::SHB;
  b.g0 = 0.0;
  std::vector<Vector> xa, xb;
  Rng ra(5), rb(5);
  const PdResult oa =
      pd_run(m, a, Vector::Ones(4), Vector::Zero(3), ra, [&](const PdStepInfo& s) { xa.push_back(*s.x_next); });
  const PdResult ob =
      pd_run(m, b, Vector::Ones(4), Vector::Zero(3), rb, [&](const PdStepInfo& s) { xb.push_back(*s.x_next); });
  ASSERT_EQ(xa.size(), xb.size());
  double dev = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) dev = std::max(dev, (xa[i] - xb[i]).cwiseAbs().maxCoeff());
  EXPECT_LE(dev, 1e-12);
  EXPECT_LE((oa.y_last - ob.y_last).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(oa.tau, ob.tau);
}

TEST(MinMaxSchedule, UnitConstants) {
  const MinMaxConfig c = make_minmax_schedule(0.1, unit_meta(1.0, 1.0), {1.0, 1.0});
  EXPECT_NEAR(c.gamma, 2.5e-4, 1e-18);
  EXPECT_NEAR(c.eta_y, 2.5e-5, 1e-18);
  // eta_x = min(eta_y lambda / (48 L_f kappa), gamma / (8 L_F)).
  EXPECT_NEAR(c.eta_x, 2.5e-5 / 48.0, 1e-18);
}

TEST(MinMaxSchedule, NoiselessCaps) {
  MinMaxMeta m = unit_meta(0.5, 0.0);
  m.l_f = 2.0;
  const MinMaxConfig c = make_minmax_schedule(0.1, m, {1.0, 1.0});
  EXPECT_EQ(c.gamma, 1.0);
  EXPECT_DOUBLE_EQ(c.eta_y, std::min(0.5 / 4.0, 0.5));
}

TEST(MinMaxSchedule, HalvingLambdaShrinksPrimalStep) {
  MinMaxMeta m = unit_meta(1.0, 1.0);
  m.l_f = 2.0;
  const MinMaxConfig a = make_minmax_schedule(0.2, m, {0.5, 1.0});
  m.lambda = 0.5;
  const MinMaxConfig b = make_minmax_schedule(0.2, m, {0.5, 1.0});
  EXPECT_LE(b.eta_x, a.eta_x / 4.0 * (1 + 1e-12));
  EXPECT_THROW(make_minmax_schedule(0.2, unit_meta(0.0, 1.0), {1.0, 1.0}), ConfigError);
  EXPECT_THROW(make_minmax_schedule(0.2, unit_meta(-1.0, 1.0), {1.0, 1.0}), ConfigError);
}

TEST(DualGapProbe, ClosedFormSelection) {
  const SaddleProblem p = identity_saddle(2.0);
  const MinMaxModel m = p.model(0.0);
  const Vector x = (Vector(2) << 1.0, 0.0).finished();
  EXPECT_EQ(m.y_star(x), (Vector(2) << 0.5, 0.0).finished());
  EXPECT_EQ(dual_gap_probe(m, x, m.y_star(x)).delta_y, 0.0);
  const Vector y = (Vector(2) << 1.5, 2.0).finished();
  EXPECT_DOUBLE_EQ(dual_gap_probe(m, x, y).delta_y, 1.0 + 4.0);
  EXPECT_TRUE(dual_gap_probe(m, x, y).has_grad_F);
  MinMaxModel bare = m;
  bare.y_star = nullptr;
  try {
    dual_gap_probe(bare, x, y);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "probe unavailable");
  }
}

TEST(DualGapProbe, DualPlSelectionIsKappaLipschitz) {
  const SaddleProblem p = make_dual_pl_saddle(3, 5, 1.0, 6);
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Vector x1 = rng.normal_vector(3), x2 = rng.normal_vector(3);
    EXPECT_LE((p.y_star(x1) - p.y_star(x2)).norm(), p.kappa() * (x1 - x2).norm() * (1 + 1e-12));
    // The selection maximizes f(x, .): the y-gradient vanishes there.
    EXPECT_LT(p.grad_y(x1, p.y_star(x1)).norm(), 1e-12 * (1 + x1.norm()));
  }
}

// Property: with eta_x <= c_l / (2 L_F c_u^2) every primal step satisfies
//   F(x+) <= F(x) + (eta c_u/2) Delta_x - (eta c_l/2)||grad F||^2 - (eta c_l/4)||v||^2.
TEST(PdRunProperty, SurrogateDescentOnNoiselessRuns) {
  for (bool dual_pl : {false, true}) {
    const SaddleProblem p = dual_pl ? make_dual_pl_saddle(3, 5, 1.0, 8)
                                    : make_saddle_quadratic(4, 4, 1.0, 8);
    const MinMaxModel m = p.model(0.0);
    for (bool pdsm : {true, false}) {
      MinMaxConfig cfg;
      cfg.gamma = 0.3;
      cfg.pdsm = pdsm;
      cfg.scaler.tag = ScalerTag::Adam;
      cfg.g0 = 2.0;
      cfg.eta_y = 0.5 * p.pl_lambda / (p.l_f * p.l_f);
      cfg.T = 2000;
      const double cl = pdsm ? 1.0 : 1.0 / (2.0 + 2.0), cu = pdsm ? 1.0 : 0.5;
      cfg.eta_x = cl / (2.0 * p.l_F * cu * cu);
      std::size_t checked = 0;
      Rng rng(9);
      Rng start(10);
      pd_run(m, cfg, p.point_with_gap(1.0, start), Vector::Zero(p.dim_y()), rng,
             [&](const PdStepInfo& s) {
               const double smin = s.scale->minCoeff(), smax = s.scale->maxCoeff();
               if (cfg.eta_x > smin / (2.0 * p.l_F * smax * smax)) return;
               const Vector g = p.grad_F(*s.x);
               const double delta = (*s.v - g).squaredNorm();
               const double rhs = p.F(*s.x) + cfg.eta_x * smax / 2.0 * delta -
                                  cfg.eta_x * smin / 2.0 * g.squaredNorm() -
                                  cfg.eta_x * smin / 4.0 * s.v->squaredNorm();
               ASSERT_LE(p.F(*s.x_next), rhs + 1e-12);
               ++checked;
             });
      EXPECT_GT(checked, 1000u);
    }
  }
}

// Property: with x frozen the dual error contracts,
//   E delta_{t+1} <= (1 - eta_y lambda / c) delta_t + 2 eta_y^2 sigma^2,
// c = 2 for strong concavity and 4 for the dual-side PL case.
TEST(PdRunProperty, FrozenPrimalDualContraction) {
  for (bool dual_pl : {false, true}) {
    const SaddleProblem p = dual_pl ? make_dual_pl_saddle(3, 5, 1.0, 11)
                                    : make_saddle_quadratic(5, 5, 1.0, 11);
    const double sigma2 = 0.01;
    const MinMaxModel m = p.model(sigma2);
    MinMaxConfig cfg;
    cfg.eta_x = 0.0;
    cfg.eta_y = std::min(0.1, 0.5 * p.pl_lambda / (p.l_f * p.l_f));
    cfg.T = 100;
    const std::size_t reps = 300;
    std::vector<std::vector<double>> delta(reps);
    const Vector x = Vector::Ones(p.dim_x());
    for (std::size_t r = 0; r < reps; ++r) {
      Rng rng(r, 0x6672);
      pd_run(m, cfg, x, Vector::Zero(p.dim_y()), rng, [&](const PdStepInfo& s) {
        if (s.t == 0) delta[r].push_back((*s.y - p.y_star(x)).squaredNorm());
        delta[r].push_back((*s.y_next - p.y_star(x)).squaredNorm());
      });
    }
    const double rho = 1.0 - cfg.eta_y * p.pl_lambda / (dual_pl ? 4.0 : 2.0);
    std::size_t violations = 0;
    for (std::size_t t = 0; t + 1 < delta[0].size(); ++t) {
      double mean = 0.0, m2 = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double e = delta[r][t + 1] - rho * delta[r][t] - 2.0 * cfg.eta_y * cfg.eta_y * sigma2;
        const double d = e - mean;
        mean += d / static_cast<double>(r + 1);
        m2 += d * (e - mean);
      }
      const double se = std::sqrt(m2 / (reps - 1.0) / reps);
      violations += mean > 2.0 * se;
    }
    EXPECT_LE(static_cast<double>(violations), 0.05 * (delta[0].size() - 1)) << dual_pl;
  }
}
