#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "semaopt/bilevel.hpp"
#include "semaopt/problems/bilevel_quadratic.hpp"
#include "test_support.hpp"

using namespace semaopt;

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }
Matrix scalar_m(double v) { return Matrix::Constant(1, 1, v); }

// g(x, y) = (y - x)^2 / 2 and f(x, y) = y^2 / 2, so y*(x) = x and F(x) = x^2 / 2.
BilevelModel scalar_model() {
  BilevelModel m;
  m.oracle.dim_x = 1;
  m.oracle.dim_y = 1;
  m.y_star = [](const Vector& x) { return x; };
  m.F = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  m.grad_fx = [](const Vector&, const Vector&) { return scalar(0.0); };
  m.grad_fy = [](const Vector&, const Vector& y) { return y; };
  m.hess_xy = [](const Vector&, const Vector&) { return scalar_m(-1.0); };
  m.hess_yy = [](const Vector&, const Vector&) { return scalar_m(1.0); };
  return m;
}

BilevelQuadraticProblem noiseless(Index d, Index dp, std::uint64_t seed) {
  BilevelQuadraticOptions o;
  o.sigma2 = 0.0;
  return make_bilevel_quadratic(d, dp, 1.0, seed, o);
}

}  // namespace

TEST(Hypergradient, ScalarExample) {
  const BilevelModel m = scalar_model();
  for (double x : {-2.0, 0.0, 0.7, 3.0}) EXPECT_DOUBLE_EQ(hypergradient_exact(m, scalar(x))[0], x);
}

TEST(Hypergradient, UpperLevelIndependentOfY) {
  BilevelModel m = scalar_model();
  m.grad_fx = [](const Vector& x, const Vector&) -> Vector { return 3.0 * x; };
  m.grad_fy = [](const Vector&, const Vector&) { return scalar(0.0); };
  EXPECT_DOUBLE_EQ(hypergradient_exact(m, scalar(2.0))[0], 6.0);
}

TEST(Hypergradient, MatchesFiniteDifferencesOfValueFunction) {
  const BilevelQuadraticProblem p = make_bilevel_quadratic(3, 3, 1.0, 1);
  const BilevelModel m = p.model();
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const Vector x = rng.normal_vector(3);
    // F(x) = f(x, y*(x)) with y*(x) solved from the lower-level stationarity condition.
    const auto F = [&](const Vector& z) {
      const Vector y = p.h.fullPivLu().solve(p.b * z + p.c);
      return 0.5 * (y - p.y_target).squaredNorm() + 0.5 * p.options.alpha * z.squaredNorm();
    };
    EXPECT_LE(testutil::rel_error(hypergradient_exact(m, x), testutil::central_diff(F, x)), 1e-6);
  }
}

TEST(Hypergradient, MissingClosedForms) {
  BilevelModel m = scalar_model();
  m.hess_yy = nullptr;
  EXPECT_THROW(hypergradient_exact(m, scalar(1.0)), ConfigError);
}

TEST(Smb, ExactModesReproduceHypergradientDescent) {
  const BilevelQuadraticProblem p = noiseless(4, 3, 3);
  const BilevelModel m = p.model();
  SmbConfig cfg;
  cfg.gamma = 1.0;
  cfg.eta_x = 0.3;
  cfg.T = 200;
  cfg.exact_inverse = true;
  cfg.exact_lower = true;
  const Vector x0 = Vector::Ones(4);
  Rng rng(4);
  const BilevelResult r = smb_run(m, cfg, x0, Vector::Zero(3), rng);
  Vector x = x0;
  for (std::size_t t = 0; t <= cfg.T; ++t) x -= cfg.eta_x * p.hypergrad(x);
  EXPECT_LT((r.x_last - x).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(r.final_delta, 1e-20);
}

TEST(Smb, KBoundScaling) {
  BilevelConstants c;
  c.lambda = 0.5;
  c.c_gyy = 2.0;
  c.c_gxy = 1.5;
  const double k1 = smb_k_bound(c, 0.2);
  const double k2 = smb_k_bound(c, 0.1);
  EXPECT_NEAR(k2 - k1, c.c_gyy / c.lambda * std::log(2.0), 1e-12);
  c.c_gyy = c.lambda;
  EXPECT_NEAR(smb_k_bound(c, 0.2),
              0.5 * std::log(64.0 * 1.5 * 1.5 / (0.25 * 0.04)), 1e-12);
  c.c_gyy = 0.1;
  EXPECT_THROW(smb_k_bound(c, 0.2), ConfigError);
}

TEST(Smb, ConstantsOnIntegerInputs) {
  BilevelConstants c;
  c.lambda = 1;
  c.c_fy = 1;
  c.c_gxy = 1;
  c.c_gyy = 2;
  c.l_fx = 1;
  c.l_fy = 1;
  c.l_gxy = 1;
  c.l_gyy = 1;
  c.l_y = 1;
  c.sigma2 = 1;
  SmbConstants k = smb_constants(c, 0.5, 2);
  EXPECT_DOUBLE_EQ(k.c0, 20.0);
  EXPECT_DOUBLE_EQ(k.l_F, 40.0);
  EXPECT_DOUBLE_EQ(k.c1, 68.0);

  c.lambda = 2;
  c.c_fy = 3;
  c.c_gyy = 4;
  c.l_fy = 2;
  c.l_y = 2;
  k = smb_constants(c, 0.5, 4);
  // Evaluated by hand: 2 + 27/2 + 27/8 + 6, the same sum for the smoothness core,
  // and 2 + 60 + 240 + 6.
  EXPECT_DOUBLE_EQ(k.c0, 24.875);
  EXPECT_DOUBLE_EQ(k.l_F, 24.875 * 5.0);
  EXPECT_DOUBLE_EQ(k.c1, 308.0);
}

TEST(Smb, ScheduleUsesCeilingOfK) {
  const BilevelQuadraticProblem p = make_bilevel_quadratic(5, 5, 1.0, 17);
  const SmbSchedule s = make_smb_schedule(0.2, p.constants, 0.5, 0.01);
  EXPECT_EQ(s.cfg.k, std::max(1, static_cast<int>(std::ceil(smb_k_bound(p.constants, 0.2)))));
  EXPECT_GT(s.cfg.T, 0u);
  EXPECT_LE(s.cfg.gamma, 0.04 / (20.0 * s.constants.c1) * (1 + 1e-12));
  EXPECT_LE(s.cfg.eta_x, s.cfg.gamma / (8.0 * s.constants.l_F) * (1 + 1e-12));
}

// Neumann bias inside the composite sample: with sigma = 0 and y = y*(x),
// ||E[z] - grad F|| <= ||g_xy|| ||f_y|| (1/lambda)(1 - lambda/L)^k.
TEST(Smb, CompositeSampleBias) {
  const BilevelQuadraticProblem p = noiseless(5, 5, 5);
  const BilevelModel m = p.model();
  Rng rng(6);
  const Vector x = rng.normal_vector(5);
  const Vector y = p.y_star(x);
  for (int k : {2, 10}) {
    SmbConfig cfg;
    cfg.k = k;
    const int n = 100000;
    Vector mean = Vector::Zero(5);
    Vector m2 = Vector::Zero(5);
    for (int i = 0; i < n; ++i) {
      const Vector s = smb_composite_sample(m, cfg, x, y, rng);
      const Vector d = s - mean;
      mean += d / static_cast<double>(i + 1);
      m2 += d.cwiseProduct(s - mean);
    }
    const double se = std::sqrt(m2.sum() / (n - 1.0) / n);
    const double lambda = p.constants.lambda, big = p.constants.c_gyy;
    const double bound = testutil::svd_norm(p.hess_xy()) * p.grad_fy(x, y).norm() / lambda *
                         std::pow(1.0 - lambda / big, k);
    EXPECT_LE((mean - p.hypergrad(x)).norm(), bound + 4.0 * se) << k;
  }
}

// Property: with x frozen the lower iterate contracts,
//   E delta_{t+1} <= (1 - eta_y lambda / 2) delta_t + 2 eta_y^2 sigma^2.
TEST(SmbProperty, LowerLevelRecursion) {
  const BilevelQuadraticProblem p = make_bilevel_quadratic(3, 3, 1.0, 7);
  const BilevelModel m = p.model();
  SmbConfig cfg;
  cfg.eta_x = 0.0;
  cfg.eta_y = 0.2;
  cfg.T = 80;
  const std::size_t reps = 300;
  const Vector x = 0.5 * Vector::Ones(3);
  const Vector ys = p.y_star(x);
  std::vector<std::vector<double>> delta(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng(r, 0x6c79);
    smb_run(m, cfg, x, Vector::Zero(3), rng,
            [&](const BilevelStepInfo& s) { delta[r].push_back((*s.y - ys).squaredNorm()); });
  }
  const double rho = 1.0 - cfg.eta_y * p.constants.lambda / 2.0;
  const double noise = 2.0 * cfg.eta_y * cfg.eta_y * p.constants.sigma2;
  std::size_t violations = 0;
  for (std::size_t t = 0; t + 1 < delta[0].size(); ++t) {
    double mean = 0.0, m2 = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double e = delta[r][t + 1] - rho * delta[r][t] - noise;
      const double d = e - mean;
      mean += d / static_cast<double>(r + 1);
      m2 += d * (e - mean);
    }
    violations += mean > 2.0 * std::sqrt(m2 / (reps - 1.0) / reps);
  }
  EXPECT_LE(static_cast<double>(violations), 0.05 * (delta[0].size() - 1));
}

TEST(Sbma, ProjectedEstimatorsStayBoundedUnderHeavyNoise) {
  BilevelQuadraticOptions o;
  o.sigma2 = 0.25;
  const BilevelQuadraticProblem p = make_bilevel_quadratic(4, 4, 1.0, 8, o);
  const BilevelModel m = p.model();
  SbmaConfig cfg;
  cfg.gamma = 0.7;
  cfg.eta_x = 0.05;
  cfg.eta_y = 0.1;
  cfg.T = 10000;
  cfg.k = 3;
  cfg.l_gy = p.constants.l_gy;
  cfg.lambda = p.constants.lambda;
  // Radii well below the natural sizes so the projections are active.
  cfg.c_fy = 0.05;
  cfg.c_gxy = 0.01;
  Rng rng(9);
  EXPECT_NO_THROW(sbma_run(m, cfg, Vector::Ones(4), Vector::Zero(4), rng));
}

TEST(Sbma, ConvergesOnQuadraticBilevel) {
  const BilevelQuadraticProblem p = make_bilevel_quadratic(5, 5, 1.0, 10);
  const BilevelModel m = p.model();
  SbmaConfig cfg;
  cfg.gamma = 0.05;
  cfg.eta_x = 0.05;
  cfg.eta_y = 0.2;
  cfg.T = 20000;
  cfg.k = 20;
  cfg.l_gy = p.constants.l_gy;
  cfg.lambda = p.constants.lambda;
  cfg.c_fy = p.constants.c_fy;
  cfg.c_gxy = p.constants.c_gxy;
  const Vector x0 = Vector::Ones(5);
  Rng rng(11);
  const BilevelResult r = sbma_run(m, cfg, x0, Vector::Zero(5), rng);
  EXPECT_LT(p.F(r.x_last) - p.f_star, 0.01 * (p.F(x0) - p.f_star));
  EXPECT_LT(r.trajectory.last().grad_norm_sq, 0.01 * p.hypergrad(x0).squaredNorm());
}

TEST(BilevelQuadratic, SolutionMapIsLipschitz) {
  const BilevelQuadraticProblem p = make_bilevel_quadratic(5, 4, 0.5, 12);
  Rng rng(13);
  const Matrix k = p.h.inverse() * p.b;
  EXPECT_NEAR(p.constants.l_y, testutil::svd_norm(k), 1e-10);
  for (int i = 0; i < 100; ++i) {
    const Vector x1 = rng.normal_vector(5), x2 = rng.normal_vector(5);
    EXPECT_LT((p.y_star(x1) - p.y_star(x2) - k * (x1 - x2)).norm(), 1e-12);
    EXPECT_LE((p.y_star(x1) - p.y_star(x2)).norm(), p.constants.l_y * (x1 - x2).norm() * (1 + 1e-12));
  }
}
