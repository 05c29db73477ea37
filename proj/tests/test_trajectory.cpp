#include <gtest/gtest.h>

#include <cmath>

#include "semaopt/trajectory.hpp"

using namespace semaopt;

namespace {

TrajectoryRecord rec(std::size_t t, double g, double d = kNotAvailable) {
  TrajectoryRecord r;
  r.t = t;
  r.grad_norm_sq = g;
  r.delta = d;
  return r;
}

}  // namespace

TEST(Trajectory, DenseThenGeometricLogging) {
  Trajectory tr(100);
  for (std::size_t t = 0; t < 100000; ++t) tr.add(rec(t, 1.0));
  const auto& r = tr.records();
  for (std::size_t t = 0; t < 100; ++t) ASSERT_EQ(r[t].t, t);
  // Beyond the dense range consecutive logged steps grow by about 10%.
  for (std::size_t i = 101; i < r.size(); ++i) {
    const double ratio = static_cast<double>(r[i].t) / static_cast<double>(r[i - 1].t);
    ASSERT_GE(ratio, 1.0);
    ASSERT_LE(ratio, 1.1 + 1.0 / static_cast<double>(r[i - 1].t));
  }
  EXPECT_LT(r.size(), 100u + 100u);
  EXPECT_EQ(tr.steps(), 100000u);
}

TEST(Trajectory, RunningMeansAreExactOverAllSteps) {
  Trajectory tr(10);
  double sum = 0.0, sum_d = 0.0;
  for (std::size_t t = 0; t < 5000; ++t) {
    const double g = std::sin(static_cast<double>(t)) + 2.0;
    sum += g;
    sum_d += 0.5 * g;
    tr.add(rec(t, g, 0.5 * g));
  }
  EXPECT_NEAR(tr.avg_grad_norm_sq(), sum / 5000.0, 1e-12);
  EXPECT_NEAR(tr.avg_delta(), sum_d / 5000.0, 1e-12);
  EXPECT_TRUE(std::isnan(tr.avg_delta_y()));
  EXPECT_NEAR(tr.last().avg_grad_norm_sq, sum / 5000.0, 1e-12);
  for (const auto& r : tr.records()) ASSERT_GT(r.avg_grad_norm_sq, 0.0);
}

TEST(Trajectory, ForcedRecordsAndAppend) {
  Trajectory a(2), b(2);
  for (std::size_t t = 0; t < 50; ++t) a.add(rec(t, 1.0), t == 33);
  bool has33 = false;
  for (const auto& r : a.records()) has33 |= r.t == 33;
  EXPECT_TRUE(has33);
  for (std::size_t t = 50; t < 60; ++t) b.add(rec(t, 3.0));
  a.append(b);
  EXPECT_EQ(a.steps(), 60u);
  EXPECT_NEAR(a.avg_grad_norm_sq(), (50.0 + 30.0) / 60.0, 1e-15);
  EXPECT_EQ(a.last().t, 59u);
}

TEST(Trajectory, DivergenceErrorCarriesPartialTrajectory) {
  Trajectory tr;
  tr.add(rec(0, 1.0));
  const DivergenceError e(7, tr);
  EXPECT_EQ(e.step(), 7u);
  EXPECT_EQ(e.trajectory().steps(), 1u);
  EXPECT_NE(std::string(e.what()).find("7"), std::string::npos);
}
