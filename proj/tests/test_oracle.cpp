#include <gtest/gtest.h>

#include <cmath>

#include "semaopt/oracle.hpp"

using namespace semaopt;

namespace {

Vector identity_grad(const Vector& x) { return x; }

}  // namespace

TEST(GaussianOracle, ZeroNoiseReturnsGradient) {
  const auto grad = [](const Vector& x) -> Vector { return 3.0 * x.array().sin(); };
  const GradOracle o = gaussian_oracle(grad, 4, 0.0);
  Rng rng(1);
  const Vector x = Vector::LinSpaced(4, -1.0, 2.0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(o.sample(x, rng), grad(x));
  EXPECT_EQ(o.variance().sigma2, 0.0);
}

TEST(GaussianOracle, MeanOverManyDraws) {
  const GradOracle o = gaussian_oracle(identity_grad, 3, 1.0);
  Rng rng(2);
  const Vector x = Vector::Zero(3);
  const int n = 1000000;
  Vector mean = Vector::Zero(3);
  for (int i = 0; i < n; ++i) mean += o.sample(x, rng);
  mean /= n;
  EXPECT_LT(mean.cwiseAbs().maxCoeff(), 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(GaussianOracle, PerCoordinateVariance) {
  const GradOracle o = gaussian_oracle(identity_grad, 2, 2.0);
  Rng rng(3);
  const Vector x = Vector::Constant(2, 0.5);
  const int n = 1000000;
  Vector s = Vector::Zero(2), s2 = Vector::Zero(2);
  for (int i = 0; i < n; ++i) {
    const Vector g = o.sample(x, rng) - x;
    s += g;
    s2 += g.cwiseAbs2();
  }
  for (int j = 0; j < 2; ++j) {
    const double var = s2[j] / n - (s[j] / n) * (s[j] / n);
    EXPECT_GE(var, 3.9);
    EXPECT_LE(var, 4.1);
  }
  EXPECT_DOUBLE_EQ(o.variance().sigma2, 8.0);
}

TEST(GaussianOracle, ClippedNoiseIsBoundedAndUnbiased) {
  const GradOracle o = gaussian_oracle(identity_grad, 2, 1.0, 1.5);
  Rng rng(4);
  const Vector x = Vector::Zero(2);
  const int n = 200000;
  Vector mean = Vector::Zero(2);
  for (int i = 0; i < n; ++i) {
    const Vector g = o.sample(x, rng);
    ASSERT_LE(g.cwiseAbs().maxCoeff(), 1.5);
    mean += g / n;
  }
  EXPECT_LT(mean.cwiseAbs().maxCoeff(), 5.0 / std::sqrt(static_cast<double>(n)));
}

TEST(GaussianOracle, RejectsNegativeSigma) {
  EXPECT_THROW(gaussian_oracle(identity_grad, 2, -1.0), ConfigError);
}

TEST(CoordinateOracle, OutcomesInTwoDimensions) {
  const GradOracle o = coordinate_oracle(identity_grad, 2);
  Rng rng(5);
  const Vector x = Vector::Ones(2);
  int first = 0;
  const int n = 100000;
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector g = o.sample(x, rng);
    const bool is_first = g == Vector((Vector(2) << 2.0, 0.0).finished());
    const bool is_second = g == Vector((Vector(2) << 0.0, 2.0).finished());
    ASSERT_TRUE(is_first || is_second);
    first += is_first;
    err += (g - x).squaredNorm();
  }
  EXPECT_NEAR(static_cast<double>(first) / n, 0.5, 4.0 * 0.5 / std::sqrt(n));
  // Every outcome is at squared distance exactly 2.
  EXPECT_DOUBLE_EQ(err / n, 2.0);
}

TEST(CoordinateOracle, UnbiasedAndWithinDeclaredVariance) {
  const auto grad = [](const Vector& x) -> Vector { return x.array() * x.array() + 1.0; };
  const Index d = 5;
  const GradOracle o = coordinate_oracle(grad, d);
  Rng rng(6);
  const Vector x = Vector::LinSpaced(d, -1.0, 1.0);
  const Vector g = grad(x);
  const int n = 200000;
  Vector mean = Vector::Zero(d);
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector s = o.sample(x, rng);
    mean += s / n;
    err += (s - g).squaredNorm() / n;
  }
  // Exact second moment: E||O - g||^2 = d ||g||^2 - ||g||^2.
  const double exact = (d - 1) * g.squaredNorm();
  EXPECT_LT((mean - g).norm(), 5.0 * std::sqrt(exact / n));
  EXPECT_NEAR(err, exact, 0.05 * exact);
  EXPECT_LE(err, 1.1 * o.variance().bound(g.squaredNorm()));
}

TEST(EstimateVariance, GaussianAndCoordinate) {
  Rng rng(7);
  const GradOracle gauss = gaussian_oracle(identity_grad, 3, 1.0);
  EXPECT_NEAR(estimate_variance(gauss, Vector::Zero(3), 200000, rng), 3.0, 0.15);
  const GradOracle coord = coordinate_oracle(identity_grad, 2);
  EXPECT_NEAR(estimate_variance(coord, Vector::Ones(2), 200000, rng), 2.0, 0.1);
}

TEST(EstimateVariance, NeedsTwoSamples) {
  Rng rng(8);
  const GradOracle gauss = gaussian_oracle(identity_grad, 3, 1.0);
  try {
    estimate_variance(gauss, Vector::Zero(3), 1, rng);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "insufficient samples");
  }
}

TEST(GradOracle, BatchAveragingScalesVariance) {
  GradOracle o = gaussian_oracle(identity_grad, 2, 1.0);
  o.set_batch(4);
  EXPECT_DOUBLE_EQ(o.variance().sigma2, 0.5);
  Rng rng(9);
  EXPECT_NEAR(estimate_variance(o, Vector::Zero(2), 200000, rng), 0.5, 0.025);
  EXPECT_THROW(o.set_batch(0), ConfigError);
}

TEST(GradOracle, MissingTrueGradient) {
  const GradOracle o(1, [](const Vector& x, Rng&) { return x; }, std::nullopt, {});
  EXPECT_FALSE(o.has_true_grad());
  EXPECT_THROW(o.true_grad(Vector::Zero(1)), ConfigError);
}

// Property: unbiasedness and the declared variance bound at random points.
TEST(GradOracleProperty, UnbiasedWithDeclaredVarianceAtRandomPoints) {
  const auto grad = [](const Vector& x) -> Vector { return 2.0 * x; };
  const Index d = 4;
  const double sigma = 0.7;
  const GradOracle o = gaussian_oracle(grad, d, sigma);
  Rng rng(10);
  const int n = 50000;
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x = rng.normal_vector(d);
    Vector mean = Vector::Zero(d);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vector s = o.sample(x, rng);
      mean += s / n;
      err += (s - grad(x)).squaredNorm() / n;
    }
    EXPECT_LE((mean - grad(x)).norm(), 5.0 * sigma * std::sqrt(static_cast<double>(d) / n));
    EXPECT_LE(err, 1.1 * o.variance().bound(grad(x).squaredNorm()));
  }
}
