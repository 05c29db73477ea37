#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "semaopt/rng.hpp"

using semaopt::Rng;

TEST(Rng, SameSeedSameSequence) {
  Rng a(42, 3), b(42, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  Rng c(42, 3), d(42, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(Rng, StreamsAndSeedsDiffer) {
  Rng a(42, 0), b(42, 1), c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(Rng, SplitIsReproducibleAndDoesNotAdvanceParent) {
  Rng parent(7, 0);
  Rng untouched(7, 0);
  Rng c1 = parent.split(5);
  Rng c2 = parent.split(5);
  Rng other = parent.split(6);
  EXPECT_EQ(parent.next_u64(), untouched.next_u64());
  int same = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = c1.next_u64();
    ASSERT_EQ(x, c2.next_u64());
    same += x == other.next_u64();
  }
  EXPECT_EQ(same, 0);
  EXPECT_EQ(c1.stream(), 5u);
}

TEST(Rng, UniformRanges) {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double o = rng.uniform_open();
    ASSERT_GT(o, 0.0);
    ASSERT_LT(o, 1.0);
  }
}

TEST(Rng, UniformIndexIsUnbiased) {
  Rng rng(2);
  const int n = 7, draws = 700000;
  std::vector<int> counts(n, 0);
  for (int i = 0; i < draws; ++i) {
    const auto k = rng.uniform_index(n);
    ASSERT_LT(k, static_cast<std::uint64_t>(n));
    ++counts[k];
  }
  // Pearson chi-square with 6 degrees of freedom; 0.999 quantile is 22.46.
  double chi2 = 0.0;
  const double expected = static_cast<double>(draws) / n;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 22.46);
  EXPECT_EQ(rng.uniform_index(1), 0u);
}

TEST(Rng, NormalMoments) {
  Rng rng(3);
  const int n = 400000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(Rng, BernoulliFrequency) {
  Rng rng(4);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.3);
  EXPECT_NEAR(static_cast<double>(hits) / n, 0.3, 4.0 * std::sqrt(0.21 / n));
}

TEST(Rng, UnitVectorHasUnitNormAndZeroMean) {
  Rng rng(5);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd u = rng.unit_vector(4);
    ASSERT_NEAR(u.norm(), 1.0, 1e-14);
    mean += u / n;
  }
  EXPECT_LT(mean.cwiseAbs().maxCoeff(), 5.0 * 0.5 / std::sqrt(n));
}

TEST(Rng, SplitmixKnownValue) {
  // Reference output of splitmix64 seeded with 0.
  std::uint64_t state = 0;
  EXPECT_EQ(semaopt::splitmix64(state), 0xE220A8397B1DCDAFULL);
}
