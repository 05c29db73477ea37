#include <gtest/gtest.h>

#include <cmath>

#include "semaopt/rng.hpp"
#include "semaopt/scalers.hpp"

using namespace semaopt;

namespace {

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

ScalerKind kind_of(ScalerTag tag, double beta2 = 0.999) {
  ScalerKind k;
  k.tag = tag;
  k.beta2 = beta2;
  if (tag == ScalerTag::AdaBound) {
    k.clip_lower = 0.5;
    k.clip_upper = 1.0;
  }
  return k;
}

}  // namespace

TEST(Scalers, TagRoundTrip) {
  for (ScalerTag tag : kAllScalerTags) EXPECT_EQ(parse_scaler_tag(to_string(tag)), tag);
  try {
    parse_scaler_tag("adagrad");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("adagrad"), std::string::npos);
  }
}

TEST(Scalers, AdamWithoutMomentumUsesSquaredSample) {
  const ScalerKind k = kind_of(ScalerTag::Adam, 0.0);
  ScalerState s = make_scaler_state(k, 2, 1.0);
  scaler_update(s, k, vec2(3.0, 4.0), vec2(0.0, 0.0));
  EXPECT_EQ(s.u, vec2(9.0, 16.0));
  const Vector scale = step_scale(s);
  EXPECT_DOUBLE_EQ(scale[0], 0.25);
  EXPECT_DOUBLE_EQ(scale[1], 0.2);
}

TEST(Scalers, AmsgradKeepsRunningMaximum) {
  const ScalerKind k = kind_of(ScalerTag::AMSGrad, 0.0);
  ScalerState s = make_scaler_state(k, 2, 1.0);
  scaler_update(s, k, vec2(2.0, 1.0), vec2(0.0, 0.0));
  scaler_update(s, k, vec2(1.0, 3.0), vec2(0.0, 0.0));
  EXPECT_EQ(s.u, vec2(4.0, 9.0));
}

TEST(Scalers, AdaBoundClipsIntoBand) {
  const ScalerKind k = kind_of(ScalerTag::AdaBound, 0.0);
  ScalerState s = make_scaler_state(k, 2, 7.0);
  EXPECT_EQ(s.g0, 0.0);
  scaler_update(s, k, vec2(0.5, 3.0), vec2(0.0, 0.0));
  EXPECT_EQ(s.u_aux, vec2(0.25, 9.0));
  EXPECT_EQ(s.u, vec2(1.0, 4.0));
  EXPECT_EQ(step_scale(s), vec2(1.0, 0.5));
}

TEST(Scalers, ZeroAccumulatorWithoutG0IsUnbounded) {
  const ScalerKind k = kind_of(ScalerTag::Adam);
  const ScalerState s = make_scaler_state(k, 2, 0.0);
  try {
    step_scale(s);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "unbounded scale");
  }
}

TEST(Scalers, ShbScaleIsConstant) {
  const ScalerKind k = kind_of(ScalerTag::SHB);
  ScalerState s = make_scaler_state(k, 3, 0.0);
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    scaler_update(s, k, rng.normal_vector(3, 10.0), rng.normal_vector(3));
    EXPECT_EQ(step_scale(s), Vector::Ones(3));
  }
}

TEST(Scalers, AdamPlusUsesNormOfMovingAverage) {
  const ScalerKind k = kind_of(ScalerTag::AdamPlus);
  ScalerState s = make_scaler_state(k, 2, 0.5);
  scaler_update(s, k, vec2(100.0, -7.0), vec2(3.0, 4.0));
  EXPECT_EQ(s.u, vec2(5.0, 5.0));
  EXPECT_DOUBLE_EQ(step_scale(s)[0], 1.0 / (std::sqrt(5.0) + 0.5));
  EXPECT_THROW(make_scaler_state(k, 2, 0.0), ConfigError);
}

TEST(Scalers, AdaFomMatchesBatchMean) {
  const ScalerKind k = kind_of(ScalerTag::AdaFom);
  ScalerState s = make_scaler_state(k, 3, 1.0);
  Rng rng(2);
  Vector sum_sq = Vector::Zero(3);
  for (int t = 1; t <= 500; ++t) {
    const Vector g = rng.normal_vector(3, 2.0);
    sum_sq += g.cwiseAbs2();
    scaler_update(s, k, g, g);
    ASSERT_LT((s.u - sum_sq / t).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Scalers, AmsgradScaleIsNonincreasing) {
  const ScalerKind k = kind_of(ScalerTag::AMSGrad, 0.9);
  ScalerState s = make_scaler_state(k, 4, 0.1);
  Rng rng(3);
  Vector prev = Vector::Constant(4, std::numeric_limits<double>::infinity());
  for (int t = 0; t < 2000; ++t) {
    scaler_update(s, k, rng.normal_vector(4, 1.0 + (t % 17)), Vector::Zero(4));
    const Vector cur = step_scale(s);
    ASSERT_TRUE((cur.array() <= prev.array()).all());
    prev = cur;
  }
}

TEST(Scalers, AdaBoundStaysInBandOnUnboundedStream) {
  ScalerKind k = kind_of(ScalerTag::AdaBound, 0.9);
  k.clip_lower = 0.2;
  k.clip_upper = 3.0;
  ScalerState s = make_scaler_state(k, 3, 0.0);
  Rng rng(4);
  for (int t = 0; t < 5000; ++t) {
    // Cauchy samples have no finite moments.
    Vector g(3);
    for (Index i = 0; i < 3; ++i) g[i] = std::tan(M_PI * (rng.uniform_open() - 0.5));
    if (t % 1000 == 0) g.setZero();
    scaler_update(s, k, g, g);
    const Vector sc = step_scale(s);
    ASSERT_GE(sc.minCoeff(), 0.2 * (1 - 1e-15));
    ASSERT_LE(sc.maxCoeff(), 3.0 * (1 + 1e-15));
  }
}

TEST(Scalers, EffectiveBoundsTable) {
  const ScaleBounds shb = effective_bounds(kind_of(ScalerTag::SHB), 0.0, 0.0);
  EXPECT_EQ(shb.lower, 1.0);
  EXPECT_EQ(shb.upper, 1.0);
  const ScaleBounds adam = effective_bounds(kind_of(ScalerTag::Adam), 9.0, 1.0);
  EXPECT_DOUBLE_EQ(adam.lower, 0.1);
  EXPECT_DOUBLE_EQ(adam.upper, 1.0);
  const ScaleBounds plus = effective_bounds(kind_of(ScalerTag::AdamPlus), 4.0, 1.0);
  EXPECT_DOUBLE_EQ(plus.lower, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(plus.upper, 1.0);
  const ScaleBounds bound = effective_bounds(kind_of(ScalerTag::AdaBound), 0.0, 0.0);
  EXPECT_EQ(bound.lower, 0.5);
  EXPECT_EQ(bound.upper, 1.0);
  EXPECT_THROW(effective_bounds(kind_of(ScalerTag::Adam), 9.0, 0.0), ConfigError);
}

TEST(Scalers, InvalidParameters) {
  ScalerKind k = kind_of(ScalerTag::AdaBound);
  k.clip_lower = 2.0;
  k.clip_upper = 1.0;
  EXPECT_THROW(make_scaler_state(k, 2, 0.0), ConfigError);
  EXPECT_THROW(make_scaler_state(kind_of(ScalerTag::Adam, 1.0), 2, 1.0), ConfigError);
  EXPECT_THROW(make_scaler_state(kind_of(ScalerTag::Adam), 2, -1.0), ConfigError);
}

// Property: with ||g||_inf <= G (||g|| <= G for Adam+ and ||v|| <= G), every
// coordinate of the scale stays in the effective bounds.
TEST(ScalersProperty, ScaleWithinEffectiveBoundsOnBoundedStreams) {
  const Index dim = 6;
  const double G = 3.0, g0 = 0.5;
  Rng rng(5);
  for (ScalerTag tag : kAllScalerTags) {
    ScalerKind k = kind_of(tag, 0.99);
    if (tag == ScalerTag::AdaBound) {
      k.clip_lower = 0.4;
      k.clip_upper = 1.5;
    }
    const ScaleBounds b = effective_bounds(k, G, g0);
    ScalerState s = make_scaler_state(k, dim, g0);
    Vector v = Vector::Zero(dim);
    for (int t = 0; t < 3000; ++t) {
      Vector g(dim);
      for (Index i = 0; i < dim; ++i) g[i] = G * (2.0 * rng.uniform() - 1.0);
      if (tag == ScalerTag::AdamPlus) g *= 1.0 / std::sqrt(static_cast<double>(dim));
      v = 0.8 * v + 0.2 * g;
      scaler_update(s, k, g, v);
      const Vector sc = step_scale(s);
      ASSERT_GE(sc.minCoeff(), b.lower * (1 - 1e-12)) << to_string(tag);
      ASSERT_LE(sc.maxCoeff(), b.upper * (1 + 1e-12)) << to_string(tag);
    }
  }
}
