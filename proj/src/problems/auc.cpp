#include "semaopt/problems/auc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace semaopt {

AucProblem make_auc_minmax(Index n_pos, Index n_neg, Index d, double separation,
                           std::uint64_t seed) {
  require_config(n_pos >= 1 && n_neg >= 1, "auc_minmax: degenerate single-class data");
  require_config(d >= 1, "auc_minmax: d must be positive");
  require_config(separation >= 0.0, "auc_minmax: separation must be nonnegative");
  Rng rng(seed, 0x61756321);
  AucProblem p;
  p.seed = seed;
  p.separation = separation;
  const Index n = n_pos + n_neg;
  p.features.resize(n, d);
  p.labels.resize(static_cast<std::size_t>(n));
  // Interleave the classes so no ordering artifact leaks into indices.
  Index pos_left = n_pos;
  for (Index i = 0; i < n; ++i) {
    const Index remaining = n - i;
    const bool positive = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(remaining))) < pos_left;
    if (positive) --pos_left;
    const double sign = positive ? 1.0 : -1.0;
    p.labels[static_cast<std::size_t>(i)] = positive ? 1 : -1;
    for (Index j = 0; j < d; ++j) p.features(i, j) = 0.5 * sign * separation + rng.normal();
  }
  p.p = static_cast<double>(n_pos) / static_cast<double>(n);
  return p;
}

double AucProblem::sample_loss(const Vector& x, double y, Index i) const {
  const Index d = dim();
  const double h = features.row(i).dot(x.head(d));
  const double s = x[d];
  const double r = x[d + 1];
  const double q = 1.0 - p;
  if (labels[static_cast<std::size_t>(i)] == 1)
    return q * (h - s) * (h - s) - 2.0 * (1.0 + y) * q * h - p * q * y * y;
  return p * (h - r) * (h - r) + 2.0 * (1.0 + y) * p * h - p * q * y * y;
}

void AucProblem::sample_grad(const Vector& x, double y, Index i, Vector& gx, double& gy) const {
  const Index d = dim();
  const auto a = features.row(i).transpose();
  const double h = a.dot(x.head(d));
  const double s = x[d];
  const double r = x[d + 1];
  const double q = 1.0 - p;
  gx.setZero(d + 2);
  if (labels[static_cast<std::size_t>(i)] == 1) {
    gx.head(d) = (2.0 * q * (h - s) - 2.0 * (1.0 + y) * q) * a;
    gx[d] = -2.0 * q * (h - s);
    gy = -2.0 * q * h - 2.0 * p * q * y;
  } else {
    gx.head(d) = (2.0 * p * (h - r) + 2.0 * (1.0 + y) * p) * a;
    gx[d + 1] = -2.0 * p * (h - r);
    gy = 2.0 * p * h - 2.0 * p * q * y;
  }
}

double AucProblem::f(const Vector& x, double y) const {
  double acc = 0.0;
  for (Index i = 0; i < samples(); ++i) acc += sample_loss(x, y, i);
  return acc / static_cast<double>(samples());
}

Vector AucProblem::grad_x(const Vector& x, double y) const {
  Vector acc = Vector::Zero(dim_x());
  Vector gx;
  double gy = 0.0;
  for (Index i = 0; i < samples(); ++i) {
    sample_grad(x, y, i, gx, gy);
    acc += gx;
  }
  return acc / static_cast<double>(samples());
}

double AucProblem::grad_y(const Vector& x, double y) const {
  Vector gx;
  double gy = 0.0;
  double acc = 0.0;
  for (Index i = 0; i < samples(); ++i) {
    sample_grad(x, y, i, gx, gy);
    acc += gy;
  }
  return acc / static_cast<double>(samples());
}

double AucProblem::y_star(const Vector& x) const {
  // grad_y f(x, y) = grad_y f(x, 0) - lambda y.
  return grad_y(x, 0.0) / lambda();
}

double AucProblem::pairwise_square_loss(const Vector& w) const {
  const Vector h = features * w.head(dim());
  double acc = 0.0;
  std::size_t pairs = 0;
  for (Index i = 0; i < samples(); ++i) {
    if (labels[static_cast<std::size_t>(i)] != 1) continue;
    for (Index j = 0; j < samples(); ++j) {
      if (labels[static_cast<std::size_t>(j)] != -1) continue;
      const double m = 1.0 - h[i] + h[j];
      acc += m * m;
      ++pairs;
    }
  }
  return acc / static_cast<double>(pairs);
}

double AucProblem::empirical_auc(const Vector& w) const {
  const Vector h = features * w.head(dim());
  std::vector<Index> order(static_cast<std::size_t>(samples()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return h[a] < h[b]; });
  // Mann-Whitney: walk tied blocks in increasing score order.
  double correct = 0.0;
  double neg_below = 0.0;
  double n_pos = 0.0;
  double n_neg = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double pos_block = 0.0;
    double neg_block = 0.0;
    while (j < order.size() && h[order[j]] == h[order[i]]) {
      if (labels[static_cast<std::size_t>(order[j])] == 1)
        pos_block += 1.0;
      else
        neg_block += 1.0;
      ++j;
    }
    correct += pos_block * (neg_below + 0.5 * neg_block);
    neg_below += neg_block;
    n_pos += pos_block;
    n_neg += neg_block;
    i = j;
  }
  return correct / (n_pos * n_neg);
}

double AucProblem::population_auc() const {
  // Mean score gap separation * sqrt(d) along 1/sqrt(d), unit variance per
  // class, so the difference of two scores has variance 2.
  const double gap = separation * std::sqrt(static_cast<double>(dim()));
  return 0.5 * std::erfc(-gap / 2.0);
}

Vector AucProblem::logistic_fit(int iterations, double ridge) const {
  const Index d = dim();
  Matrix design(samples(), d + 1);
  design.leftCols(d) = features;
  design.col(d).setOnes();
  Vector target(samples());
  for (Index i = 0; i < samples(); ++i)
    target[i] = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0;
  Vector beta = Vector::Zero(d + 1);
  for (int it = 0; it < iterations; ++it) {
    const Vector z = design * beta;
    Vector prob(samples());
    Vector weight(samples());
    for (Index i = 0; i < samples(); ++i) {
      prob[i] = 1.0 / (1.0 + std::exp(-z[i]));
      weight[i] = std::max(prob[i] * (1.0 - prob[i]), 1e-12);
    }
    const Vector grad = design.transpose() * (prob - target) + ridge * beta;
    Matrix hess = design.transpose() * weight.asDiagonal() * design;
    hess.diagonal().array() += ridge;
    const Vector step = hess.ldlt().solve(grad);
    beta -= step;
    if (step.norm() < 1e-12) break;
  }
  Vector w = Vector::Zero(d + 2);
  w.head(d) = beta.head(d);
  return w;
}

MinMaxModel AucProblem::model() const {
  const AucProblem self = *this;
  MinMaxModel m;
  m.oracle.dim_x = dim_x();
  m.oracle.dim_y = 1;
  m.oracle.sample = [self](const Vector& x, const Vector& y,
                           Rng& rng) -> std::pair<Vector, Vector> {
    const auto i = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(self.samples())));
    Vector gx;
    double gy = 0.0;
    self.sample_grad(x, y[0], i, gx, gy);
    return {std::move(gx), Vector::Constant(1, gy)};
  };
  m.oracle.grad_x = [self](const Vector& x, const Vector& y) { return self.grad_x(x, y[0]); };
  m.oracle.grad_y = [self](const Vector& x, const Vector& y) {
    return Vector::Constant(1, self.grad_y(x, y[0]));
  };
  m.grad_F = [self](const Vector& x) { return self.grad_F(x); };
  m.y_star = [self](const Vector& x) { return Vector::Constant(1, self.y_star(x)); };
  m.F = [self](const Vector& x) { return self.F(x); };
  m.f = [self](const Vector& x, const Vector& y) { return self.f(x, y[0]); };
  return m;
}

}  // namespace semaopt
