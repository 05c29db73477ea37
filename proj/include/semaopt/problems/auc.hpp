#pragma once

#include <cstdint>
#include <vector>

#include "semaopt/minmax.hpp"
#include "semaopt/problems/common.hpp"

namespace semaopt {

/// Square-loss AUC maximization with a linear score h(w; a) = w^T a, posed
/// as min over x = (w, s, r) of max over the scalar y. The expectation is
/// the uniform average over a finite two-class sample.
struct AucProblem {
  std::uint64_t seed = 0;
  double separation = 0.0;
  Matrix features;          ///< n x d, one sample per row
  std::vector<int> labels;  ///< +1 or -1
  double p = 0.0;           ///< fraction of positive samples

  Index dim() const { return features.cols(); }
  Index dim_x() const { return features.cols() + 2; }
  Index samples() const { return features.rows(); }
  /// Curvature of f(x, .), 2 p (1 - p).
  double lambda() const { return 2.0 * p * (1.0 - p); }

  /// Loss of one sample and its gradient with respect to (w, s, r, y).
  double sample_loss(const Vector& x, double y, Index i) const;
  void sample_grad(const Vector& x, double y, Index i, Vector& gx, double& gy) const;

  double f(const Vector& x, double y) const;
  Vector grad_x(const Vector& x, double y) const;
  double grad_y(const Vector& x, double y) const;
  double y_star(const Vector& x) const;
  double F(const Vector& x) const { return f(x, y_star(x)); }
  Vector grad_F(const Vector& x) const { return grad_x(x, y_star(x)); }

  /// Mean over all positive/negative pairs of (1 - h(a) + h(a'))^2.
  double pairwise_square_loss(const Vector& w) const;
  /// Fraction of positive/negative pairs ranked correctly, ties counted 1/2.
  double empirical_auc(const Vector& w) const;
  /// Bayes-optimal population AUC of the generating Gaussians.
  double population_auc() const;
  /// Weight vector of an unregularized-limit logistic regression fit
  /// (Newton's method with a tiny ridge).
  Vector logistic_fit(int iterations = 50, double ridge = 1e-6) const;

  /// One uniformly drawn sample per oracle call.
  MinMaxModel model() const;
};

/// Positives ~ N(+(separation/2) 1, I), negatives ~ N(-(separation/2) 1, I),
/// so each coordinate carries a mean gap of `separation`.
AucProblem make_auc_minmax(Index n_pos, Index n_neg, Index d, double separation,
                           std::uint64_t seed);

}  // namespace semaopt
