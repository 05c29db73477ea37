#pragma once

#include <cstdint>

#include "semaopt/bilevel.hpp"
#include "semaopt/problems/common.hpp"

namespace semaopt {

struct BilevelQuadraticOptions {
  double c_gyy = 2.0;        ///< bound on every sampled lower Hessian
  double h_max_ratio = 0.75; ///< largest eigenvalue of H as a fraction of c_gyy
  double b_norm = 0.05;      ///< spectral norm of B
  double c_norm = 0.3;       ///< norm of the lower-level offset c
  double alpha = 0.5;        ///< upper-level weight on ||x||^2
  double target_norm = 0.3;  ///< norm of the upper-level target y_0
  double y_radius = 0.7;     ///< radius of the ball Y
  double sigma2 = 0.001;     ///< variance of every oracle
};

/// Lower level g(x, y) = 1/2 y^T H y - y^T (B x + c); upper level
/// f(x, y) = 1/2 ||y - y_0||^2 + (alpha/2) ||x||^2; Y is a centred ball.
/// Every oracle adds noise of norm exactly sigma in a uniformly random
/// direction (a random-sign rank-one term for the Hessians), so the oracles
/// are unbiased with variance sigma^2 and uniformly bounded.
struct BilevelQuadraticProblem {
  std::uint64_t seed = 0;
  BilevelQuadraticOptions options;
  Matrix h;         ///< d' x d'
  Matrix b;         ///< d' x d
  Vector c;         ///< d'
  Vector y_target;  ///< y_0
  Vector x_star;
  double f_star = 0.0;
  BilevelConstants constants;
  double l_F = 0.0;

  Index dim_x() const { return b.cols(); }
  Index dim_y() const { return b.rows(); }

  Vector y_star(const Vector& x) const;
  double F(const Vector& x) const;
  Vector hypergrad(const Vector& x) const;
  Vector grad_fx(const Vector& x, const Vector& y) const;
  Vector grad_fy(const Vector& x, const Vector& y) const;
  Vector grad_gy(const Vector& x, const Vector& y) const;
  /// d x d' mixed second derivative of g, equal to -B^T.
  Matrix hess_xy() const { return -b.transpose(); }
  Matrix hess_yy() const { return h; }
  Vector project_y(const Vector& y) const;

  BilevelModel model() const;
};

/// Throws ConfigError when the noise cannot keep sampled Hessians inside
/// [0, c_gyy] or lambda exceeds the largest eigenvalue of H.
BilevelQuadraticProblem make_bilevel_quadratic(Index d, Index d_prime, double lambda,
                                               std::uint64_t seed,
                                               const BilevelQuadraticOptions& options = {});

}  // namespace semaopt
