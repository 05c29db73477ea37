#pragma once

#include <cstdint>

#include "semaopt/minmax.hpp"
#include "semaopt/problems/common.hpp"

namespace semaopt {

/// f(x, y) = x^T A y - (lambda/2) ||B y||^2 + c^T x. B = I for the strongly
/// concave kind; for the dual-PL kind B = D P^T has a nontrivial kernel and
/// the designated maximizer is the minimum-norm one.
struct SaddleProblem {
  ProblemKind kind = ProblemKind::SaddleQuadratic;
  std::uint64_t seed = 0;
  double lambda = 1.0;
  Matrix a;      ///< d x d'
  Vector c;      ///< d, in range(A)
  Matrix b;      ///< rows x d'
  Matrix y_map;  ///< y*(x) = y_map x
  Matrix dual_basis;  ///< d' x r' orthonormal basis of range(B^T)
  Vector x_star;
  double f_star = 0.0;
  double pl_lambda = 1.0;  ///< strong concavity or dual-side PL modulus
  double l_f = 0.0;        ///< spectral norm of the joint Hessian
  double l_F = 0.0;        ///< spectral norm of the Hessian of F

  Index dim_x() const { return a.rows(); }
  Index dim_y() const { return a.cols(); }
  bool dual_pl() const { return kind == ProblemKind::DualPLSaddle; }
  double kappa() const { return l_f / pl_lambda; }

  double f(const Vector& x, const Vector& y) const;
  Vector grad_x(const Vector& x, const Vector& y) const;
  Vector grad_y(const Vector& x, const Vector& y) const;
  Vector y_star(const Vector& x) const { return y_map * x; }
  double F(const Vector& x) const { return f(x, y_star(x)); }
  Vector grad_F(const Vector& x) const;
  /// max_y f(x, y) - f(x, y).
  double dual_gap(const Vector& x, const Vector& y) const { return F(x) - f(x, y); }

  /// Independent Gaussian noise of total variance sigma2 on each partial.
  /// For the dual-PL kind the y-noise lives in range(B^T).
  MinMaxModel model(double sigma2) const;
  /// Schedule constants at (x0, y0); delta_x0 = E||O_x(x0, y0) - grad_x f(x0, y0)||^2.
  MinMaxMeta meta(double sigma2, const Vector& x0, const Vector& y0) const;
  /// Point with F(x) - F* = gap along a random direction.
  Vector point_with_gap(double gap, Rng& rng) const;
};

SaddleProblem make_saddle_quadratic(Index d, Index d_prime, double lambda, std::uint64_t seed);
/// Requires d <= d' - 1; B has rank d' - 1.
SaddleProblem make_dual_pl_saddle(Index d, Index d_prime, double lambda, std::uint64_t seed);

}  // namespace semaopt
