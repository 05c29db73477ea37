#pragma once

#include <cstdint>

#include "semaopt/oracle.hpp"
#include "semaopt/problems/common.hpp"

namespace semaopt {

/// F(x) = 1/2 ||A x - b||^2 with rank(A) = r < d and b in range(A).
struct PlLeastSquaresProblem {
  std::uint64_t seed = 0;
  Matrix a;
  Vector b;
  Vector x_particular;  ///< minimum-norm solution
  Matrix row_basis;     ///< d x r orthonormal basis of range(A^T)
  Vector spectrum;      ///< nonzero eigenvalues of A^T A, ascending

  Index dim() const { return a.cols(); }
  Index rank() const { return row_basis.cols(); }
  double mu() const { return spectrum[0]; }
  double l_f() const { return spectrum[spectrum.size() - 1]; }
  double f_star() const { return 0.0; }
  double value(const Vector& x) const;
  Vector grad(const Vector& x) const;
  /// Unit vector spanning part of the kernel of A.
  Vector null_direction(Index i = 0) const;
  /// Euclidean distance from x to the solution set {x : A x = b}.
  double distance_to_solutions(const Vector& x) const;

  GradOracle oracle_gaussian(double sigma) const;
  /// Point with F(x) = gap, displaced from the minimum-norm solution along a
  /// random direction in range(A^T) plus a random kernel component.
  Vector point_with_gap(double gap, Rng& rng) const;
};

/// Nonzero eigenvalues of A^T A are log-spaced in [0.5, 2].
PlLeastSquaresProblem make_pl_least_squares(Index d, Index r, std::uint64_t seed);

}  // namespace semaopt
