#pragma once

#include <cstdint>
#include <limits>

#include "semaopt/minimize.hpp"
#include "semaopt/oracle.hpp"
#include "semaopt/problems/common.hpp"

namespace semaopt {

/// F(x) = 1/2 (x - x*)^T Q (x - x*).
struct QuadraticProblem {
  std::uint64_t seed = 0;
  double cond = 1.0;
  Matrix q;
  Vector x_star;
  Vector eigenvalues;  ///< ascending, log-spaced in [1, cond]

  Index dim() const { return q.rows(); }
  double l_f() const { return cond; }
  double mu() const { return 1.0; }
  double f_star() const { return 0.0; }
  double value(const Vector& x) const;
  Vector grad(const Vector& x) const;

  /// Gaussian noise with per-coordinate standard deviation sigma, optionally
  /// truncated at clip * sigma.
  GradOracle oracle_gaussian(double sigma,
                             double clip = std::numeric_limits<double>::infinity()) const;
  GradOracle oracle_coordinate() const;

  /// x* + r u with u uniform on the sphere and r chosen so F(x) = gap.
  Vector point_with_gap(double gap, Rng& rng) const;
  /// Same, along a given direction.
  Vector point_with_gap(double gap, const Vector& direction) const;
};

QuadraticProblem make_quadratic(Index d, double cond, std::uint64_t seed);

}  // namespace semaopt
