#pragma once

#include <optional>

#include "semaopt/types.hpp"

namespace semaopt {

/// Eigen-decomposition M = V diag(values) V^T of a symmetric matrix.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is at most
/// `tol` times the Frobenius norm of M. Intended for d <= 64.
SymmetricEigen jacobi_eigen(const Matrix& m, double tol = 1e-12, int max_sweeps = 100);

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// v * min(1, R/||v||).
Vector project_ball(const Vector& v, double radius);
/// Elementwise clamp into [lo, hi].
Vector project_box(const Vector& v, double lo, double hi);
Vector project_box(const Vector& v, const Vector& lo, const Vector& hi);

/// Clamp the eigenvalues of a symmetric matrix into [floor, ceiling].
/// Throws ConfigError when M is asymmetric beyond 1e-8.
Matrix project_spectral(const Matrix& m, std::optional<double> floor,
                        std::optional<double> ceiling);

/// Clamp the singular values of an arbitrary matrix to at most `bound`, the
/// Frobenius-nearest matrix with spectral norm <= bound. When `norm_bound`
/// is given it receives an upper bound on the spectral norm of the result.
Matrix project_spectral_norm(const Matrix& m, double bound, double* norm_bound = nullptr);

}  // namespace semaopt
