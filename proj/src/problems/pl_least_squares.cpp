#include "semaopt/problems/pl_least_squares.hpp"

#include <cmath>

namespace semaopt {

PlLeastSquaresProblem make_pl_least_squares(Index d, Index r, std::uint64_t seed) {
  require_config(r >= 1 && r < d, "pl_least_squares: need 1 <= r < d");
  Rng rng(seed, 0x706c6c73);
  PlLeastSquaresProblem p;
  p.seed = seed;
  p.spectrum = log_spaced(r, 0.5, 2.0);
  const Matrix u = random_orthogonal(d, rng);
  const Matrix v = random_orthogonal(d, rng);
  p.row_basis = v.leftCols(r);
  p.a = u.leftCols(r) * p.spectrum.cwiseSqrt().asDiagonal() * p.row_basis.transpose();
  p.x_particular = p.row_basis * rng.normal_vector(r);
  p.b = p.a * p.x_particular;
  return p;
}

double PlLeastSquaresProblem::value(const Vector& x) const {
  return 0.5 * (a * x - b).squaredNorm();
}

Vector PlLeastSquaresProblem::grad(const Vector& x) const {
  return a.transpose() * (a * x - b);
}

Vector PlLeastSquaresProblem::null_direction(Index i) const {
  require_config(i >= 0 && i < dim() - rank(), "null_direction: index out of range");
  // Gram-Schmidt of the i-th canonical vector against range(A^T) and the
  // earlier kernel directions, trying successive canonical vectors.
  Matrix basis = row_basis;
  Index found = 0;
  for (Index j = 0; j < dim(); ++j) {
    Vector e = Vector::Unit(dim(), j);
    e -= basis * (basis.transpose() * e);
    e -= basis * (basis.transpose() * e);
    const double n = e.norm();
    if (n < 1e-8) continue;
    e /= n;
    if (found == i) return e;
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = e;
    ++found;
  }
  throw InternalError("null_direction: kernel basis incomplete");
}

double PlLeastSquaresProblem::distance_to_solutions(const Vector& x) const {
  return (row_basis.transpose() * (x - x_particular)).norm();
}

GradOracle PlLeastSquaresProblem::oracle_gaussian(double sigma) const {
  const Matrix aa = a;
  const Vector bb = b;
  return gaussian_oracle(
      [aa, bb](const Vector& x) -> Vector { return aa.transpose() * (aa * x - bb); }, dim(),
      sigma);
}

Vector PlLeastSquaresProblem::point_with_gap(double gap, Rng& rng) const {
  require_config(gap >= 0.0, "point_with_gap: gap must be nonnegative");
  const Vector w = rng.unit_vector(rank());
  const Vector dir = row_basis * w;
  const double curv = (a * dir).squaredNorm();
  Vector kernel = rng.normal_vector(dim());
  kernel -= row_basis * (row_basis.transpose() * kernel);
  return x_particular + std::sqrt(2.0 * gap / curv) * dir + kernel;
}

}  // namespace semaopt
