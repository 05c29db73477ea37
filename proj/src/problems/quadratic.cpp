#include "semaopt/problems/quadratic.hpp"

#include <cmath>

namespace semaopt {

QuadraticProblem make_quadratic(Index d, double cond, std::uint64_t seed) {
  require_config(d >= 1, "quadratic: d must be positive");
  require_config(cond >= 1.0, "quadratic: cond must be at least 1");
  Rng rng(seed, 0x71756164);
  QuadraticProblem p;
  p.seed = seed;
  p.cond = cond;
  p.eigenvalues = log_spaced(d, 1.0, cond);
  const Matrix u = random_orthogonal(d, rng);
  p.q = u * p.eigenvalues.asDiagonal() * u.transpose();
  p.q = 0.5 * (p.q + p.q.transpose());
  p.x_star = rng.normal_vector(d);
  return p;
}

double QuadraticProblem::value(const Vector& x) const {
  const Vector e = x - x_star;
  return 0.5 * e.dot(q * e);
}

Vector QuadraticProblem::grad(const Vector& x) const { return q * (x - x_star); }

GradOracle QuadraticProblem::oracle_gaussian(double sigma, double clip) const {
  const Matrix qq = q;
  const Vector xs = x_star;
  return gaussian_oracle([qq, xs](const Vector& x) -> Vector { return qq * (x - xs); }, dim(),
                         sigma, clip);
}

GradOracle QuadraticProblem::oracle_coordinate() const {
  const Matrix qq = q;
  const Vector xs = x_star;
  return coordinate_oracle([qq, xs](const Vector& x) -> Vector { return qq * (x - xs); },
                           dim());
}

Vector QuadraticProblem::point_with_gap(double gap, const Vector& direction) const {
  require_config(gap >= 0.0, "point_with_gap: gap must be nonnegative");
  require_config(direction.size() == dim() && direction.norm() > 0.0,
                 "point_with_gap: bad direction");
  const double curv = direction.dot(q * direction);
  return x_star + std::sqrt(2.0 * gap / curv) * direction;
}

Vector QuadraticProblem::point_with_gap(double gap, Rng& rng) const {
  return point_with_gap(gap, rng.unit_vector(dim()));
}

}  // namespace semaopt
