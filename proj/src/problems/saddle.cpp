#include "semaopt/problems/saddle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace semaopt {

namespace {

Matrix rectangular(Index rows, Index cols, const Vector& sv, Rng& rng) {
  const Matrix u = random_orthogonal(rows, rng);
  const Matrix v = random_orthogonal(cols, rng);
  Matrix s = Matrix::Zero(rows, cols);
  for (Index i = 0; i < sv.size(); ++i) s(i, i) = sv[i];
  return u * s * v.transpose();
}

Matrix pinv(const Matrix& m) {
  return m.completeOrthogonalDecomposition().pseudoInverse();
}

void finish(SaddleProblem& p, Rng& rng) {
  const Index d = p.dim_x();
  const Index dp = p.dim_y();
  p.c = p.a * rng.normal_vector(dp);
  const Matrix hess_F = p.a * p.y_map;
  p.x_star = -pinv(hess_F) * p.c;
  p.f_star = p.F(p.x_star);
  p.l_F = symmetric_norm(hess_F);
  Matrix joint = Matrix::Zero(d + dp, d + dp);
  joint.topRightCorner(d, dp) = p.a;
  joint.bottomLeftCorner(dp, d) = p.a.transpose();
  joint.bottomRightCorner(dp, dp) = -p.lambda * p.b.transpose() * p.b;
  p.l_f = symmetric_norm(joint);
}

}  // namespace

SaddleProblem make_saddle_quadratic(Index d, Index d_prime, double lambda, std::uint64_t seed) {
  require_config(d >= 1 && d_prime >= 1, "saddle_quadratic: dimensions must be positive");
  require_config(lambda > 0.0, "saddle_quadratic: lambda must be positive");
  Rng rng(seed, 0x73616464);
  SaddleProblem p;
  p.kind = ProblemKind::SaddleQuadratic;
  p.seed = seed;
  p.lambda = lambda;
  p.a = rectangular(d, d_prime, log_spaced(std::min(d, d_prime), 0.25, 0.5), rng);
  p.b = Matrix::Identity(d_prime, d_prime);
  p.dual_basis = Matrix::Identity(d_prime, d_prime);
  p.y_map = p.a.transpose() / lambda;
  p.pl_lambda = lambda;
  finish(p, rng);
  return p;
}

SaddleProblem make_dual_pl_saddle(Index d, Index d_prime, double lambda, std::uint64_t seed) {
  require_config(d >= 1 && d_prime >= 2 && d <= d_prime - 1,
                 "dual_pl_saddle: need 1 <= d <= d' - 1");
  require_config(lambda > 0.0, "dual_pl_saddle: lambda must be positive");
  Rng rng(seed, 0x6470736c);
  const Index r = d_prime - 1;
  SaddleProblem p;
  p.kind = ProblemKind::DualPLSaddle;
  p.seed = seed;
  p.lambda = lambda;
  const Matrix basis = random_orthogonal(d_prime, rng);
  p.dual_basis = basis.leftCols(r);
  const Vector dsv = log_spaced(r, 1.0, std::sqrt(2.0));
  p.b = dsv.asDiagonal() * p.dual_basis.transpose();
  const Matrix m = rectangular(d, r, log_spaced(d, 0.25, 0.5), rng);
  p.a = m * p.dual_basis.transpose();
  // Minimum-norm maximizer of x^T M P^T y - (lambda/2) ||D P^T y||^2.
  p.y_map = p.dual_basis * dsv.cwiseAbs2().cwiseInverse().asDiagonal() * m.transpose() / lambda;
  p.pl_lambda = lambda * dsv[0] * dsv[0];
  finish(p, rng);
  return p;
}

double SaddleProblem::f(const Vector& x, const Vector& y) const {
  return x.dot(a * y) - 0.5 * lambda * (b * y).squaredNorm() + c.dot(x);
}

Vector SaddleProblem::grad_x(const Vector&, const Vector& y) const { return a * y + c; }

Vector SaddleProblem::grad_y(const Vector& x, const Vector& y) const {
  return a.transpose() * x - lambda * (b.transpose() * (b * y));
}

Vector SaddleProblem::grad_F(const Vector& x) const { return a * (y_map * x) + c; }

MinMaxModel SaddleProblem::model(double sigma2) const {
  require_config(sigma2 >= 0.0, "saddle: sigma2 must be nonnegative");
  const SaddleProblem self = *this;
  const double sx = std::sqrt(sigma2 / static_cast<double>(dim_x()));
  const Index r = dual_basis.cols();
  const double sy = std::sqrt(sigma2 / static_cast<double>(r));
  MinMaxModel m;
  m.oracle.dim_x = dim_x();
  m.oracle.dim_y = dim_y();
  m.oracle.sigma2 = sigma2;
  m.oracle.sample = [self, sx, sy, r](const Vector& x, const Vector& y,
                                      Rng& rng) -> std::pair<Vector, Vector> {
    Vector gx = self.grad_x(x, y) + rng.normal_vector(self.dim_x(), sx);
    Vector gy = self.grad_y(x, y) + self.dual_basis * rng.normal_vector(r, sy);
    return {std::move(gx), std::move(gy)};
  };
  m.oracle.grad_x = [self](const Vector& x, const Vector& y) { return self.grad_x(x, y); };
  m.oracle.grad_y = [self](const Vector& x, const Vector& y) { return self.grad_y(x, y); };
  m.grad_F = [self](const Vector& x) { return self.grad_F(x); };
  m.y_star = [self](const Vector& x) { return self.y_star(x); };
  m.F = [self](const Vector& x) { return self.F(x); };
  m.f = [self](const Vector& x, const Vector& y) { return self.f(x, y); };
  return m;
}

MinMaxMeta SaddleProblem::meta(double sigma2, const Vector& x0, const Vector&) const {
  MinMaxMeta out;
  out.lambda = pl_lambda;
  out.l_f = l_f;
  out.l_F = l_F;
  out.sigma2 = sigma2;
  out.delta_f = F(x0) - f_star;
  // v0 = O_x(x0, y0), so E||v0 - grad_x f(x0, y0)||^2 is the oracle variance.
  out.delta_x0 = sigma2;
  out.dual_pl = dual_pl();
  return out;
}

Vector SaddleProblem::point_with_gap(double gap, Rng& rng) const {
  require_config(gap >= 0.0, "point_with_gap: gap must be nonnegative");
  const Matrix hess_F = a * y_map;
  Vector dir = rng.unit_vector(dim_x());
  double curv = dir.dot(hess_F * dir);
  require_config(curv > 0.0, "point_with_gap: flat direction drawn");
  return x_star + std::sqrt(2.0 * gap / curv) * dir;
}

}  // namespace semaopt
