#include "semaopt/problems/bilevel_quadratic.hpp"

#include <algorithm>
#include <cmath>

#include "semaopt/linalg.hpp"

namespace semaopt {

BilevelQuadraticProblem make_bilevel_quadratic(Index d, Index d_prime, double lambda,
                                               std::uint64_t seed,
                                               const BilevelQuadraticOptions& options) {
  require_config(d >= 1 && d_prime >= 1, "bilevel_quadratic: dimensions must be positive");
  require_config(lambda > 0.0, "bilevel_quadratic: lambda must be positive");
  const BilevelQuadraticOptions& o = options;
  require_config(o.sigma2 >= 0.0 && o.alpha > 0.0 && o.y_radius > 0.0,
                 "bilevel_quadratic: need sigma2 >= 0, alpha > 0, y_radius > 0");
  const double sigma = std::sqrt(o.sigma2);
  const double h_max = o.h_max_ratio * o.c_gyy;
  require_config(h_max >= lambda, "bilevel_quadratic: lambda exceeds the largest eigenvalue of H");
  require_config(lambda - sigma >= 0.0 && h_max + sigma <= o.c_gyy,
                 "bilevel_quadratic: spectral band violated by the Hessian noise");

  Rng rng(seed, 0x62696c76);
  BilevelQuadraticProblem p;
  p.seed = seed;
  p.options = o;
  const Matrix u = random_orthogonal(d_prime, rng);
  p.h = u * log_spaced(d_prime, lambda, h_max).asDiagonal() * u.transpose();
  p.h = 0.5 * (p.h + p.h.transpose());
  const Matrix bu = random_orthogonal(d_prime, rng);
  const Matrix bv = random_orthogonal(d, rng);
  Matrix s = Matrix::Zero(d_prime, d);
  const Index m = std::min(d, d_prime);
  const Vector sv = log_spaced(m, 0.5 * o.b_norm, o.b_norm);
  for (Index i = 0; i < m; ++i) s(i, i) = sv[i];
  p.b = bu * s * bv.transpose();
  p.c = o.c_norm * rng.unit_vector(d_prime);
  p.y_target = o.target_norm * rng.unit_vector(d_prime);

  const Matrix k = p.h.ldlt().solve(p.b);
  const Vector e = p.h.ldlt().solve(p.c) - p.y_target;
  const Matrix hess_F = k.transpose() * k + o.alpha * Matrix::Identity(d, d);
  p.x_star = -hess_F.ldlt().solve(k.transpose() * e);
  p.f_star = p.F(p.x_star);
  p.l_F = symmetric_norm(hess_F);

  BilevelConstants& c = p.constants;
  c.lambda = lambda;
  c.c_fy = o.y_radius + o.target_norm + sigma;
  c.c_gxy = spectral_norm(p.b) + sigma;
  c.c_gyy = o.c_gyy;
  c.l_fx = o.alpha;
  c.l_fy = 1.0;
  Matrix joint(d_prime, d + d_prime);
  joint << p.b, p.h;
  // The Neumann factors also need the scale to dominate every sampled Hessian.
  c.l_gy = std::max(spectral_norm(joint), o.c_gyy);
  c.l_gxy = 0.0;
  c.l_gyy = 0.0;
  c.l_y = spectral_norm(k);
  c.sigma2 = o.sigma2;
  return p;
}

Vector BilevelQuadraticProblem::y_star(const Vector& x) const {
  return h.ldlt().solve(b * x + c);
}

double BilevelQuadraticProblem::F(const Vector& x) const {
  return 0.5 * (y_star(x) - y_target).squaredNorm() + 0.5 * options.alpha * x.squaredNorm();
}

Vector BilevelQuadraticProblem::hypergrad(const Vector& x) const {
  return options.alpha * x + b.transpose() * h.ldlt().solve(y_star(x) - y_target);
}

Vector BilevelQuadraticProblem::grad_fx(const Vector& x, const Vector&) const {
  return options.alpha * x;
}

Vector BilevelQuadraticProblem::grad_fy(const Vector&, const Vector& y) const {
  return y - y_target;
}

Vector BilevelQuadraticProblem::grad_gy(const Vector& x, const Vector& y) const {
  return h * y - b * x - c;
}

Vector BilevelQuadraticProblem::project_y(const Vector& y) const {
  return project_ball(y, options.y_radius);
}

BilevelModel BilevelQuadraticProblem::model() const {
  const BilevelQuadraticProblem self = *this;
  const double sigma = std::sqrt(options.sigma2);
  BilevelModel m;
  BilevelOracle& o = m.oracle;
  o.dim_x = dim_x();
  o.dim_y = dim_y();
  o.constants = constants;
  o.fx = [self, sigma](const Vector& x, const Vector& y, Rng& rng) -> Vector {
    return self.grad_fx(x, y) + sigma * rng.unit_vector(self.dim_x());
  };
  o.fy = [self, sigma](const Vector& x, const Vector& y, Rng& rng) -> Vector {
    return self.grad_fy(x, y) + sigma * rng.unit_vector(self.dim_y());
  };
  o.gy = [self, sigma](const Vector& x, const Vector& y, Rng& rng) -> Vector {
    return self.grad_gy(x, y) + sigma * rng.unit_vector(self.dim_y());
  };
  o.gxy = [self, sigma](const Vector&, const Vector&, Rng& rng) -> Matrix {
    const Vector left = rng.unit_vector(self.dim_x());
    const Vector right = rng.unit_vector(self.dim_y());
    return self.hess_xy() + sigma * left * right.transpose();
  };
  o.gyy = [self, sigma](const Vector&, const Vector&, Rng& rng) -> Matrix {
    const Vector dir = rng.unit_vector(self.dim_y());
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    return self.h + sign * sigma * dir * dir.transpose();
  };
  m.hypergrad = [self](const Vector& x) { return self.hypergrad(x); };
  m.y_star = [self](const Vector& x) { return self.y_star(x); };
  m.F = [self](const Vector& x) { return self.F(x); };
  m.grad_fx = [self](const Vector& x, const Vector& y) { return self.grad_fx(x, y); };
  m.grad_fy = [self](const Vector& x, const Vector& y) { return self.grad_fy(x, y); };
  m.hess_xy = [self](const Vector&, const Vector&) { return self.hess_xy(); };
  m.hess_yy = [self](const Vector&, const Vector&) { return self.hess_yy(); };
  m.project_y = [self](const Vector& y) { return self.project_y(y); };
  return m;
}

}  // namespace semaopt
