#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <utility>

#include "semaopt/rng.hpp"
#include "semaopt/types.hpp"

namespace semaopt {

using VectorFn = std::function<Vector(const Vector&)>;
using ScalarFn = std::function<double(const Vector&)>;

/// Declared variance bound E||O(x) - grad F(x)||^2 <= sigma2 * (1 + c ||grad F(x)||^2).
/// `sigma2` is the total over all coordinates.
struct VarianceParams {
  double sigma2 = 0.0;
  double c = 0.0;

  double bound(double grad_norm_sq) const { return sigma2 * (1.0 + c * grad_norm_sq); }
};

/// Unbiased stochastic gradient oracle for a smooth objective.
class GradOracle {
 public:
  using Sampler = std::function<Vector(const Vector&, Rng&)>;

  GradOracle(Index dim, Sampler sampler, std::optional<VectorFn> true_grad,
             VarianceParams variance);

  Index dim() const { return dim_; }
  const VarianceParams& variance() const { return variance_; }
  bool has_true_grad() const { return true_grad_.has_value(); }

  /// One oracle call; with batch > 1 the mean of `batch` independent draws.
  Vector sample(const Vector& x, Rng& rng) const;
  Vector true_grad(const Vector& x) const;

  std::size_t batch() const { return batch_; }
  void set_batch(std::size_t batch);

 private:
  Index dim_;
  Sampler sampler_;
  std::optional<VectorFn> true_grad_;
  VarianceParams variance_;
  std::size_t batch_ = 1;
};

/// grad_fn(x) plus N(0, sigma^2 I) noise. A finite `clip` truncates each
/// noise coordinate symmetrically to [-clip*sigma, clip*sigma], which keeps the
/// oracle unbiased and bounds ||O(x)||_inf by ||grad F(x)||_inf + clip*sigma.
GradOracle gaussian_oracle(VectorFn grad_fn, Index dim, double sigma,
                           double clip = std::numeric_limits<double>::infinity());

/// d * grad F(x)_i e_i with i uniform in {0..d-1}.
GradOracle coordinate_oracle(VectorFn grad_fn, Index dim);

/// Unbiased sample variance (1/(n-1)) sum ||O_i(x) - mean||^2 over n draws.
double estimate_variance(const GradOracle& oracle, const Vector& x, std::size_t n, Rng& rng);

/// Stochastic partial gradients of f(x, y) returned as one tuple from a
/// single random draw.
struct MinMaxOracle {
  using Sampler = std::function<std::pair<Vector, Vector>(const Vector&, const Vector&, Rng&)>;
  using PartialFn = std::function<Vector(const Vector&, const Vector&)>;

  Index dim_x = 0;
  Index dim_y = 0;
  Sampler sample;
  std::optional<PartialFn> grad_x;
  std::optional<PartialFn> grad_y;
  double sigma2 = 0.0;

  Vector sample_x(const Vector& x, const Vector& y, Rng& rng) const {
    return sample(x, y, rng).first;
  }
  Vector sample_y(const Vector& x, const Vector& y, Rng& rng) const {
    return sample(x, y, rng).second;
  }
};

/// Constants attached to a bilevel problem (lower level g strongly convex in y).
struct BilevelConstants {
  double lambda = 0.0;
  double c_fy = 0.0;
  double c_gxy = 0.0;
  double c_gyy = 0.0;
  double l_fx = 0.0;
  double l_fy = 0.0;
  double l_gy = 0.0;
  double l_gxy = 0.0;
  double l_gyy = 0.0;
  /// Lipschitz constant of the lower-level solution map y*(x).
  double l_y = 0.0;
  double sigma2 = 0.0;
};

/// Stochastic oracles for the upper objective f and the lower objective g.
/// gxy is the d x d' mixed Hessian, gyy the d' x d' Hessian in y.
struct BilevelOracle {
  using VecSampler = std::function<Vector(const Vector&, const Vector&, Rng&)>;
  using MatSampler = std::function<Matrix(const Vector&, const Vector&, Rng&)>;

  Index dim_x = 0;
  Index dim_y = 0;
  VecSampler fx;
  VecSampler fy;
  VecSampler gy;
  MatSampler gxy;
  MatSampler gyy;
  BilevelConstants constants;
};

}  // namespace semaopt
