#include "semaopt/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace semaopt {

GradOracle::GradOracle(Index dim, Sampler sampler, std::optional<VectorFn> true_grad,
                       VarianceParams variance)
    : dim_(dim), sampler_(std::move(sampler)), true_grad_(std::move(true_grad)),
      variance_(variance) {
  require_config(dim >= 1, "oracle dimension must be positive");
  require_config(variance.sigma2 >= 0.0 && variance.c >= 0.0,
                 "oracle variance parameters must be nonnegative");
}

Vector GradOracle::sample(const Vector& x, Rng& rng) const {
  if (batch_ == 1) return sampler_(x, rng);
  Vector acc = sampler_(x, rng);
  for (std::size_t i = 1; i < batch_; ++i) acc += sampler_(x, rng);
  return acc / static_cast<double>(batch_);
}

Vector GradOracle::true_grad(const Vector& x) const {
  if (!true_grad_) throw ConfigError("oracle has no true gradient");
  return (*true_grad_)(x);
}

void GradOracle::set_batch(std::size_t batch) {
  require_config(batch >= 1, "batch size must be at least 1");
  // Averaging k independent draws divides the variance by k.
  variance_.sigma2 = variance_.sigma2 * static_cast<double>(batch_) / static_cast<double>(batch);
  batch_ = batch;
}

GradOracle gaussian_oracle(VectorFn grad_fn, Index dim, double sigma, double clip) {
  require_config(sigma >= 0.0, "gaussian_oracle: sigma must be nonnegative");
  require_config(clip > 0.0, "gaussian_oracle: clip must be positive");
  const double bound = clip * sigma;
  auto sampler = [grad_fn, dim, sigma, bound](const Vector& x, Rng& rng) -> Vector {
    Vector g = grad_fn(x);
    if (sigma == 0.0) return g;
    for (Index i = 0; i < dim; ++i) {
      const double noise = sigma * rng.normal();
      g[i] += std::clamp(noise, -bound, bound);
    }
    return g;
  };
  const double total = static_cast<double>(dim) * sigma * sigma;
  return GradOracle(dim, std::move(sampler), grad_fn, VarianceParams{total, 0.0});
}

GradOracle coordinate_oracle(VectorFn grad_fn, Index dim) {
  require_config(dim >= 1, "coordinate_oracle: dimension must be positive");
  auto sampler = [grad_fn, dim](const Vector& x, Rng& rng) -> Vector {
    const Vector g = grad_fn(x);
    const auto i = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(dim)));
    Vector out = Vector::Zero(dim);
    out[i] = static_cast<double>(dim) * g[i];
    return out;
  };
  // E||O - grad||^2 = (d - 1)||grad||^2, covered by sigma2 (1 + c||grad||^2).
  const double sigma2 = std::max<double>(static_cast<double>(dim - 1), 1.0);
  return GradOracle(dim, std::move(sampler), grad_fn, VarianceParams{sigma2, 1.0});
}

double estimate_variance(const GradOracle& oracle, const Vector& x, std::size_t n, Rng& rng) {
  if (n < 2) throw ConfigError("insufficient samples");
  // Welford accumulation of the vector mean and the summed squared deviation.
  Vector mean = Vector::Zero(oracle.dim());
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector s = oracle.sample(x, rng);
    const Vector delta = s - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta.dot(s - mean);
  }
  return m2 / static_cast<double>(n - 1);
}

}  // namespace semaopt
