#include "semaopt/sema.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semaopt/linalg.hpp"

namespace semaopt {

SemaState sema_step(const SemaState& state, const Vector& sample) {
  if (state.v.size() != sample.size()) throw ConfigError("sema_step: dimension mismatch");
  SemaState next = state;
  sema_update(next.v, state.gamma, sample);
  return next;
}

void sema_update(Vector& v, double gamma, const Vector& sample) {
  v = (1.0 - gamma) * v + gamma * sample;
}

void sema_update(Matrix& v, double gamma, const Matrix& sample) {
  v = (1.0 - gamma) * v + gamma * sample;
}

void NeumannConfig::validate() const {
  require_config(k >= 1, "neumann: k must be at least 1");
  require_config(lambda > 0.0 && lambda <= c_gyy, "neumann: require 0 < lambda <= C_gyy");
}

Matrix neumann_inverse_sample(const HessianSampler& hess, const NeumannConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto k = static_cast<std::uint64_t>(cfg.k);
  const std::uint64_t p = cfg.indexing == NeumannIndexing::ZeroBased ? rng.uniform_index(k)
                                                                      : rng.uniform_index(k) + 1;
  Matrix first = hess(rng);
  const Index n = first.rows();
  Matrix prod = Matrix::Identity(n, n);
  const double inv_c = 1.0 / cfg.c_gyy;
  for (std::uint64_t i = 0; i < p; ++i) {
    const Matrix h_i = (i == 0 || cfg.reuse_sample) ? first : hess(rng);
    prod = prod * (Matrix::Identity(n, n) - inv_c * h_i);
  }
  return (static_cast<double>(cfg.k) * inv_c) * prod;
}

double neumann_expected_scalar(double h, const NeumannConfig& cfg) {
  cfg.validate();
  const double q = 1.0 - h / cfg.c_gyy;
  const int first = cfg.indexing == NeumannIndexing::ZeroBased ? 0 : 1;
  double sum = 0.0;
  for (int p = first; p < first + cfg.k; ++p) sum += std::pow(q, p);
  return sum / cfg.c_gyy;
}

double neumann_bias_bound(const NeumannConfig& cfg) {
  cfg.validate();
  return std::pow(1.0 - cfg.lambda / cfg.c_gyy, cfg.k) / cfg.lambda;
}

NeumannBiasReport neumann_bias_check(const Matrix& hess, const NeumannConfig& cfg, std::size_t n,
                                     Rng& rng) {
  cfg.validate();
  require_config(n >= 2, "neumann_bias_check: need at least two draws");
  const SymmetricEigen eig = jacobi_eigen(hess);
  const double tol = 1e-10 * std::max(1.0, cfg.c_gyy);
  if (eig.values.minCoeff() < cfg.lambda - tol || eig.values.maxCoeff() > cfg.c_gyy + tol)
    throw ConfigError("neumann_bias_check: spectrum of H outside [lambda, C_gyy]");

  const Index d = hess.rows();
  const Matrix inverse = eig.vectors * eig.values.cwiseInverse().asDiagonal() *
                         eig.vectors.transpose();
  Vector expected_diag(d);
  for (Index i = 0; i < d; ++i) expected_diag[i] = neumann_expected_scalar(eig.values[i], cfg);
  const Matrix expected = eig.vectors * expected_diag.asDiagonal() * eig.vectors.transpose();

  const HessianSampler fixed = [&hess](Rng&) { return hess; };
  Matrix mean = Matrix::Zero(d, d);
  Matrix m2 = Matrix::Zero(d, d);
  NeumannBiasReport report;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix h = neumann_inverse_sample(fixed, cfg, rng);
    report.max_draw_norm = std::max(report.max_draw_norm, spectral_norm(h));
    const Matrix delta = h - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta.cwiseProduct(h - mean);
  }
  const Matrix var = m2 / static_cast<double>(n - 1);
  report.draws = n;
  report.measured = spectral_norm(mean - inverse);
  report.exact = spectral_norm(expected - inverse);
  report.bound = neumann_bias_bound(cfg);
  report.standard_error = std::sqrt(var.maxCoeff() / static_cast<double>(n));
  return report;
}

RecursionTrace record_sema_recursion(const GradOracle& oracle, const Vector& x0, double gamma,
                                     double eta, std::size_t steps, Rng& rng) {
  if (!oracle.has_true_grad()) throw ConfigError("oracle required");
  require_config(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  RecursionTrace trace;
  trace.steps.reserve(steps);
  Vector x_prev = x0;
  Vector x = x0;
  Vector z = oracle.sample(x0, rng);
  Vector h_prev = oracle.true_grad(x0);
  for (std::size_t t = 0; t < steps; ++t) {
    const Vector h = oracle.true_grad(x);
    const Vector sample = oracle.sample(x, rng);
    RecursionStep step;
    step.delta_prev = (z - h_prev).squaredNorm();
    sema_update(z, gamma, sample);
    step.delta_next = (z - h).squaredNorm();
    step.gamma = gamma;
    step.noise_sq = (sample - h).squaredNorm();
    step.move_sq = (x - x_prev).squaredNorm();
    trace.steps.push_back(step);
    x_prev = x;
    h_prev = h;
    x = x - eta * z;
  }
  return trace;
}

RecursionReport variance_recursion_check(const std::vector<RecursionTrace>& replicates, double L,
                                         double slack_se) {
  require_config(!replicates.empty(), "variance_recursion_check: no replicates");
  const std::size_t steps = replicates.front().steps.size();
  for (const auto& r : replicates)
    require_config(r.steps.size() == steps, "variance_recursion_check: ragged replicates");
  const double n = static_cast<double>(replicates.size());
  RecursionReport report;
  report.steps = steps;
  report.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < steps; ++t) {
    double mean = 0.0;
    double m2 = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < replicates.size(); ++i) {
      const RecursionStep& s = replicates[i].steps[t];
      if (s.delta_next < 0 || s.delta_prev < 0 || s.noise_sq < 0 || s.move_sq < 0)
        throw InternalError("recursion trace holds a negative entry");
      const double rhs = (1.0 - s.gamma) * s.delta_prev + 2.0 * s.gamma * s.gamma * s.noise_sq +
                         L * L * s.move_sq / s.gamma;
      const double excess = s.delta_next - rhs;
      const double delta = excess - mean;
      mean += delta / static_cast<double>(i + 1);
      m2 += delta * (excess - mean);
      scale = std::max(scale, std::abs(rhs) + s.delta_next);
    }
    const double se = replicates.size() > 1 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
    if (mean > slack_se * se + 1e-12 * std::max(1.0, scale)) ++report.violations;
    report.max_excess = std::max(report.max_excess, mean);
  }
  report.violation_rate =
      steps == 0 ? 0.0 : static_cast<double>(report.violations) / static_cast<double>(steps);
  return report;
}

}  // namespace semaopt
