#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "semaopt/oracle.hpp"
#include "semaopt/rng.hpp"
#include "semaopt/types.hpp"

namespace semaopt {

/// Moving-average estimator v <- (1 - gamma) v + gamma * sample.
struct SemaState {
  Vector v;
  double gamma = 1.0;
};

SemaState sema_step(const SemaState& state, const Vector& sample);
/// In-place form used by the solvers' inner loops.
void sema_update(Vector& v, double gamma, const Vector& sample);
void sema_update(Matrix& v, double gamma, const Matrix& sample);

enum class NeumannIndexing {
  /// p uniform in {0..k-1}; p = 0 is the identity term.
  ZeroBased,
  /// p uniform in {1..k}.
  OneBased,
};

struct NeumannConfig {
  int k = 1;
  double c_gyy = 1.0;
  double lambda = 1.0;
  NeumannIndexing indexing = NeumannIndexing::ZeroBased;
  /// Use one Hessian draw for every factor of the product instead of
  /// independent draws.
  bool reuse_sample = false;

  void validate() const;
};

using HessianSampler = std::function<Matrix(Rng&)>;

/// (k/C) * prod_{i=1..p} (I - H_i / C) with p drawn per `cfg.indexing`.
Matrix neumann_inverse_sample(const HessianSampler& hess, const NeumannConfig& cfg, Rng& rng);

/// Exact expectation of the scalar estimator when H = h is deterministic,
/// by enumerating every value of p.
double neumann_expected_scalar(double h, const NeumannConfig& cfg);

/// (1/lambda) (1 - lambda/C)^k.
double neumann_bias_bound(const NeumannConfig& cfg);

struct NeumannBiasReport {
  double measured = 0.0;  ///< ||mean_n(h) - H^{-1}||_2
  double exact = 0.0;     ///< ||E[h] - H^{-1}||_2 from enumeration
  double bound = 0.0;
  double standard_error = 0.0;  ///< Monte Carlo error of the mean, max over entries
  double max_draw_norm = 0.0;   ///< max_n ||h||_2
  std::size_t draws = 0;
};

/// Monte Carlo bias of the estimator for a fixed symmetric H with
/// lambda I <= H <= C I. Throws ConfigError when the spectrum check fails.
NeumannBiasReport neumann_bias_check(const Matrix& hess, const NeumannConfig& cfg, std::size_t n,
                                     Rng& rng);

/// One step of a moving-average tracking run.
struct RecursionStep {
  double delta_next = 0.0;  ///< ||z_{t+1} - h(x_t)||^2
  double delta_prev = 0.0;  ///< ||z_t - h(x_{t-1})||^2
  double gamma = 0.0;
  double noise_sq = 0.0;    ///< ||O(x_t) - h(x_t)||^2, an unbiased variance sample
  double move_sq = 0.0;     ///< ||x_t - x_{t-1}||^2
};

struct RecursionTrace {
  std::vector<RecursionStep> steps;
};

/// Tracks h = true_grad with z_{t+1} = (1-gamma) z_t + gamma O(x_t) while x
/// follows x_{t+1} = x_t - eta z_{t+1}. z_0 = O(x_0) and x_{-1} = x_0.
/// Throws ConfigError("oracle required") without a true gradient.
RecursionTrace record_sema_recursion(const GradOracle& oracle, const Vector& x0, double gamma,
                                     double eta, std::size_t steps, Rng& rng);

struct RecursionReport {
  std::size_t steps = 0;
  std::size_t violations = 0;
  double violation_rate = 0.0;
  /// max_t of mean(lhs - rhs); negative means every step holds with margin.
  double max_excess = 0.0;
};

/// Replicate-averaged check of
///   E[delta_next] <= (1-gamma) E[delta_prev] + 2 gamma^2 E[noise] + L^2 E[move]/gamma.
/// A step is a violation when the mean excess is above `slack_se` standard
/// errors of the per-replicate excess (plus a rounding tolerance).
RecursionReport variance_recursion_check(const std::vector<RecursionTrace>& replicates, double L,
                                         double slack_se = 2.0);

}  // namespace semaopt
