#pragma once

#include <cstdint>
#include <vector>

#include "semaopt/oracle.hpp"

namespace semaopt {

/// Certified enclosure of the stationary expected per-step change of x.
struct DriftInterval {
  double lower = 0.0;
  double upper = 0.0;
  int horizon = 0;

  double mid() const { return 0.5 * (lower + upper); }
  bool positive() const { return lower > 0.0; }
  bool negative() const { return upper < 0.0; }
};

struct DriftEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t seeds = 0;
  std::size_t steps = 0;
};

/// One-dimensional online problem on [-1, 1]: the stochastic gradient is +C
/// with probability p and -1 otherwise. E[g] = pC - (1-p) > 0, so the
/// minimizer is x = -1.
struct ReddiDriftProblem {
  double c = 0.0;
  double p = 0.0;

  double mean_grad() const { return p * c - (1.0 - p); }
  double grad_variance() const;
  double sample(Rng& rng) const { return rng.bernoulli(p) ? c : -1.0; }
  GradOracle oracle() const;

  /// Stationary E[x_{t+1} - x_t] = -eta E[v/(sqrt(u) + G0)] for the SEMA
  /// first moment with weight beta1 and the Adam second moment with beta2,
  /// ignoring the box projection. Every history of the last `horizon`
  /// samples is enumerated; older samples enter through certified bounds.
  DriftInterval drift(double beta1, double beta2, double eta, double g0 = 0.0,
                      int horizon = 20) const;

  /// Mean unprojected step over `seeds` independent runs of `steps` steps,
  /// each after `burn_in` discarded steps, using the library updates.
  DriftEstimate empirical_drift(double beta1, double beta2, double eta, double g0,
                                std::size_t seeds, std::size_t steps, std::size_t burn_in,
                                std::uint64_t seed_base) const;
};

/// Throws ConfigError("no drift gap") unless pC > 1 - p.
ReddiDriftProblem make_reddi_drift(double c, double p);

struct ReddiGridPoint {
  double c = 0.0;
  double p = 0.0;
  double beta2 = 0.0;
  DriftInterval small_momentum;
  DriftInterval large_momentum;
};

/// Grid points where the enumeration certifies a positive drift for
/// `beta1_small` and a negative drift for `beta1_large`, in grid order.
std::vector<ReddiGridPoint> reddi_grid_search(const std::vector<double>& cs,
                                              const std::vector<double>& ps,
                                              const std::vector<double>& beta2s,
                                              double beta1_small, double beta1_large,
                                              double eta, int horizon);

}  // namespace semaopt
