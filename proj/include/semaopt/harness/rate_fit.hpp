#pragma once

#include <cstdint>
#include <vector>

namespace semaopt {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_lower = 0.0;  ///< 2.5% bootstrap quantile of the slope
  double ci_upper = 0.0;  ///< 97.5% bootstrap quantile
  std::size_t points = 0;
};

/// Least squares fit of log(value) on log(t) over t in [t_min, t_max], with a
/// 95% interval from `resamples` residual-bootstrap refits.
/// Needs at least 10 points in range; nonpositive t or values are an error.
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& values, double t_min,
                 double t_max, int resamples = 200, std::uint64_t seed = 0x726174);

}  // namespace semaopt
