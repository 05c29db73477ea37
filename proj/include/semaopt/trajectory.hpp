#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace semaopt {

inline constexpr double kNotAvailable = std::numeric_limits<double>::quiet_NaN();

/// One logged iteration. Metrics are NaN where the solver has no such quantity.
struct TrajectoryRecord {
  std::size_t t = 0;
  double grad_norm_sq = kNotAvailable;
  double delta = kNotAvailable;
  double delta_y = kNotAvailable;
  double objective = kNotAvailable;
  double eta = kNotAvailable;
  double gamma = kNotAvailable;
  /// Running means over steps 0..t.
  double avg_grad_norm_sq = kNotAvailable;
  double avg_delta = kNotAvailable;
  double avg_delta_y = kNotAvailable;
};

/// Per-iteration metrics with exact running sums and thinned logging: every
/// step while t < dense_limit, afterwards only at geometrically spaced steps
/// (ratio 1.1) plus whatever the caller forces.
class Trajectory {
 public:
  explicit Trajectory(std::size_t dense_limit = 100000) : dense_limit_(dense_limit) {}

  /// Whether step t will be logged; lets callers skip expensive objective
  /// evaluations on thinned steps.
  bool wants(std::size_t t) const;

  /// Accumulates the step's metrics and logs it when wanted or forced.
  void add(TrajectoryRecord rec, bool force = false);

  const std::vector<TrajectoryRecord>& records() const { return records_; }
  std::size_t steps() const { return count_; }

  double avg_grad_norm_sq() const { return mean(sum_grad_, n_grad_); }
  double avg_delta() const { return mean(sum_delta_, n_delta_); }
  double avg_delta_y() const { return mean(sum_delta_y_, n_delta_y_); }
  const TrajectoryRecord& last() const { return last_; }

  void append(const Trajectory& other);

 private:
  static double mean(double sum, std::size_t n) {
    return n == 0 ? kNotAvailable : sum / static_cast<double>(n);
  }

  std::size_t dense_limit_;
  std::size_t next_sparse_ = 0;
  std::size_t count_ = 0;
  double sum_grad_ = 0.0, sum_delta_ = 0.0, sum_delta_y_ = 0.0;
  std::size_t n_grad_ = 0, n_delta_ = 0, n_delta_y_ = 0;
  std::vector<TrajectoryRecord> records_;
  TrajectoryRecord last_;
};

/// Thrown when an iterate becomes non-finite or leaves the 1e12 ball.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t step, Trajectory partial)
      : std::runtime_error("diverged at step " + std::to_string(step)),
        step_(step),
        partial_(std::move(partial)) {}

  std::size_t step() const { return step_; }
  const Trajectory& trajectory() const { return partial_; }

 private:
  std::size_t step_;
  Trajectory partial_;
};

inline constexpr double kDivergenceRadius = 1e12;

}  // namespace semaopt
