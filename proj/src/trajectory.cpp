#include "semaopt/trajectory.hpp"

#include <algorithm>

namespace semaopt {

bool Trajectory::wants(std::size_t t) const {
  return t < dense_limit_ || t >= next_sparse_;
}

void Trajectory::add(TrajectoryRecord rec, bool force) {
  if (!std::isnan(rec.grad_norm_sq)) {
    sum_grad_ += rec.grad_norm_sq;
    ++n_grad_;
  }
  if (!std::isnan(rec.delta)) {
    sum_delta_ += rec.delta;
    ++n_delta_;
  }
  if (!std::isnan(rec.delta_y)) {
    sum_delta_y_ += rec.delta_y;
    ++n_delta_y_;
  }
  ++count_;
  rec.avg_grad_norm_sq = avg_grad_norm_sq();
  rec.avg_delta = avg_delta();
  rec.avg_delta_y = avg_delta_y();
  last_ = rec;
  if (force || wants(rec.t)) {
    records_.push_back(rec);
    if (rec.t >= dense_limit_ || rec.t + 1 == dense_limit_) {
      const auto grown = static_cast<std::size_t>(std::ceil(static_cast<double>(rec.t) * 1.1));
      next_sparse_ = std::max(grown, rec.t + 1);
    }
  }
}

void Trajectory::append(const Trajectory& other) {
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
  sum_grad_ += other.sum_grad_;
  sum_delta_ += other.sum_delta_;
  sum_delta_y_ += other.sum_delta_y_;
  n_grad_ += other.n_grad_;
  n_delta_ += other.n_delta_;
  n_delta_y_ += other.n_delta_y_;
  count_ += other.count_;
  if (other.count_ > 0) last_ = other.last_;
}

}  // namespace semaopt
