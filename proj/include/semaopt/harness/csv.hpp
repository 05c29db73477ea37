#pragma once

#include <string>
#include <vector>

#include "semaopt/trajectory.hpp"

namespace semaopt {

/// Shortest decimal string that reads back to the same double; empty for NaN.
std::string format_double(double v);

inline constexpr const char* kTrajectoryHeader =
    "t,grad_norm_sq,delta_t,delta_y_t,objective,eta_t,gamma_t";

std::string trajectory_csv(const Trajectory& trajectory);
void write_text_file(const std::string& path, const std::string& text);

/// Header plus rows, cells already formatted.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

}  // namespace semaopt
