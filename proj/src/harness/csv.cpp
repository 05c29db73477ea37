#include "semaopt/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "semaopt/types.hpp"

namespace semaopt {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  for (const TrajectoryRecord& r : trajectory.records()) {
    out += std::to_string(r.t);
    for (double v : {r.grad_norm_sq, r.delta, r.delta_y, r.objective, r.eta, r.gamma}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("cannot write '" + path + "'");
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

}  // namespace semaopt
