#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semaopt/harness/config.hpp"
#include "semaopt/harness/registry.hpp"
#include "semaopt/trajectory.hpp"

namespace semaopt {

struct SeedSummary {
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  double final_grad_norm_sq = kNotAvailable;
  double avg_grad_norm_sq = kNotAvailable;
  double avg_delta = kNotAvailable;
  double avg_delta_y = kNotAvailable;
  double slope = kNotAvailable;
  double slope_ci_lower = kNotAvailable;
  double slope_ci_upper = kNotAvailable;
  bool diverged = false;
  std::size_t diverged_step = 0;
  double wall_seconds = 0.0;
};

struct SeedRun {
  SeedSummary summary;
  Trajectory trajectory;
};

/// Resolved step sizes and horizon, shared by every seed of a run.
struct ResolvedSchedule {
  Schedule minimize;
  MinMaxConfig minmax;
  SmbConfig smb;
  SbmaConfig sbma;
  std::size_t total_steps = 0;
};

ResolvedSchedule resolve_schedule(const RunSpec& spec, const PreparedProblem& problem);

/// One seed. Divergence is reported in the summary, not thrown.
SeedRun run_seed(const RunSpec& spec, const PreparedProblem& problem,
                 const ResolvedSchedule& schedule, std::uint64_t seed);

struct RunSummary {
  std::vector<SeedSummary> seeds;  ///< sorted by seed
  SeedSummary mean;                ///< seed averages; `diverged` if any seed diverged
  ResolvedSchedule schedule;
};

/// Runs every seed on `jobs` worker threads. With `write_files` it writes
/// seed_<seed>.csv, summary.csv, spec.json and timing.csv under spec.output.
RunSummary run_spec(const RunSpec& spec, unsigned jobs = 1, bool write_files = true);

std::string summary_csv(const RunSummary& summary);

}  // namespace semaopt
