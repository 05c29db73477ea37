#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace semaopt {

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double lower = 0.0;  ///< -inf when one-sided
  double upper = 0.0;  ///< +inf when one-sided
  bool passed = false;

  /// Distance to the nearest violated bound; negative when failing.
  double margin() const;
  std::string describe() const;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;
  bool passed() const;
};

struct VerifyOptions {
  std::size_t seeds = 20;
  std::uint64_t seed_base = 0;
};

const std::vector<std::string_view>& verify_suites();

/// Runs a named suite; an unknown name is a ConfigError.
VerifyReport run_verify_suite(std::string_view suite, const VerifyOptions& options = {});

VerifyCheck check_at_most(std::string name, double value, double upper);
VerifyCheck check_at_least(std::string name, double value, double lower);
VerifyCheck check_within(std::string name, double value, double lower, double upper);

}  // namespace semaopt
