#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace semaopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Invalid configuration or hyperparameters (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A statistical or structural check did not hold (CLI exit code 4).
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invariant that the implementation itself guarantees was broken.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require_config(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace semaopt
