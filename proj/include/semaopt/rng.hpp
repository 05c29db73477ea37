#pragma once

#include <array>
#include <cstdint>

#include "semaopt/types.hpp"

namespace semaopt {

/// Deterministic pseudo random generator.
///
/// The engine is xoshiro256** (Blackman & Vigna). The 256-bit state is
/// filled from four consecutive splitmix64 outputs whose seed is
/// `seed ^ splitmix64(stream + 1)`, so each (seed, stream) pair names a
/// reproducible independent stream. Normal variates use the basic
/// Box-Muller transform and cache the second value of each pair. Nothing
/// here depends on the standard library's distributions, so sequences are
/// bit-identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Child generator for `stream_id`, derived from this generator's seed.
  /// Does not advance this generator.
  Rng split(std::uint64_t stream_id) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Uniform integer in [0, n), unbiased (Lemire's multiply-shift).
  std::uint64_t uniform_index(std::uint64_t n);
  bool bernoulli(double p);
  double normal();
  Vector normal_vector(Index dim, double sigma = 1.0);
  Matrix normal_matrix(Index rows, Index cols, double sigma = 1.0);
  /// Uniformly distributed unit vector.
  Vector unit_vector(Index dim);

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
  std::uint64_t stream_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace semaopt
