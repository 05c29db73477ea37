#pragma once

#include <cstdint>
#include <string_view>

#include "semaopt/rng.hpp"
#include "semaopt/types.hpp"

namespace semaopt {

enum class ProblemKind {
  Quadratic,
  PLLeastSquares,
  ReddiDrift,
  SaddleQuadratic,
  DualPLSaddle,
  AucMinMax,
  BilevelQuadratic
};

inline constexpr ProblemKind kAllProblemKinds[] = {
    ProblemKind::Quadratic,       ProblemKind::PLLeastSquares, ProblemKind::ReddiDrift,
    ProblemKind::SaddleQuadratic, ProblemKind::DualPLSaddle,   ProblemKind::AucMinMax,
    ProblemKind::BilevelQuadratic};

std::string_view to_string(ProblemKind kind);
ProblemKind parse_problem_kind(std::string_view name);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// sign of R's diagonal folded into Q).
Matrix random_orthogonal(Index n, Rng& rng);

/// n points lo * (hi/lo)^(i/(n-1)); the endpoints are exact.
Vector log_spaced(Index n, double lo, double hi);

/// Symmetric part's largest absolute eigenvalue.
double symmetric_norm(const Matrix& m);

}  // namespace semaopt
