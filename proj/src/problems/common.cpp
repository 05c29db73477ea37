#include "semaopt/problems/common.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

namespace semaopt {

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Quadratic: return "quadratic";
    case ProblemKind::PLLeastSquares: return "pl_least_squares";
    case ProblemKind::ReddiDrift: return "reddi_drift";
    case ProblemKind::SaddleQuadratic: return "saddle_quadratic";
    case ProblemKind::DualPLSaddle: return "dual_pl_saddle";
    case ProblemKind::AucMinMax: return "auc_minmax";
    case ProblemKind::BilevelQuadratic: return "bilevel_quadratic";
  }
  return "?";
}

ProblemKind parse_problem_kind(std::string_view name) {
  for (ProblemKind kind : kAllProblemKinds)
    if (to_string(kind) == name) return kind;
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

Matrix random_orthogonal(Index n, Rng& rng) {
  const Matrix g = rng.normal_matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

Vector log_spaced(Index n, double lo, double hi) {
  require_config(n >= 1 && lo > 0.0 && hi >= lo, "log_spaced: need n >= 1 and 0 < lo <= hi");
  Vector out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double ratio = hi / lo;
  for (Index i = 0; i < n; ++i)
    out[i] = lo * std::pow(ratio, static_cast<double>(i) / static_cast<double>(n - 1));
  out[0] = lo;
  out[n - 1] = hi;
  return out;
}

double symmetric_norm(const Matrix& m) {
  const Matrix s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace semaopt
