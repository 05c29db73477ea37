#include "semaopt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace semaopt {

SymmetricEigen jacobi_eigen(const Matrix& m, double tol, int max_sweeps) {
  require_config(m.rows() == m.cols(), "jacobi_eigen: matrix must be square");
  const Index n = m.rows();
  Matrix a = 0.5 * (m + m.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  SymmetricEigen out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
    if (std::sqrt(off) <= tol * scale) break;
    ++out.sweeps;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  out.values = a.diagonal();
  out.vectors = v;
  return out;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Vector project_ball(const Vector& v, double radius) {
  require_config(radius > 0.0, "project_ball: radius must be positive");
  const double n = v.norm();
  if (n <= radius) return v;
  return v * (radius / n);
}

Vector project_box(const Vector& v, double lo, double hi) {
  require_config(lo <= hi, "project_box: lo must not exceed hi");
  return v.cwiseMax(lo).cwiseMin(hi);
}

Vector project_box(const Vector& v, const Vector& lo, const Vector& hi) {
  require_config(lo.size() == v.size() && hi.size() == v.size(), "project_box: size mismatch");
  require_config((lo.array() <= hi.array()).all(), "project_box: lo must not exceed hi");
  return v.cwiseMax(lo).cwiseMin(hi);
}

Matrix project_spectral(const Matrix& m, std::optional<double> floor,
                        std::optional<double> ceiling) {
  require_config(m.rows() == m.cols(), "project_spectral: matrix must be square");
  if (floor && ceiling) require_config(*floor <= *ceiling, "project_spectral: floor > ceiling");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw ConfigError("project_spectral: matrix is not symmetric");
  const SymmetricEigen eig = jacobi_eigen(m);
  Vector clamped = eig.values;
  bool changed = false;
  for (Index i = 0; i < clamped.size(); ++i) {
    double value = clamped[i];
    if (floor) value = std::max(value, *floor);
    if (ceiling) value = std::min(value, *ceiling);
    changed = changed || value != clamped[i];
    clamped[i] = value;
  }
  if (!changed) return m;
  Matrix out = eig.vectors * clamped.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix project_spectral_norm(const Matrix& m, double bound, double* norm_bound) {
  require_config(bound >= 0.0, "project_spectral_norm: bound must be nonnegative");
  // The Frobenius norm dominates the spectral norm, so most calls skip the SVD.
  const double frob = m.norm();
  if (frob <= bound) {
    if (norm_bound) *norm_bound = frob;
    return m;
  }
  const Matrix gram = m.rows() >= m.cols() ? Matrix(m.transpose() * m) : Matrix(m * m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  const double top = std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
  if (top <= bound) {
    if (norm_bound) *norm_bound = top;
    return m;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (norm_bound) *norm_bound = s.size() == 0 ? 0.0 : std::min(s(0), bound);
  if (s.size() == 0 || s(0) <= bound) return m;
  const Vector clipped = s.cwiseMin(bound);
  return svd.matrixU() * clipped.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace semaopt
