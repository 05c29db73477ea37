#include <gtest/gtest.h>

#include <algorithm>

#include "semaopt/linalg.hpp"
#include "semaopt/rng.hpp"
#include "test_support.hpp"

using namespace semaopt;

namespace {

Matrix random_symmetric(Index n, Rng& rng) {
  const Matrix g = rng.normal_matrix(n, n);
  return 0.5 * (g + g.transpose());
}

Vector sorted(Vector v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

}  // namespace

TEST(Linalg, JacobiMatchesReferenceSolver) {
  Rng rng(1);
  for (Index n : {1, 2, 5, 12, 40}) {
    const Matrix m = random_symmetric(n, rng);
    const SymmetricEigen e = jacobi_eigen(m);
    const Eigen::SelfAdjointEigenSolver<Matrix> ref(m);
    EXPECT_LT((sorted(e.values) - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10 * m.norm());
    const Matrix rebuilt = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LT((rebuilt - m).norm(), 1e-10 * m.norm());
    EXPECT_LT((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).norm(), 1e-12 * n);
  }
}

TEST(Linalg, SpectralNormMatchesSvd) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = rng.normal_matrix(3 + trial % 4, 2 + trial % 5);
    EXPECT_NEAR(spectral_norm(m), testutil::svd_norm(m), 1e-10 * testutil::svd_norm(m));
  }
  EXPECT_EQ(spectral_norm(Matrix::Zero(3, 3)), 0.0);
}

TEST(Linalg, BallProjection) {
  const Vector p = project_ball((Vector(2) << 3.0, 4.0).finished(), 1.0);
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.8, 1e-15);
  const Vector inside = (Vector(2) << 0.1, -0.2).finished();
  EXPECT_EQ(project_ball(inside, 1.0), inside);
}

TEST(Linalg, BoxProjection) {
  const Vector v = (Vector(3) << 2.0, -3.0, 0.5).finished();
  const Vector expected = (Vector(3) << 1.0, -1.0, 0.5).finished();
  EXPECT_EQ(project_box(v, -1.0, 1.0), expected);
  EXPECT_EQ(project_box(v, Vector::Constant(3, -1.0), Vector::Constant(3, 1.0)), expected);
}

TEST(Linalg, SpectralClamp) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.1;
  m(1, 1) = 5.0;
  const Matrix p = project_spectral(m, 1.0, 2.0);
  EXPECT_LT((p - Vector((Vector(2) << 1.0, 2.0).finished()).asDiagonal().toDenseMatrix()).norm(),
            1e-12);
}

TEST(Linalg, SpectralClampRejectsAsymmetric) {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = 1e-6;
  EXPECT_THROW(project_spectral(m, 0.0, 1.0), ConfigError);
  m(0, 1) = 1e-10;
  EXPECT_NO_THROW(project_spectral(m, 0.0, 1.0));
}

// Properties of the eigenvalue clamp: idempotent, nonexpansive, inside the band.
TEST(LinalgProperty, SpectralClampIdempotentAndNonexpansive) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = 3.0 * random_symmetric(5, rng);
    const Matrix b = 3.0 * random_symmetric(5, rng);
    const Matrix pa = project_spectral(a, -1.0, 2.0);
    const Matrix pb = project_spectral(b, -1.0, 2.0);
    EXPECT_LT((project_spectral(pa, -1.0, 2.0) - pa).norm(), 1e-10);
    EXPECT_LE((pa - pb).norm(), (a - b).norm() + 1e-10);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(pa);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1.0 - 1e-10);
    EXPECT_LE(es.eigenvalues().maxCoeff(), 2.0 + 1e-10);
  }
}

TEST(LinalgProperty, SpectralNormProjection) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix m = rng.normal_matrix(4, 6);
    const double bound = 0.5 + 2.0 * rng.uniform();
    double reported = 0.0;
    const Matrix p = project_spectral_norm(m, bound, &reported);
    const double norm = testutil::svd_norm(p);
    EXPECT_LE(norm, bound * (1 + 1e-12));
    EXPECT_GE(reported, norm * (1 - 1e-12));
    EXPECT_LE(reported, bound * (1 + 1e-12));
    // Singular values are clamped, singular vectors kept.
    const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector clamped = svd.singularValues().cwiseMin(bound);
    const Matrix expected = svd.matrixU() * clamped.asDiagonal() * svd.matrixV().transpose();
    EXPECT_LT((p - expected).norm(), 1e-10);
    EXPECT_LT((project_spectral_norm(p, bound) - p).norm(), 1e-10);
  }
  const Matrix small = 0.01 * Matrix::Ones(3, 3);
  EXPECT_EQ(project_spectral_norm(small, 1.0), small);
}
