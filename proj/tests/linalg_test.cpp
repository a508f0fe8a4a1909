#include "persuasion/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace persuasion;
using persuasion::testing::random_contraction;
using persuasion::testing::random_orthonormal;
using persuasion::testing::random_psd;
using persuasion::testing::random_sym_with_spectrum;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TEST(SymEig, IdentityCase) {
  const auto eig = sym_eig(SymMatrix(Matrix::Identity(3, 3)));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(eig.values[k], 1.0, 1e-14);
  EXPECT_LT(max_abs(eig.vectors - Matrix::Identity(3, 3)), 1e-12);
}

TEST(SymEig, DiagonalCase) {
  Matrix m = mat2(3, 0, 0, -1);
  const auto eig = sym_eig(SymMatrix(m));
  EXPECT_NEAR(eig.values[0], 3.0, 1e-14);
  EXPECT_NEAR(eig.values[1], -1.0, 1e-14);
  EXPECT_LT(max_abs(eig.vectors.cwiseAbs() - Matrix::Identity(2, 2)), 1e-12);
}

TEST(SymEig, HandComputedOffDiagonal) {
  // [[2,1],[1,2]]: characteristic polynomial (2-l)^2 - 1 has roots 3 and 1,
  // eigenvectors (1,1)/sqrt(2) and (1,-1)/sqrt(2).
  const auto eig = sym_eig(SymMatrix(mat2(2, 1, 1, 2)));
  EXPECT_NEAR(eig.values[0], 3.0, 1e-12);
  EXPECT_NEAR(eig.values[1], 1.0, 1e-12);
  const double s = 1.0 / std::sqrt(2.0);
  Vector v0(2), v1(2);
  v0 << s, s;
  v1 << s, -s;
  EXPECT_LT((eig.vectors.col(0) - v0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((eig.vectors.col(1) - v1).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SymEig, RejectsNonFinite) {
  Matrix m = mat2(1, 0, 0, std::numeric_limits<double>::quiet_NaN());
  EXPECT_THROW(SymMatrix{m}, InvalidMatrix);
}

TEST(SymEig, DeterministicForIdenticalInput) {
  std::mt19937_64 rng(7);
  const Matrix w = random_sym_with_spectrum(5, -2, 2, rng);
  const auto a = sym_eig(SymMatrix(w));
  const auto b = sym_eig(SymMatrix(w));
  EXPECT_TRUE(a.values == b.values);
  EXPECT_TRUE(a.vectors == b.vectors);
}

TEST(SymMatrix, RejectsAsymmetric) {
  EXPECT_THROW(SymMatrix{mat2(1, 0.5, 0.2, 1)}, InvalidMatrix);
}

TEST(PsdSqrt, ZeroAndDiagonal) {
  EXPECT_LT(max_abs(psd_sqrt(PsdMatrix::zero(3)).mat()), 1e-15);
  Matrix d = mat2(4, 0, 0, 9);
  EXPECT_LT(max_abs(psd_sqrt(PsdMatrix(d)).mat() - mat2(2, 0, 0, 3)), 1e-12);
}

TEST(PsdSqrt, SquaresBackToInput) {
  const Matrix m = mat2(2, 1, 1, 2);
  const Matrix r = psd_sqrt(PsdMatrix(m)).mat();
  EXPECT_LT(max_abs(r * r - m), tol::sqrt);
  const auto eig = detail::sym_eig_raw(r);
  EXPECT_NEAR(eig.values[0], std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(eig.values[1], 1.0, 1e-12);
}

TEST(PsdSqrt, RandomRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dims(1, 8);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = dims(rng);
    const PsdMatrix m = random_psd(n, rng, 0.0, 4.0);
    const Matrix r = psd_sqrt(m).mat();
    ASSERT_LT(max_abs(r * r - m.mat()), tol::sqrt * std::max(1.0, max_abs(m.mat())));
  }
}

TEST(PsdSqrt, RejectsIndefinite) {
  EXPECT_THROW(PsdMatrix{mat2(1, 0, 0, -1)}, NotPsd);
}

TEST(Pinv, IdentityAndRankDeficient) {
  EXPECT_LT(max_abs(pinv(SymMatrix(Matrix::Identity(2, 2))).mat() -
                    Matrix::Identity(2, 2)),
            1e-14);
  EXPECT_LT(max_abs(pinv(SymMatrix(mat2(2, 0, 0, 0))).mat() -
                    mat2(0.5, 0, 0, 0)),
            1e-14);
  EXPECT_LT(max_abs(pinv(SymMatrix(Matrix::Zero(3, 3))).mat()), 1e-15);
}

TEST(Pinv, ProjectionIsItsOwnPseudoInverse) {
  std::mt19937_64 rng(13);
  const Matrix q = random_orthonormal(4, rng).leftCols(2);
  const Matrix p = symmetrize(q * q.transpose());
  const Matrix pd = pinv(SymMatrix(p)).mat();
  EXPECT_LT(max_abs(pd - p), 1e-10);
  // Penrose identities.
  EXPECT_LT(max_abs(p * pd * p - p), tol::pinv);
  EXPECT_LT(max_abs(pd * p * pd - pd), tol::pinv);
}

TEST(Pinv, PenroseOnRandomSymmetric) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix m = random_sym_with_spectrum(5, -2, 2, rng);
    const Matrix md = pinv(SymMatrix(m)).mat();
    ASSERT_LT(max_abs(m * md * m - m), tol::pinv * std::max(1.0, max_abs(m)));
    ASSERT_LT(max_abs(md * m * md - md),
              tol::pinv * std::max(1.0, max_abs(md)));
  }
}

TEST(LoewnerGeq, Basics) {
  const SymMatrix id(Matrix::Identity(2, 2));
  const SymMatrix zero(Matrix::Zero(2, 2));
  EXPECT_TRUE(loewner_geq(id, zero));
  EXPECT_FALSE(loewner_geq(zero, id));
  EXPECT_THROW(loewner_geq(SymMatrix(Matrix::Identity(3, 3)), id), DimError);
}

TEST(LoewnerGeq, Example1PosteriorBelowPrior) {
  Matrix sx(3, 3);
  sx << 1, 0.5, 0.7, 0.5, 1.5, 0.2, 0.7, 0.2, 1;
  Matrix post(3, 3);
  post << 0.9715, 0.5571, 0.7793, 0.5571, 1.3859, 0.0413, 0.7793, 0.0413,
      0.7794;
  EXPECT_TRUE(loewner_geq(SymMatrix(sx), SymMatrix(post), 1e-4));
}

TEST(LoewnerGeq, ReflexiveAndAntisymmetric) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const PsdMatrix a = random_psd(4, rng);
    ASSERT_TRUE(loewner_geq(a.mat(), a.mat()));
    const PsdMatrix b = random_psd(4, rng);
    if (loewner_geq(a.mat(), b.mat(), 1e-12) &&
        loewner_geq(b.mat(), a.mat(), 1e-12)) {
      ASSERT_LT(max_abs(a.mat() - b.mat()), 1e-8);
    }
  }
}

TEST(ProjectionFromNegativeEigs, AxisAlignedCases) {
  EXPECT_EQ(projection_from_negative_eigs(SymMatrix(Matrix::Identity(3, 3)))
                .rank(),
            0);
  const auto all_neg =
      projection_from_negative_eigs(SymMatrix(-Matrix::Identity(3, 3)));
  EXPECT_EQ(all_neg.rank(), 3);
  EXPECT_LT(max_abs(all_neg.mat() - Matrix::Identity(3, 3)), 1e-12);

  Matrix w = Matrix::Zero(3, 3);
  w.diagonal() << -2, 0, 5;
  const auto p = projection_from_negative_eigs(SymMatrix(w));
  EXPECT_EQ(p.rank(), 1);
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 1;
  EXPECT_LT(max_abs(p.mat() - expected), 1e-12);
}

TEST(ProjectionFromNegativeEigs, IdempotentSymmetricOnRandomInput) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix w = random_sym_with_spectrum(5, -3, 3, rng);
    const Matrix p = projection_from_negative_eigs(SymMatrix(w)).mat();
    ASSERT_LT(max_abs(p * p - p), tol::proj);
    ASSERT_LT(max_abs(p - p.transpose()), tol::proj);
  }
}

TEST(ProjectionFromNegativeEigs, TraceMatchesNegativeMassAndBeatsSamples) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    const Matrix w = random_sym_with_spectrum(n, -3, 3, rng);
    const Matrix p = projection_from_negative_eigs(SymMatrix(w)).mat();
    const auto eig = detail::sym_eig_raw(w);
    double negative_mass = 0.0;
    for (int k = 0; k < n; ++k) {
      if (eig.values[k] < 0.0) negative_mass += eig.values[k];
    }
    const double achieved = (w * p).trace();
    ASSERT_NEAR(achieved, negative_mass, 1e-10);
    for (int sample = 0; sample < 200; ++sample) {
      const Matrix z = random_contraction(n, rng);
      ASSERT_LE(achieved, (w * z).trace() + 1e-10);
    }
  }
}

TEST(ProjectionMatrix, RejectsNonIdempotent) {
  EXPECT_THROW(ProjectionMatrix{mat2(0.5, 0, 0, 0.5)}, NotAchievable);
}

TEST(PsdMatrix, DecompositionInvariants) {
  std::mt19937_64 rng(31);
  const PsdMatrix m = random_psd(6, rng);
  EXPECT_LT(max_abs(m.eig_vectors().transpose() * m.eig_vectors() -
                    Matrix::Identity(6, 6)),
            tol::ortho);
  EXPECT_LT(max_abs(m.eig_vectors() * m.eig_values().asDiagonal() *
                        m.eig_vectors().transpose() -
                    m.mat()),
            tol::recon * std::max(1.0, max_abs(m.mat())));
  for (int k = 1; k < 6; ++k) {
    EXPECT_GE(m.eig_values()[k - 1], m.eig_values()[k]);
  }
}

}  // namespace
