#include "sst/linalg.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

namespace sst {
namespace {

TEST(SymEig2, ReconstructsAndSortsDescending) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix2 a = symmetrize(testing::random_matrix(rng, 2, 2));
    const SymEig2 e = sym_eig2(a);
    EXPECT_GE(e.values(0), e.values(1));
    const Matrix2 back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LT((back - a).norm(), 1e-14);
  }
}

TEST(SymFunctions, SqrtSquaresBackAndExpInvertsLog) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix2 p = testing::random_spd(rng).matrix();
    const Matrix2 r = sym_sqrt(p);
    EXPECT_LT((r * r - p).norm(), 1e-12 * p.norm());
    EXPECT_LT((sym_exp(sym_log(p)) - p).norm(), 1e-12 * p.norm());
    EXPECT_LT((sym_inv_sqrt(p) * r - Matrix2::Identity()).norm(), 1e-12);
  }
}

TEST(ThinSvd, FactorsAndFollowsSignConvention) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixN2 a = testing::random_matrix(rng, 17, 2);
    const ThinSvd svd = thin_svd(a);
    EXPECT_LT((svd.u * svd.s.asDiagonal() * svd.v.transpose() - a).norm(), 1e-13 * a.norm());
    EXPECT_LT((svd.u.transpose() * svd.u - Matrix2::Identity()).norm(), 1e-14);
    EXPECT_GE(svd.s(0), svd.s(1));
    for (int j = 0; j < 2; ++j) EXPECT_GT(svd.u(0, j), 0.0);
    // Sign flips of the input's columns do not change U.
    MatrixN2 flipped = a;
    flipped.col(1) *= -1.0;
    EXPECT_LT((thin_svd(flipped).u - svd.u).norm(), 1e-12);
  }
}

TEST(ThinSvd, RankOneInputKeepsOrthonormalU) {
  MatrixN2 a = MatrixN2::Zero(5, 2);
  a(2, 0) = 3.0;
  const ThinSvd svd = thin_svd(a);
  EXPECT_NEAR(svd.s(0), 3.0, 1e-15);
  EXPECT_EQ(svd.s(1), 0.0);
  EXPECT_LT((svd.u.transpose() * svd.u - Matrix2::Identity()).norm(), 1e-14);
}

TEST(PrincipalAngles, MatchArccosRouteForSeparatedSubspaces) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testing::random_point(rng, 8);
    const auto b = testing::random_point(rng, 8);
    Vector2 oracle = testing::arccos_angles(a.rep(), b.rep());
    if (oracle(0) > oracle(1)) std::swap(oracle(0), oracle(1));
    EXPECT_LT((principal_angles(a.rep(), b.rep()) - oracle).norm(), 1e-7);
  }
}

TEST(PrincipalAngles, ResolveTinyAngles) {
  const Eigen::Index n = 6;
  MatrixN2 b = testing::e_basis(n, 0, 1);
  const double eps = 1e-12;
  b(1, 1) = std::cos(eps);
  b(2, 1) = std::sin(eps);
  const Vector2 angles = principal_angles(testing::e_basis(n, 0, 1), b);
  EXPECT_NEAR(angles(0), 0.0, 1e-20);
  EXPECT_NEAR(angles(1), eps, 1e-24);
}

TEST(PolarProject, IsIdempotentOnOrthonormal) {
  Rng rng(5);
  const auto a = testing::random_point(rng, 9);
  EXPECT_LT((polar_project(a.rep()) - a.rep()).norm(), 1e-14);
  const MatrixN2 noisy = a.rep() + 1e-6 * testing::random_matrix(rng, 9, 2);
  const MatrixN2 p = polar_project(noisy);
  EXPECT_LT((p.transpose() * p - Matrix2::Identity()).norm(), 1e-14);
}

TEST(Vec, StacksColumns) {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  const Vector v = vec(a);
  EXPECT_EQ(v(0), 1);
  EXPECT_EQ(v(1), 3);
  EXPECT_EQ(v(2), 2);
  EXPECT_EQ(unvec(v, 2, 2), a);
}

}  // namespace
}  // namespace sst
