#include "sst/shape.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <numbers>

namespace sst {
namespace {

MatrixN2 square() {
  MatrixN2 x(4, 2);
  x << 1, 1, -1, 1, -1, -1, 1, -1;
  return x;
}

TEST(LandmarkShape, ValidatesInput) {
  MatrixN2 two(2, 2);
  two << 0, 0, 1, 1;
  EXPECT_THROW(LandmarkShape{two}, DegeneracyError);
  MatrixN2 line(4, 2);
  line << 0, 0, 1, 1, 2, 2, 3, 3;
  EXPECT_THROW(LandmarkShape{line}, DegeneracyError);
  MatrixN2 bad = square();
  bad(2, 1) = std::nan("");
  EXPECT_THROW(LandmarkShape{bad}, InputError);
  EXPECT_NO_THROW(LandmarkShape{square()});
}

TEST(LaStandardize, SquareExample) {
  const LandmarkShape s(square(), true);
  const SeparableShape sep = la_standardize(s);
  // Oracle: X^T X = 4 I, so X / 2 spans the same plane with orthonormal columns.
  EXPECT_LT(gr_distance(sep.grass, GrassmannPoint::from_orthonormal(square() / 2.0)), 1e-14);
  Eigen::JacobiSVD<Matrix2> svd(sep.affine.m);
  EXPECT_NEAR(svd.singularValues()(0), 2.0, 1e-14);
  EXPECT_NEAR(svd.singularValues()(1), 2.0, 1e-14);
  EXPECT_LT(sep.affine.b.norm(), 1e-15);
}

TEST(LaStandardize, RejectsCollinearShapes) {
  MatrixN2 line(3, 2);
  line << 0, 0, 1, 2, 2, 4;
  EXPECT_THROW(idempotence_check(LandmarkShape(line)), DegeneracyError);
}

TEST(LaStandardize, ReconstructionWhiteningAndDeterminant) {
  Rng rng(40);
  for (int trial = 0; trial < 100; ++trial) {
    const LandmarkShape s = testing::random_shape(rng, 5 + trial % 40);
    const MatrixN2 centered = s.x().rowwise() - s.x().colwise().mean();
    Eigen::JacobiSVD<Matrix> oracle(centered);
    const double sv_product = oracle.singularValues().prod();
    for (LaVariant v : {LaVariant::gl2, LaVariant::polar}) {
      const SeparableShape sep = la_standardize(s, v);
      const MatrixN2& rep = sep.grass.rep();
      EXPECT_LT((reconstruct(sep).x() - s.x()).norm(), 1e-10 * std::max(1.0, s.x().norm()));
      EXPECT_LT((rep.transpose() * rep - Matrix2::Identity()).norm(), 1e-12);
      EXPECT_LT(rep.colwise().sum().norm(), 1e-10);
      EXPECT_NEAR(std::abs(sep.affine.m.determinant()), sv_product, 1e-9 * sv_product);
    }
  }
}

TEST(LaStandardize, PolarAndSvdVariantsAgree) {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const LandmarkShape s = testing::random_shape(rng, 30);
    const SeparableShape g = la_standardize(s, LaVariant::gl2);
    const SeparableShape p = la_standardize(s, LaVariant::polar);
    EXPECT_LT(gr_distance(g.grass, p.grass), 1e-10);
    const SymEig2 e = sym_eig2(p.affine.m);
    EXPECT_GT(e.values(1), 0.0);
    EXPECT_LT((p.affine.m - p.affine.m.transpose()).norm(), 1e-15 * p.affine.m.norm());
    // gl2 m = Q P with Q the rotation relating the two representatives.
    const Matrix2 q = g.grass.rep().transpose() * p.grass.rep();
    EXPECT_LT((q.transpose() * q - Matrix2::Identity()).norm(), 1e-12);
    EXPECT_LT((g.affine.m - q * p.affine.m).norm(), 1e-10 * p.affine.m.norm());
    Eigen::JacobiSVD<Matrix2> sg(g.affine.m), sp(p.affine.m);
    EXPECT_LT((sg.singularValues() - sp.singularValues()).norm(), 1e-10 * p.affine.m.norm());
  }
}

TEST(LaStandardize, AffineInvariance) {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const LandmarkShape s = testing::random_shape(rng, 40);
    const Matrix2 m = testing::random_gl2(rng);
    const Vector2 b(rng.uniform(-10, 10), rng.uniform(-10, 10));
    const LandmarkShape moved(apply_affine(s.x(), m, b), true);
    const LandmarkShape translated(apply_affine(s.x(), Matrix2::Identity(), b), true);
    const LandmarkShape scaled(apply_affine(s.x(), m, Vector2::Zero()), true);
    const auto base = la_standardize(s).grass;
    EXPECT_LE(gr_distance(la_standardize(moved).grass, base), 1e-9);
    EXPECT_LE(gr_distance(la_standardize(translated).grass, base), 1e-10);
    EXPECT_LE(gr_distance(la_standardize(scaled).grass, base), 1e-10);
  }
}

TEST(Reconstruct, SimpleFactors) {
  Rng rng(43);
  const LandmarkShape s = testing::random_shape(rng, 12);
  SeparableShape sep = la_standardize(s);
  const SeparableShape identity{sep.grass, AffineFactor(), LaVariant::gl2};
  EXPECT_EQ(reconstruct(identity).x(), sep.grass.rep());

  const LandmarkShape centered(s.x().rowwise() - s.x().colwise().mean(), true);
  SeparableShape c = la_standardize(centered);
  c.affine = AffineFactor(c.affine.m * l4_matrix({2, 1, 1, 0}), Vector2::Zero());
  EXPECT_LT((reconstruct(c).x() - 2.0 * centered.x()).norm(), 1e-12 * centered.x().norm());
}

TEST(L4Matrix, Examples) {
  EXPECT_EQ(l4_matrix({1, 1, 1, 0}), Matrix2::Identity());
  Matrix2 rot;
  rot << 0, 1, -1, 0;
  EXPECT_LT((l4_matrix({1, 1, 1, std::numbers::pi / 2}) - rot).norm(), 1e-16);
  Matrix2 d;
  d << 6, 0, 0, 2;
  EXPECT_EQ(l4_matrix({2, 3, 1, 0}), d);
  EXPECT_THROW(l4_matrix({0, 1, 1, 0}), DomainError);
}

TEST(AffineFactor, RejectsSingular) {
  EXPECT_THROW(AffineFactor(Matrix2::Zero(), Vector2::Zero()), DegeneracyError);
}

TEST(IdempotenceCheck, HoldsForRandomAndStandardizedShapes) {
  Rng rng(44);
  for (int trial = 0; trial < 3; ++trial) {
    const LandmarkShape s = testing::random_shape(rng, 25);
    EXPECT_TRUE(idempotence_check(s));
    EXPECT_TRUE(idempotence_check(LandmarkShape(la_standardize(s).grass.rep())));
  }
}

TEST(Gauge, MaxAndMeanSegments) {
  MatrixN2 x(4, 2);
  x << 0, 0, 1, 0, 1, 2, 0, 2;
  EXPECT_DOUBLE_EQ(landmark_gauge(x), 2.0);
  EXPECT_DOUBLE_EQ(mean_segment(x), 4.0 / 3.0);
}

}  // namespace
}  // namespace sst
