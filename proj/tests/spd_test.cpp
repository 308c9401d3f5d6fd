#include "sst/spd.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>

namespace sst {
namespace {

SpdMatrix diag(double a, double b) { return SpdMatrix(Vector2(a, b).asDiagonal()); }

TEST(SpdMatrix, RejectsNonSpd) {
  Matrix2 m;
  m << 1, 2, 2, 1;  // eigenvalues 3, -1
  EXPECT_THROW(SpdMatrix{m}, DomainError);
  m << 1, 0.5, 0.4, 1;
  EXPECT_THROW(SpdMatrix{m}, DomainError);
}

TEST(SpdExp, CommutingCaseIsEntrywiseExp) {
  const SpdMatrix d = spd_exp(SpdMatrix(), SpdTangent(Vector2(0.3, -1.2).asDiagonal()));
  EXPECT_NEAR(d.matrix()(0, 0), std::exp(0.3), 1e-15);
  EXPECT_NEAR(d.matrix()(1, 1), std::exp(-1.2), 1e-15);
  EXPECT_EQ(d.matrix()(0, 1), 0.0);
}

TEST(SpdExp, ZeroStepAndRoundTrip) {
  Rng rng(30);
  for (int trial = 0; trial < 50; ++trial) {
    const SpdMatrix p = testing::random_spd(rng);
    const SpdMatrix d = testing::random_spd(rng);
    EXPECT_LT((spd_exp(p, SpdTangent()).matrix() - p.matrix()).norm(), 1e-13 * p.matrix().norm());
    EXPECT_LT((spd_exp(p, spd_log(p, d)).matrix() - d.matrix()).norm(), 1e-12 * d.matrix().norm());
  }
}

TEST(SpdLog, DiagonalCases) {
  EXPECT_LT(spd_log(diag(4, 1), diag(4, 1)).s.norm(), 1e-15);
  const Matrix2 s = spd_log(SpdMatrix(), diag(4, 1)).s;
  EXPECT_NEAR(s(0, 0), std::log(4.0), 1e-15);
  EXPECT_NEAR(s(1, 1), 0.0, 1e-15);
  // P^{1/2} log(P^{-1}) P^{1/2} for P = diag(4, 1): diag(2 * (-ln 4) * 2, 0).
  const Matrix2 back = spd_log(diag(4, 1), SpdMatrix()).s;
  EXPECT_NEAR(back(0, 0), -4.0 * std::log(4.0), 1e-14);
  EXPECT_NEAR(back(0, 0), -8.0 * std::log(2.0), 1e-14);
  EXPECT_NEAR(back(1, 1), 0.0, 1e-15);
}

TEST(SpdDistance, ClosedForms) {
  EXPECT_NEAR(spd_distance(SpdMatrix(), diag(4, 1)), 2.0 * std::log(2.0), 1e-15);
  EXPECT_NEAR(spd_distance(SpdMatrix(), diag(std::exp(2.0), std::exp(2.0))), 2.0 * std::sqrt(2.0),
              1e-14);
  Rng rng(31);
  const SpdMatrix p = testing::random_spd(rng);
  EXPECT_NEAR(spd_distance(p, p), 0.0, 1e-14);
}

TEST(SpdDistance, SymmetricAndCongruenceInvariant) {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const SpdMatrix p = testing::random_spd(rng);
    const SpdMatrix d = testing::random_spd(rng);
    const Matrix2 a = testing::random_gl2(rng);
    const double base = spd_distance(p, d);
    EXPECT_NEAR(spd_distance(d, p), base, 1e-12 * std::max(1.0, base));
    const SpdMatrix pa(symmetrize(a.transpose() * p.matrix() * a));
    const SpdMatrix da(symmetrize(a.transpose() * d.matrix() * a));
    EXPECT_LE(std::abs(spd_distance(pa, da) - base), 1e-9 * base);
  }
}

TEST(SpdTransport, ClosedFormsAndIsometry) {
  Rng rng(33);
  const SpdMatrix p = testing::random_spd(rng);
  const SpdTangent s = testing::random_sym(rng);
  EXPECT_LT((spd_transport(p, p, s).s - s.s).norm(), 1e-13);

  // E = diag(2, 1), so E diag(1, 0) E^T = diag(4, 0).
  const Matrix2 out = spd_transport(SpdMatrix(), diag(4, 1), SpdTangent(Vector2(1, 0).asDiagonal())).s;
  EXPECT_NEAR(out(0, 0), 4.0, 1e-14);
  EXPECT_NEAR(out(1, 1), 0.0, 1e-14);
  EXPECT_NEAR(out(0, 1), 0.0, 1e-14);

  for (int trial = 0; trial < 50; ++trial) {
    const SpdMatrix a = testing::random_spd(rng);
    const SpdMatrix b = testing::random_spd(rng);
    const SpdTangent u = testing::random_sym(rng);
    const SpdTangent v = testing::random_sym(rng);
    const SpdTangent tu = spd_transport(a, b, u);
    const SpdTangent tv = spd_transport(a, b, v);
    EXPECT_NEAR(spd_inner(b, tu, tv), spd_inner(a, u, v), 1e-10);
    const SpdTangent back = spd_transport(b, a, tu);
    EXPECT_LT((back.s - u.s).norm(), 1e-8);
  }
}

TEST(SpdTransport, VelocityOfGeodesicIsTransported) {
  // Transport of Log_P(D) along the geodesic equals -Log_D(P).
  Rng rng(34);
  const SpdMatrix p = testing::random_spd(rng);
  const SpdMatrix d = testing::random_spd(rng);
  const SpdTangent moved = spd_transport(p, d, spd_log(p, d));
  EXPECT_LT((moved.s + spd_log(d, p).s).norm(), 1e-10 * std::max(1.0, moved.s.norm()));
}

}  // namespace
}  // namespace sst
