#include "sst/stats.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

namespace sst {
namespace {

std::vector<GrassmannPoint> cloud(Rng& rng, const GrassmannPoint& center, int count, double spread) {
  std::vector<GrassmannPoint> pts;
  for (int i = 0; i < count; ++i) {
    pts.push_back(gr_exp(center, testing::random_tangent(rng, center, spread * rng.uniform(0.2, 1.0))));
  }
  return pts;
}

TEST(KarcherMean, SinglePointIsItsOwnMean) {
  Rng rng(80);
  const auto p = testing::random_point(rng, 10);
  const auto km = karcher_mean<GrassmannSpace>({p});
  EXPECT_EQ(km.iterations, 0);
  EXPECT_EQ(km.mean.rep(), p.rep());
}

TEST(KarcherMean, TwoPointsGiveGeodesicMidpoint) {
  Rng rng(81);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = testing::random_point(rng, 12);
    const auto b = gr_exp(a, testing::random_tangent(rng, a, rng.uniform(0.1, 1.0)));
    const auto km = karcher_mean<GrassmannSpace>({a, b});
    const auto oracle = gr_exp(a, {0.5 * gr_log(a, b).delta});
    EXPECT_NEAR(gr_distance(km.mean, a), gr_distance(km.mean, b), 1e-8);
    EXPECT_LT(gr_distance(km.mean, oracle), 1e-8);
  }
}

TEST(KarcherMean, FixedPointAndPermutationStability) {
  Rng rng(82);
  const auto center = testing::random_point(rng, 15);
  auto pts = cloud(rng, center, 12, 0.6);
  const auto km = karcher_mean<GrassmannSpace>(pts, 1e-10);
  // Recompute the gradient at the returned iterate.
  MatrixN2 sum = MatrixN2::Zero(15, 2);
  for (const auto& p : pts) sum += gr_log(km.mean, p).delta;
  EXPECT_LT((sum / 12.0).norm(), 1e-10);
  EXPECT_NEAR((sum / 12.0).norm(), km.gradient_norm, 1e-15);

  std::reverse(pts.begin(), pts.end());
  std::swap(pts[2], pts[7]);
  const auto permuted = karcher_mean<GrassmannSpace>(pts, 1e-10);
  EXPECT_LT(gr_distance(permuted.mean, km.mean), 1e-9);
}

TEST(KarcherMean, ReportsNonConvergenceAndNeighborhoodFailures) {
  Rng rng(83);
  const auto center = testing::random_point(rng, 8);
  const auto pts = cloud(rng, center, 5, 0.8);
  try {
    karcher_mean<GrassmannSpace>(pts, 1e-8, 1);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.last_norm(), 1e-8);
  }
  const GrassmannPoint a = GrassmannPoint::from_orthonormal(testing::e_basis(4, 0, 1));
  const GrassmannPoint b = GrassmannPoint::from_orthonormal(testing::e_basis(4, 2, 3));
  EXPECT_THROW(karcher_mean<GrassmannSpace>({a, b}), NeighborhoodError);
}

TEST(KarcherMean, SpdGeometricMean) {
  const std::vector<SpdMatrix> pts = {SpdMatrix(), SpdMatrix(4.0 * Matrix2::Identity())};
  const auto km = karcher_mean<SpdSpace>(pts, 1e-12);
  EXPECT_LT((km.mean.matrix() - 2.0 * Matrix2::Identity()).norm(), 1e-12);
}

TEST(PgaFit, SingleGeodesicHasOneDirection) {
  Rng rng(84);
  const auto p0 = testing::random_point(rng, 20);
  const auto dir = testing::random_tangent(rng, p0, 1.0);
  std::vector<GrassmannPoint> pts;
  for (double t : {-0.4, -0.25, -0.1, 0.0, 0.15, 0.3, 0.4}) pts.push_back(gr_geodesic(p0, dir, t));
  const auto model = pga_fit<GrassmannSpace>(pts, 1e-10, 3);
  EXPECT_LE(model.eigenvalues(1) / model.eigenvalues(0), 1e-12);
  // The leading direction is the geodesic's (up to sign and the re-expression
  // of the tangent at the mean's representative).
  const auto lead = GrassmannSpace::unvec(model.basis.col(0), model.mean);
  const auto moved = gr_transport_between(p0, model.mean, dir);
  EXPECT_NEAR(std::abs(gr_inner(lead, moved)), 1.0, 1e-8);
}

TEST(PgaFit, BasisEigenvaluesAndCoordinates) {
  Rng rng(85);
  const auto center = testing::random_point(rng, 25);
  const auto pts = cloud(rng, center, 30, 0.5);
  const double eps = 1e-10;
  const auto model = pga_fit<GrassmannSpace>(pts, eps, 6);
  EXPECT_EQ(model.r, 6);
  EXPECT_EQ(model.samples, 30);
  EXPECT_EQ(model.n, 25);
  EXPECT_LT((model.basis.transpose() * model.basis - Matrix::Identity(6, 6)).norm(), 1e-10);
  for (Eigen::Index i = 0; i < 6; ++i) {
    EXPECT_LT(horizontality_error(model.mean, GrassmannSpace::unvec(model.basis.col(i), model.mean)),
              1e-10);
    EXPECT_GE(model.eigenvalues(i), 0.0);
    if (i > 0) {
      EXPECT_LE(model.eigenvalues(i), model.eigenvalues(i - 1));
    }
  }
  EXPECT_LE(model.coords.rowwise().mean().norm(), eps * std::sqrt(30.0));

  // Variance identity with the full basis.
  const auto full = pga_fit<GrassmannSpace>(pts, eps, 29);
  double total = 0.0;
  for (const auto& p : pts) total += gr_log(full.mean, p).delta.squaredNorm();
  total /= 29.0;
  EXPECT_NEAR(full.eigenvalues.sum(), total, 1e-9 * total);

  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Vector t = full.coords.col(static_cast<Eigen::Index>(k));
    EXPECT_LT(gr_distance(generate(full, t), pts[k]), 1e-8);
    EXPECT_LT((embed(full, pts[k]) - t).norm(), 1e-10);
  }
}

TEST(PgaFit, EmbedGenerateRoundTrip) {
  Rng rng(86);
  const auto center = testing::random_point(rng, 30);
  const auto model = pga_fit<GrassmannSpace>(cloud(rng, center, 40, 0.4), 1e-8, 4);
  EXPECT_LT(embed(model, model.mean).norm(), 1e-14);
  EXPECT_LT(gr_distance(generate(model, Vector::Zero(4)), model.mean), 1e-14);
  const CoordinateDomain dom = sample_domain(model.coords);
  for (int trial = 0; trial < 50; ++trial) {
    Vector t(4);
    for (Eigen::Index i = 0; i < 4; ++i) t(i) = rng.uniform(dom.lo(i), dom.hi(i));
    EXPECT_LT((embed(model, generate(model, t)) - t).norm(), 1e-8);
  }
  EXPECT_THROW(generate(model, Vector::Zero(3)), ContractError);
}

TEST(PgaFit, ErrorsAndDeterminism) {
  Rng rng(87);
  const auto center = testing::random_point(rng, 10);
  const auto pts = cloud(rng, center, 8, 0.5);
  EXPECT_THROW(pga_fit<GrassmannSpace>(pts, 1e-8, 8), ContractError);
  EXPECT_THROW(pga_fit<GrassmannSpace>(pts, 1e-8, 0), ContractError);
  EXPECT_THROW(pga_fit<GrassmannSpace>({center, center, center}, 1e-8, 1), DegeneracyError);
  const auto a = pga_fit<GrassmannSpace>(pts, 1e-8, 4);
  const auto b = pga_fit<GrassmannSpace>(pts, 1e-8, 4);
  EXPECT_EQ(a.basis, b.basis);
  EXPECT_EQ(a.coords, b.coords);
  EXPECT_EQ(a.mean.rep(), b.mean.rep());
}

TEST(PgaFit, SpdAndProductSpaces) {
  Rng rng(88);
  std::vector<SpdMatrix> spds;
  std::vector<ProductPoint> prods;
  const auto center = testing::random_point(rng, 12);
  for (int i = 0; i < 15; ++i) {
    spds.push_back(testing::random_spd(rng));
    prods.push_back({gr_exp(center, testing::random_tangent(rng, center, 0.3)), spds.back()});
  }
  const auto spd_model = pga_fit<SpdSpace>(spds, 1e-10, 3);
  EXPECT_LT((spd_model.basis.transpose() * spd_model.basis - Matrix::Identity(3, 3)).norm(), 1e-10);
  for (int k = 0; k < 15; ++k) {
    const SpdMatrix back = generate(spd_model, Vector(spd_model.coords.col(k)));
    EXPECT_LT((back.matrix() - spds[k].matrix()).norm(), 1e-8 * spds[k].matrix().norm());
  }
  // Vectorization is an isometry for the affine-invariant inner product at I.
  const SpdTangent s = testing::random_sym(rng);
  EXPECT_NEAR(SpdSpace::vec(s).squaredNorm(), spd_inner(SpdMatrix(), s, s), 1e-14);

  const auto prod_model = pga_fit<ProductSpace>(prods, 1e-10, 5);
  EXPECT_EQ(prod_model.basis.rows(), 2 * 12 + 3);
  EXPECT_LT((prod_model.basis.transpose() * prod_model.basis - Matrix::Identity(5, 5)).norm(), 1e-10);
}

TEST(MeanScale, Examples) {
  const AffineFactor a(Vector2(2, 0.5).asDiagonal(), Vector2::Zero());
  const AffineFactor b(Vector2(0.5, 2).asDiagonal(), Vector2::Zero());
  const MeanScale ext = mean_scale({a, b}, MeanScaleKind::extrinsic_gl2);
  EXPECT_LT((ext.m_bar - 1.25 * Matrix2::Identity()).norm(), 1e-15);
  const MeanScale same = mean_scale({a, a, a}, MeanScaleKind::extrinsic_gl2);
  EXPECT_LT((same.m_bar - a.m).norm(), 1e-15);
  const AffineFactor i(Matrix2::Identity(), Vector2::Zero());
  const AffineFactor four(4.0 * Matrix2::Identity(), Vector2::Zero());
  const MeanScale intr = mean_scale({i, four}, MeanScaleKind::intrinsic_spd);
  EXPECT_LT((intr.m_bar - 2.0 * Matrix2::Identity()).norm(), 1e-12);
  const AffineFactor neg(-1.0 * Matrix2::Identity(), Vector2::Zero());
  EXPECT_THROW(mean_scale({i, neg}, MeanScaleKind::extrinsic_gl2), DegeneracyError);
  EXPECT_THROW(mean_scale({i, neg}, MeanScaleKind::intrinsic_spd), DomainError);
}

TEST(SampleDomain, BoxAndBall) {
  Matrix sym(2, 2);
  sym << -1, 1, -2, 2;
  const CoordinateDomain d = sample_domain(sym);
  EXPECT_EQ(d.lo, Eigen::Vector2d(-1, -2));
  EXPECT_EQ(d.hi, Eigen::Vector2d(1, 2));
  EXPECT_DOUBLE_EQ(d.radius, std::sqrt(5.0));
  EXPECT_TRUE(d.contains(Eigen::Vector2d(0, 0)));
  EXPECT_FALSE(d.contains(Eigen::Vector2d(1.5, 0)));
  const CoordinateDomain single = sample_domain(Eigen::Vector2d(0.5, 0.25));
  EXPECT_EQ(single.lo, single.hi);
}

}  // namespace
}  // namespace sst
