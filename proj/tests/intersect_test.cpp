#include "sst/intersect.hpp"
#include "sst/preprocess.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace sst {
namespace {

MatrixN2 pts(std::initializer_list<std::array<double, 2>> list) {
  MatrixN2 x(static_cast<Eigen::Index>(list.size()), 2);
  Eigen::Index i = 0;
  for (const auto& p : list) x.row(i++) << p[0], p[1];
  return x;
}

TEST(Orient2d, SignsAndExactCollinearity) {
  EXPECT_EQ(orient2d({0, 0}, {1, 0}, {0, 1}), 1);
  EXPECT_EQ(orient2d({0, 0}, {0, 1}, {1, 0}), -1);
  EXPECT_EQ(orient2d({0, 0}, {1, 1}, {3, 3}), 0);
  // Nearly collinear points where the naive determinant rounds wrongly.
  const Vector2 a(0.5, 0.5);
  const Vector2 b(12.0, 12.0);
  const Vector2 c(24.0, 24.0);
  EXPECT_EQ(orient2d(a, b, c), 0);
  const Vector2 c_up(24.0, std::nextafter(24.0, 25.0));
  EXPECT_EQ(orient2d(a, b, c_up), 1);
  const Vector2 c_down(24.0, std::nextafter(24.0, 23.0));
  EXPECT_EQ(orient2d(a, b, c_down), -1);
}

TEST(Orient2d, ExactOnUlpPerturbedGrid) {
  // a is offset from the line y = x by whole ulps, so the exact sign is
  // -sign(i - j).
  const double base = 0.5;
  const double ulp = std::nextafter(base, 1.0) - base;
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      const Vector2 a(base + i * ulp, base + j * ulp);
      const Vector2 b(12.0, 12.0);
      const Vector2 c(24.0, 24.0);
      const long long di = i - j;
      const int expected = di > 0 ? -1 : (di < 0 ? 1 : 0);
      EXPECT_EQ(orient2d(a, b, c), expected) << i << "," << j;
    }
  }
}

TEST(SegmentsIntersect, Cases) {
  EXPECT_TRUE(segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  EXPECT_TRUE(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 1}));      // touching
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));      // collinear overlap
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));     // collinear apart
}

TEST(SelfIntersects, Examples) {
  const MatrixN2 square = pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_FALSE(self_intersects(square, true));
  const MatrixN2 bowtie = pts({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
  EXPECT_TRUE(self_intersects(bowtie, true));
  EXPECT_TRUE(self_intersects(LandmarkShape(bowtie, true)));
  // First and third edges cross even without the closing edge.
  EXPECT_TRUE(self_intersects(bowtie, false));

  MatrixN2 spiral(200, 2);
  for (Eigen::Index i = 0; i < 200; ++i) {
    const double t = 0.1 * static_cast<double>(i);
    spiral.row(i) << (1 + t) * std::cos(t), (1 + t) * std::sin(t);
  }
  EXPECT_FALSE(self_intersects(spiral, false));
  // Closing the spiral cuts through the inner turns.
  EXPECT_TRUE(self_intersects(spiral, true));
}

TEST(SelfIntersects, RepeatedEndpointAndDuplicates) {
  const MatrixN2 closed = pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}});
  EXPECT_FALSE(self_intersects(closed, true));
  const MatrixN2 dup = pts({{0, 0}, {1, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_FALSE(self_intersects(dup, true));
  // Doubling back puts a vertex on an earlier edge.
  const MatrixN2 spike = pts({{0, 0}, {2, 0}, {1, 0}, {1, 1}});
  EXPECT_TRUE(self_intersects(spike, false));
  // An endpoint repeated up to rounding still closes the curve.
  MatrixN2 near = closed;
  near(4, 0) = std::nextafter(0.0, 1.0);
  near(4, 1) = 1e-17;
  EXPECT_FALSE(self_intersects(near, true));
  near(4, 0) = 0.5;
  near(4, 1) = -1e-3;
  EXPECT_TRUE(self_intersects(near, true));
}

TEST(SelfIntersects, RandomStarPolygonsAreSimple) {
  Rng rng(60);
  for (int trial = 0; trial < 50; ++trial) {
    EXPECT_FALSE(self_intersects(testing::random_shape(rng, 50)));
  }
}

}  // namespace
}  // namespace sst
