#include "sst/convergence.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace sst {
namespace {

TEST(LoglogSlope, RecoversPowerLaws) {
  std::vector<double> h = {0.1, 0.05, 0.025, 0.0125};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * x * x);
  EXPECT_NEAR(loglog_slope(h, e), 2.0, 1e-12);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), ContractError);
  EXPECT_THROW(loglog_slope({1.0, 2.0}, {1.0, 0.0}), DomainError);
}

TEST(MaxRowDistance, Example) {
  MatrixN2 a = MatrixN2::Zero(3, 2);
  MatrixN2 b = a;
  b.row(1) << 3, 4;
  EXPECT_EQ(max_row_distance(a, b), 5.0);
}

class ConvergenceHarness : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { report_ = new ConvergenceReport(run_convergence({})); }
  static void TearDownTestSuite() { delete report_; }
  static ConvergenceReport* report_;
};

ConvergenceReport* ConvergenceHarness::report_ = nullptr;

TEST_F(ConvergenceHarness, QuadraticSlope) {
  EXPECT_EQ(report_->trials + report_->skipped, 100);
  EXPECT_GE(report_->slope_grass_vs_mean_gauge, 1.5);
  EXPECT_LE(report_->slope_grass_vs_mean_gauge, 2.5);
  EXPECT_GE(report_->slope_grass_vs_max_gauge, 1.5);
  EXPECT_LE(report_->slope_grass_vs_max_gauge, 2.5);
}

TEST_F(ConvergenceHarness, RowsAreOrderedAndMediansDecrease) {
  const auto& rows = report_->rows;
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t l = 0; l < rows.size(); ++l) {
    EXPECT_GE(rows[l].grass_mean, 0.0);
    EXPECT_LE(rows[l].grass_median, rows[l].grass_max);
    EXPECT_LE(rows[l].gauge_mean, rows[l].gauge_max);
    if (l > 0) {
      EXPECT_GT(rows[l].n_c, rows[l - 1].n_c);
      EXPECT_LE(rows[l].grass_median, rows[l - 1].grass_median);
      EXPECT_LE(rows[l].euclid_median, rows[l - 1].euclid_median);
    }
  }
}

TEST_F(ConvergenceHarness, ErrorRatioTracksSquaredGaugeRatio) {
  // n_c = 20 against n_c = 160.
  const auto& a = report_->rows[0];
  const auto& b = report_->rows[3];
  const double gauge = a.gauge_max / b.gauge_max;
  const double ratio = a.grass_mean / b.grass_mean;
  EXPECT_GT(ratio, gauge * gauge / 4.0);
  EXPECT_LT(ratio, gauge * gauge * 4.0);
}

TEST(Convergence, DeterministicAndValidated) {
  ConvergenceOptions opts;
  opts.trials = 5;
  opts.n_ref = 500;
  opts.nc_list = {20, 40, 80};
  const auto a = run_convergence(opts);
  const auto b = run_convergence(opts);
  for (std::size_t l = 0; l < 3; ++l) {
    EXPECT_EQ(a.rows[l].grass_mean, b.rows[l].grass_mean);
    EXPECT_EQ(a.rows[l].euclid_max, b.rows[l].euclid_max);
  }
  opts.nc_list = {40, 20};
  EXPECT_THROW(run_convergence(opts), InputError);
  opts.nc_list = {20, 600};
  EXPECT_THROW(run_convergence(opts), InputError);
}

}  // namespace
}  // namespace sst
