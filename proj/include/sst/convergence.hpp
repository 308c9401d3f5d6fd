#pragma once

// Refinement convergence experiment: random CST airfoils sampled coarsely,
// spline-refined onto the parameters of a dense reference, and compared to
// that reference in the plane and on the Grassmannian.

#include "sst/cst.hpp"
#include "sst/preprocess.hpp"
#include "sst/shape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace sst {

struct ConvergenceOptions {
  int trials = 100;
  Eigen::Index n_ref = 2000;
  std::vector<Eigen::Index> nc_list = {20, 40, 80, 160, 320};
  std::uint64_t seed = 1;
  double coeff_lo = 0.0;
  double coeff_hi = 0.45;
  SplineKind spline = SplineKind::cubic;
  /// Fit the coarse airfoil as a closed curve (periodic spline) or as an
  /// open one pinned at the trailing edge (natural spline).
  bool periodic = true;
};

struct ConvergenceRow {
  Eigen::Index n_c = 0;
  double gauge_mean = 0.0;  // mean over trials of the mean landmark spacing
  double gauge_max = 0.0;   // mean over trials of the largest landmark spacing
  double euclid_mean = 0.0;
  double euclid_max = 0.0;
  double euclid_median = 0.0;
  double grass_mean = 0.0;
  double grass_max = 0.0;
  double grass_median = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  int trials = 0;
  int skipped = 0;
  /// Least-squares slopes of log(mean error) against log(gauge) over rows
  /// from `fit_from` on.
  std::size_t fit_from = 0;
  double slope_grass_vs_mean_gauge = 0.0;
  double slope_grass_vs_max_gauge = 0.0;
  double slope_euclid_vs_mean_gauge = 0.0;
  double slope_euclid_vs_max_gauge = 0.0;
};

/// max_i |x_i - y_i|_2
inline double max_row_distance(const MatrixN2& x, const MatrixN2& y) {
  if (x.rows() != y.rows()) throw ContractError("max_row_distance: landmark counts differ");
  return (x - y).rowwise().norm().maxCoeff();
}

/// Slope of the least-squares line through (log x, log y).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("loglog_slope needs two points");
  double mx = 0, my = 0;
  const auto m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("loglog_slope needs positive data");
    mx += std::log(x[i]) / m;
    my += std::log(y[i]) / m;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

}  // namespace detail

inline ConvergenceReport run_convergence(const ConvergenceOptions& opts) {
  if (opts.trials < 1) throw InputError("convergence needs at least one trial");
  if (opts.nc_list.empty()) throw InputError("convergence needs at least one n_c");
  for (std::size_t i = 0; i < opts.nc_list.size(); ++i) {
    if (opts.nc_list[i] < 4) throw InputError("every n_c must be at least 4");
    if (i > 0 && opts.nc_list[i] <= opts.nc_list[i - 1]) {
      throw InputError("n_c values must be strictly increasing");
    }
  }
  if (opts.n_ref <= opts.nc_list.back()) throw InputError("n_ref must exceed every n_c");

  const std::size_t levels = opts.nc_list.size();
  std::vector<std::vector<double>> gauge_mean(levels), gauge_max(levels), euclid(levels),
      grass(levels);
  ConvergenceReport report;
  Rng rng(opts.seed);
  for (int trial = 0; trial < opts.trials; ++trial) {
    const CstAirfoil coeffs = random_cst(rng, opts.coeff_lo, opts.coeff_hi);
    std::vector<double> gm(levels), gx(levels), eu(levels), gr(levels);
    try {
      const LandmarkShape truth = cst_airfoil(coeffs, opts.n_ref);
      const Vector s_star = cumulative_lengths(truth.x());
      const GrassmannPoint truth_g = la_standardize(truth).grass;
      for (std::size_t l = 0; l < levels; ++l) {
        const LandmarkShape coarse = cst_airfoil(coeffs, opts.nc_list[l]);
        const LandmarkShape fit(coarse.x(), opts.periodic);
        const LandmarkShape refined = refine_at(fit, s_star, opts.spline);
        gm[l] = mean_segment(coarse.x());
        gx[l] = landmark_gauge(coarse.x());
        eu[l] = max_row_distance(refined.x(), truth.x());
        gr[l] = gr_distance(la_standardize(refined).grass, truth_g, GrassmannMetric::angle_sum);
      }
    } catch (const DegeneracyError&) {
      ++report.skipped;
      continue;
    }
    for (std::size_t l = 0; l < levels; ++l) {
      gauge_mean[l].push_back(gm[l]);
      gauge_max[l].push_back(gx[l]);
      euclid[l].push_back(eu[l]);
      grass[l].push_back(gr[l]);
    }
  }
  report.trials = opts.trials - report.skipped;
  if (report.trials == 0) throw DegeneracyError("every convergence trial was degenerate");

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto max = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  for (std::size_t l = 0; l < levels; ++l) {
    ConvergenceRow row;
    row.n_c = opts.nc_list[l];
    row.gauge_mean = mean(gauge_mean[l]);
    row.gauge_max = mean(gauge_max[l]);
    row.euclid_mean = mean(euclid[l]);
    row.euclid_max = max(euclid[l]);
    row.euclid_median = detail::median(euclid[l]);
    row.grass_mean = mean(grass[l]);
    row.grass_max = max(grass[l]);
    row.grass_median = detail::median(grass[l]);
    report.rows.push_back(row);
  }

  // The coarsest level is pre-asymptotic once there are enough levels to spare.
  report.fit_from = levels >= 4 ? 1 : 0;
  if (levels - report.fit_from >= 2) {
    std::vector<double> hm, hx, eg, ee;
    for (std::size_t l = report.fit_from; l < levels; ++l) {
      hm.push_back(report.rows[l].gauge_mean);
      hx.push_back(report.rows[l].gauge_max);
      eg.push_back(report.rows[l].grass_mean);
      ee.push_back(report.rows[l].euclid_mean);
    }
    report.slope_grass_vs_mean_gauge = loglog_slope(hm, eg);
    report.slope_grass_vs_max_gauge = loglog_slope(hx, eg);
    report.slope_euclid_vs_mean_gauge = loglog_slope(hm, ee);
    report.slope_euclid_vs_max_gauge = loglog_slope(hx, ee);
  }
  return report;
}

}  // namespace sst
