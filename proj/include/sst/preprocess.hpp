#pragma once

// Spline-based resampling of landmark shapes to a fixed n-refinement over
// normalized cumulative chord lengths.

#include "sst/error.hpp"
#include "sst/intersect.hpp"
#include "sst/shape.hpp"
#include "sst/spline.hpp"

#include <cmath>
#include <numbers>

namespace sst {

enum class SplineKind { cubic, pchip };
enum class Sampling { uniform_arclength, cosine };

struct PreprocessConfig {
  Eigen::Index n = 401;
  SplineKind spline = SplineKind::cubic;
  Sampling sampling = Sampling::uniform_arclength;
  bool check_intersection = false;
};

/// s_1 = 0, s_i = (sum of the first i-1 segment lengths) / total length.
/// Throws DegeneracyError on repeated consecutive landmarks.
inline Vector cumulative_lengths(const MatrixN2& x) {
  const Eigen::Index n = x.rows();
  if (n < 2) throw DegeneracyError("cumulative_lengths needs at least two landmarks");
  Vector s(n);
  s(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double seg = (x.row(i) - x.row(i - 1)).norm();
    if (!(seg > 0.0)) {
      throw DegeneracyError("repeated consecutive landmarks at index " + std::to_string(i));
    }
    s(i) = s(i - 1) + seg;
  }
  s /= s(n - 1);
  s(n - 1) = 1.0;
  return s;
}

/// n parameter values in [0, 1]; cosine is s_i = (1 - cos(pi i / (n-1))) / 2.
/// With `include_end` false the samples cover [0, 1) for closed curves
/// stored without a repeated endpoint.
inline Vector sample_parameters(Eigen::Index n, Sampling sampling, bool include_end = true) {
  Vector s(n);
  const double denom = include_end ? static_cast<double>(n - 1) : static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / denom;
    s(i) = sampling == Sampling::cosine ? 0.5 * (1.0 - std::cos(std::numbers::pi * u)) : u;
  }
  if (include_end) s(n - 1) = 1.0;
  return s;
}

namespace detail {

/// Knots and landmark coordinates for the parametric curve fit; closed
/// shapes without a repeated endpoint get one appended.
struct CurveData {
  Vector s;
  MatrixN2 x;
  bool periodic = false;
};

inline CurveData curve_data(const LandmarkShape& shape, SplineKind kind) {
  CurveData data;
  data.x = shape.x();
  if (shape.closed() && !shape.repeats_endpoint()) {
    data.x.conservativeResize(data.x.rows() + 1, Eigen::NoChange);
    data.x.row(data.x.rows() - 1) = data.x.row(0);
  }
  data.s = cumulative_lengths(data.x);
  data.periodic = shape.closed() && kind == SplineKind::cubic;
  return data;
}

}  // namespace detail

/// Evaluates the spline through `shape` (parametrized by cumulative_lengths)
/// at the given parameter values.
inline MatrixN2 evaluate_curve(const LandmarkShape& shape, const Vector& params,
                               SplineKind kind = SplineKind::cubic) {
  const detail::CurveData data = detail::curve_data(shape, kind);
  MatrixN2 out(params.size(), 2);
  for (int c = 0; c < 2; ++c) {
    const Vector y = data.x.col(c);
    const HermiteCubic curve =
        kind == SplineKind::pchip
            ? pchip(data.s, y)
            : cubic_spline(data.s, y, data.periodic ? SplineEnd::periodic : SplineEnd::natural);
    out.col(c) = curve(params);
  }
  return out;
}

/// Spline refinement at explicit parameter values.
inline LandmarkShape refine_at(const LandmarkShape& shape, const Vector& params,
                               SplineKind kind = SplineKind::cubic) {
  return LandmarkShape(evaluate_curve(shape, params, kind), shape.closed());
}

/// Fixed n-refinement. Closed shapes keep their endpoint convention: a
/// repeated first/last landmark stays repeated, otherwise samples cover
/// [0, 1) of the closed loop.
inline LandmarkShape refine(const LandmarkShape& shape, const PreprocessConfig& cfg = {}) {
  if (cfg.n < 3) throw ContractError("refinement needs n >= 3");
  const bool include_end = !shape.closed() || shape.repeats_endpoint();
  const Vector params = sample_parameters(cfg.n, cfg.sampling, include_end);
  LandmarkShape out = refine_at(shape, params, cfg.spline);
  if (cfg.check_intersection && self_intersects(out.x(), out.closed())) {
    throw DegeneracyError("refined shape self-intersects");
  }
  return out;
}

inline bool self_intersects(const LandmarkShape& shape) {
  return self_intersects(shape.x(), shape.closed());
}

}  // namespace sst
