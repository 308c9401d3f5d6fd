#pragma once

// Blades from ordered airfoil stations: Procrustes clustering of the
// Grassmann representatives, spanwise reparametrization by cumulative
// distance, piecewise-geodesic interpolation with an affine schedule, and
// consistent deformations by parallel transport from a PGA mean.

#include "sst/error.hpp"
#include "sst/grassmann.hpp"
#include "sst/preprocess.hpp"
#include "sst/shape.hpp"
#include "sst/spd.hpp"
#include "sst/spline.hpp"
#include "sst/stats.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace sst {

/// argmin over O(2) of ||a - b R||_F: R = U V^T from b^T a = U S V^T.
/// With `proper` the minimizer is restricted to SO(2).
inline Matrix2 procrustes_rotation(const MatrixN2& a, const MatrixN2& b, bool proper = false) {
  if (a.rows() != b.rows()) throw ContractError("procrustes_rotation: row counts differ");
  Eigen::JacobiSVD<Matrix2> svd(b.transpose() * a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix2 u = svd.matrixU();
  if (proper && (u * svd.matrixV().transpose()).determinant() < 0.0) u.col(1) *= -1.0;
  return u * svd.matrixV().transpose();
}

enum class ClusterOrder { tip_to_root, root_to_tip };

struct Clustering {
  std::vector<GrassmannPoint> reps;     // reps[k] = input[k] * rotations[k]
  std::vector<Matrix2> rotations;
  std::vector<std::size_t> reflections;  // stations whose rotation has det -1
};

/// Sequential Procrustes alignment. The anchor (tip for tip_to_root) keeps
/// its representative; every other station is rotated onto its already
/// aligned neighbor.
inline Clustering cluster_representatives(const std::vector<GrassmannPoint>& reps,
                                          ClusterOrder order = ClusterOrder::tip_to_root,
                                          bool proper = false) {
  const std::size_t count = reps.size();
  if (count < 2) throw ContractError("cluster_representatives needs at least two stations");
  Clustering out;
  out.reps = reps;
  out.rotations.assign(count, Matrix2::Identity());
  auto align = [&](std::size_t k, std::size_t neighbor) {
    const Matrix2 r = procrustes_rotation(out.reps[neighbor].rep(), reps[k].rep(), proper);
    out.rotations[k] = r;
    out.reps[k] = GrassmannPoint::from_orthonormal(reps[k].rep() * r, 1e-8);
    if (r.determinant() < 0.0) out.reflections.push_back(k);
  };
  if (order == ClusterOrder::tip_to_root) {
    for (std::size_t k = count - 1; k-- > 0;) align(k, k + 1);
  } else {
    for (std::size_t k = 1; k < count; ++k) align(k, k - 1);
  }
  std::sort(out.reflections.begin(), out.reflections.end());
  return out;
}

enum class BladeVariant { gl2_schedule, product_spd };

struct BladeStation {
  double eta = 0.0;
  LandmarkShape shape;
  std::optional<AffineFactor> placement;  // applied to `shape` before building
};

/// Optional 3D span axis through knots (eta_i, point_i).
struct SpanAxis {
  std::vector<double> eta;
  std::vector<Eigen::Vector3d> points;
  bool empty() const { return eta.empty(); }
};

struct BladeDefinition {
  std::vector<BladeStation> stations;
  /// gl2_schedule: explicit M(eta). product_spd: explicit rotation R(eta).
  std::function<Matrix2(double)> m_schedule;
  std::function<Vector2(double)> b_schedule;
  double span_length = 1.0;
  SpanAxis bend;
};

struct BladeOptions {
  BladeVariant variant = BladeVariant::gl2_schedule;
  ClusterOrder order = ClusterOrder::tip_to_root;
  bool proper_rotations = false;
  bool refine = false;  // refine every station with `preprocess` first
  PreprocessConfig preprocess;
};

struct BladeModel {
  BladeOptions options;
  bool closed = false;
  Vector eta;
  std::vector<MatrixN2> stations;  // knot shapes after placement/refinement
  std::vector<GrassmannPoint> reps;
  std::vector<Matrix2> rotations;
  std::vector<std::size_t> reflections;
  std::vector<AffineFactor> affine;  // aligned factors: stations[k] = reps[k] m + 1 b^T
  Vector t;                          // cumulative Grassmann distances
  HermiteCubic phi;
  std::vector<GrassmannTangent> gr_steps;  // Log_{reps[k]} reps[k+1]
  std::vector<HermiteCubic> affine_splines;  // m11, m21, m12, m22, b1, b2

  // product_spd only.
  std::vector<SpdMatrix> spds;  // aligned SPD factors
  Vector ell;                   // cumulative SPD distances
  HermiteCubic psi;
  std::vector<SpdTangent> spd_steps;
  bool rotation_by_angle = true;
  std::vector<HermiteCubic> rotation_splines;  // angle, or the four entries

  std::function<Matrix2(double)> m_schedule;
  std::function<Vector2(double)> b_schedule;
  double span_length = 1.0;
  SpanAxis bend;
  std::vector<std::string> warnings;

  Eigen::Index n() const { return reps.front().n(); }
};

namespace detail {

/// Linear for two knots, parabola for three, natural cubic beyond.
inline HermiteCubic schedule_spline(const Vector& x, const Vector& y) {
  return cubic_spline(x, y, x.size() == 3 ? SplineEnd::not_a_knot : SplineEnd::natural);
}

inline Matrix2 rotation(double theta) {
  Matrix2 r;
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return r;
}

constexpr double kZeroStep = 1e-14;

/// Interval k with eta_k <= e <= eta_{k+1}; throws outside the span.
inline Eigen::Index blade_interval(const Vector& eta, double e) {
  if (!(e >= eta(0) && e <= eta(eta.size() - 1))) {
    throw DomainError("eta = " + std::to_string(e) + " is outside the blade span [" +
                      std::to_string(eta(0)) + ", " + std::to_string(eta(eta.size() - 1)) +
                      "]; no extrapolation");
  }
  return locate(eta, e);
}

inline MatrixN2 placed_landmarks(const BladeStation& st) {
  return st.placement ? apply_affine(st.shape.x(), st.placement->m, st.placement->b) : st.shape.x();
}

/// Drops a station that repeats the previous eta with the same placed
/// landmarks. A repeated eta with a different shape is a jump and is rejected.
inline std::vector<BladeStation> merge_repeated(const std::vector<BladeStation>& stations) {
  std::vector<BladeStation> out;
  for (std::size_t k = 0; k < stations.size(); ++k) {
    if (!out.empty() && stations[k].eta == out.back().eta) {
      const MatrixN2 a = placed_landmarks(out.back()), b = placed_landmarks(stations[k]);
      if (a.rows() == b.rows() && a == b) continue;
      throw InputError("station " + std::to_string(k) + " repeats eta " +
                       std::to_string(stations[k].eta) + " with a different shape");
    }
    out.push_back(stations[k]);
  }
  return out;
}

}  // namespace detail

inline BladeModel build_blade(const BladeDefinition& def, const BladeOptions& opts = {}) {
  const std::vector<BladeStation> stations = detail::merge_repeated(def.stations);
  const std::size_t count = stations.size();
  if (count < 2) throw ContractError("a blade needs at least two stations");
  BladeModel model;
  model.options = opts;
  model.m_schedule = def.m_schedule;
  model.b_schedule = def.b_schedule;
  model.span_length = def.span_length;
  model.bend = def.bend;
  model.eta.resize(static_cast<Eigen::Index>(count));
  for (std::size_t k = 0; k < count; ++k) {
    model.eta(static_cast<Eigen::Index>(k)) = stations[k].eta;
    if (k > 0 && !(stations[k].eta > stations[k - 1].eta)) {
      throw InputError("station eta values must be strictly increasing (station " +
                       std::to_string(k) + ")");
    }
  }
  if (def.bend.eta.size() != def.bend.points.size() || def.bend.eta.size() == 1) {
    throw InputError("bend curve needs at least two (eta, point) knots");
  }

  std::vector<SeparableShape> seps;
  const LaVariant la = opts.variant == BladeVariant::product_spd ? LaVariant::polar : LaVariant::gl2;
  for (std::size_t k = 0; k < count; ++k) {
    const BladeStation& st = stations[k];
    LandmarkShape shape = st.shape;
    if (st.placement) shape = LandmarkShape(detail::placed_landmarks(st), shape.closed());
    if (opts.refine) shape = refine(shape, opts.preprocess);
    if (k > 0 && shape.n() != model.stations.front().rows()) {
      throw ContractError("station " + std::to_string(k) + " has " + std::to_string(shape.n()) +
                          " landmarks, expected " + std::to_string(model.stations.front().rows()));
    }
    if (k == 0) model.closed = shape.closed();
    model.stations.push_back(shape.x());
    seps.push_back(la_standardize(shape, la));
  }

  std::vector<GrassmannPoint> raw;
  for (const auto& s : seps) raw.push_back(s.grass);
  Clustering cl = cluster_representatives(raw, opts.order, opts.proper_rotations);
  model.reps = std::move(cl.reps);
  model.rotations = std::move(cl.rotations);
  model.reflections = std::move(cl.reflections);
  for (std::size_t k : model.reflections) {
    model.warnings.push_back("station " + std::to_string(k) +
                             ": Procrustes alignment used a reflection");
  }

  const auto m = static_cast<Eigen::Index>(count);
  model.t = Vector::Zero(m);
  for (std::size_t k = 0; k < count; ++k) {
    model.affine.emplace_back(model.rotations[k].transpose() * seps[k].affine.m, seps[k].affine.b);
    if (k + 1 == count) break;
    const double d = gr_distance(model.reps[k], model.reps[k + 1]);
    if (d < detail::kZeroStep) {
      model.gr_steps.push_back(GrassmannTangent::zero(model.reps[k].n()));
      model.t(static_cast<Eigen::Index>(k + 1)) = model.t(static_cast<Eigen::Index>(k));
    } else {
      try {
        model.gr_steps.push_back(gr_log(model.reps[k], model.reps[k + 1]));
      } catch (const NeighborhoodError& e) {
        throw NeighborhoodError("stations " + std::to_string(k) + " and " + std::to_string(k + 1) +
                                ": " + e.what());
      }
      model.t(static_cast<Eigen::Index>(k + 1)) = model.t(static_cast<Eigen::Index>(k)) + d;
    }
  }
  model.phi = pchip(model.eta, model.t);

  for (int entry = 0; entry < 6; ++entry) {
    Vector y(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const AffineFactor& f = model.affine[static_cast<std::size_t>(k)];
      y(k) = entry < 4 ? f.m(entry % 2, entry / 2) : f.b(entry - 4);
    }
    model.affine_splines.push_back(detail::schedule_spline(model.eta, y));
  }

  if (opts.variant == BladeVariant::product_spd) {
    model.ell = Vector::Zero(m);
    for (std::size_t k = 0; k < count; ++k) {
      const Matrix2& r = model.rotations[k];
      model.spds.emplace_back(symmetrize(r.transpose() * seps[k].affine.m * r));
    }
    for (std::size_t k = 0; k + 1 < count; ++k) {
      const double d = spd_distance(model.spds[k], model.spds[k + 1]);
      const auto i = static_cast<Eigen::Index>(k);
      if (d < detail::kZeroStep) {
        model.spd_steps.emplace_back();
        model.ell(i + 1) = model.ell(i);
      } else {
        model.spd_steps.push_back(spd_log(model.spds[k], model.spds[k + 1]));
        model.ell(i + 1) = model.ell(i) + d;
      }
    }
    model.psi = pchip(model.eta, model.ell);
    // Station rotation R(eta_k) = R_k^T.
    model.rotation_by_angle = model.reflections.empty();
    if (model.rotation_by_angle) {
      Vector theta(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        const Matrix2 rt = model.rotations[static_cast<std::size_t>(k)].transpose();
        theta(k) = std::atan2(rt(0, 1), rt(0, 0));
        if (k > 0) {
          theta(k) += 2 * std::numbers::pi *
                      std::round((theta(k - 1) - theta(k)) / (2 * std::numbers::pi));
        }
      }
      model.rotation_splines.push_back(detail::schedule_spline(model.eta, theta));
    } else {
      for (int entry = 0; entry < 4; ++entry) {
        Vector y(m);
        for (Eigen::Index k = 0; k < m; ++k) {
          y(k) = model.rotations[static_cast<std::size_t>(k)].transpose()(entry % 2, entry / 2);
        }
        model.rotation_splines.push_back(detail::schedule_spline(model.eta, y));
      }
      model.warnings.push_back("rotation schedule interpolated entrywise because of reflections");
    }
  }
  return model;
}

/// Grassmann component (X~ o phi)(eta).
inline GrassmannPoint blade_representative(const BladeModel& model, double e) {
  const Eigen::Index k = detail::blade_interval(model.eta, e);
  const auto ks = static_cast<std::size_t>(k);
  if (e == model.eta(k)) return model.reps[ks];
  if (e == model.eta(k + 1)) return model.reps[ks + 1];
  const double dt = model.t(k + 1) - model.t(k);
  if (!(dt > 0.0)) return model.reps[ks];
  const double tt = std::clamp((model.phi(e) - model.t(k)) / dt, 0.0, 1.0);
  return gr_exp(model.reps[ks], {tt * model.gr_steps[ks].delta});
}

/// SPD component (P o psi)(eta) of a product blade.
inline SpdMatrix blade_spd(const BladeModel& model, double e) {
  if (model.options.variant != BladeVariant::product_spd) {
    throw ContractError("blade_spd needs a product_spd blade");
  }
  const Eigen::Index k = detail::blade_interval(model.eta, e);
  const auto ks = static_cast<std::size_t>(k);
  if (e == model.eta(k)) return model.spds[ks];
  if (e == model.eta(k + 1)) return model.spds[ks + 1];
  const double dl = model.ell(k + 1) - model.ell(k);
  if (!(dl > 0.0)) return model.spds[ks];
  const double tt = std::clamp((model.psi(e) - model.ell(k)) / dl, 0.0, 1.0);
  return spd_exp(model.spds[ks], SpdTangent(tt * model.spd_steps[ks].s));
}

/// Rotation R(eta) of a product blade.
inline Matrix2 blade_rotation(const BladeModel& model, double e) {
  detail::blade_interval(model.eta, e);
  if (model.m_schedule) return model.m_schedule(e);
  if (model.rotation_by_angle) return detail::rotation(model.rotation_splines.front()(e));
  Matrix2 r;
  for (int entry = 0; entry < 4; ++entry) r(entry % 2, entry / 2) = model.rotation_splines[entry](e);
  return r;
}

/// Linear factor applied to the representative at eta.
inline Matrix2 blade_linear(const BladeModel& model, double e) {
  detail::blade_interval(model.eta, e);
  if (model.options.variant == BladeVariant::product_spd) {
    return blade_spd(model, e).matrix() * blade_rotation(model, e);
  }
  if (model.m_schedule) return model.m_schedule(e);
  Matrix2 m;
  for (int entry = 0; entry < 4; ++entry) m(entry % 2, entry / 2) = model.affine_splines[entry](e);
  return m;
}

inline Vector2 blade_translation(const BladeModel& model, double e) {
  detail::blade_interval(model.eta, e);
  if (model.b_schedule) return model.b_schedule(e);
  return {model.affine_splines[4](e), model.affine_splines[5](e)};
}

/// X(eta) = (X~ o phi)(eta) M(eta) + 1 b(eta)^T.
inline LandmarkShape evaluate_blade(const BladeModel& model, double e) {
  const GrassmannPoint rep = blade_representative(model, e);
  return LandmarkShape(apply_affine(rep.rep(), blade_linear(model, e), blade_translation(model, e)),
                       model.closed);
}

/// The PGA tangent vec^{-1}(U_r coeffs) transported from the Karcher mean to
/// every station representative.
inline std::vector<GrassmannTangent> transported_deformation(const BladeModel& model,
                                                             const PgaModel<GrassmannSpace>& pga,
                                                             const Vector& coeffs) {
  if (pga.n != model.n()) {
    throw ContractError("PGA model has n = " + std::to_string(pga.n) + " but the blade has n = " +
                        std::to_string(model.n()));
  }
  const GrassmannTangent delta = pga_tangent(pga, coeffs);
  std::vector<GrassmannTangent> out;
  for (std::size_t k = 0; k < model.reps.size(); ++k) {
    try {
      out.push_back(gr_transport_between(pga.mean, model.reps[k], delta));
    } catch (const NeighborhoodError& e) {
      throw NeighborhoodError("station " + std::to_string(k) + " (eta = " +
                              std::to_string(model.eta(static_cast<Eigen::Index>(k))) +
                              "): " + e.what());
    }
  }
  return out;
}

/// Applies the same PGA deformation to every station and rebuilds the
/// blade. Without `scale` each station keeps its own affine factor; with it
/// every station uses the mean scale M-bar and keeps its translation.
inline BladeModel consistent_deform(const BladeModel& model, const PgaModel<GrassmannSpace>& pga,
                                    const Vector& coeffs,
                                    const std::optional<MeanScale>& scale = std::nullopt) {
  const std::vector<GrassmannTangent> moved = transported_deformation(model, pga, coeffs);
  std::vector<std::string> warnings;
  BladeDefinition def;
  def.m_schedule = model.m_schedule;
  def.b_schedule = model.b_schedule;
  def.span_length = model.span_length;
  def.bend = model.bend;
  for (std::size_t k = 0; k < model.reps.size(); ++k) {
    const double e = model.eta(static_cast<Eigen::Index>(k));
    if (gr_distance(pga.mean, model.reps[k]) > pga.radius) {
      warnings.push_back("station " + std::to_string(k) + " (eta = " + std::to_string(e) +
                         ") lies outside the training radius of the PGA model");
    }
    if (!scale && coeffs.isZero(0.0)) {
      // Exp of the zero tangent: keep the station exactly.
      def.stations.push_back({e, LandmarkShape(model.stations[k], model.closed), {}});
      continue;
    }
    const GrassmannPoint rep = gr_exp(model.reps[k], moved[k]);
    const Matrix2 m = scale ? scale->m_bar : model.affine[k].m;
    def.stations.push_back(
        {e, LandmarkShape(apply_affine(rep.rep(), m, model.affine[k].b), model.closed), {}});
  }
  BladeOptions opts = model.options;
  opts.refine = false;
  BladeModel out = build_blade(def, opts);
  out.warnings.insert(out.warnings.begin(), warnings.begin(), warnings.end());
  return out;
}

struct Section3 {
  double eta = 0.0;
  Eigen::Matrix<double, Eigen::Dynamic, 3> x;
};

struct Wireframe {
  std::vector<Section3> sections;
  std::vector<Eigen::Vector3d> span_curve;  // section origins on the span axis
  bool closed = false;
};

namespace detail {

/// Rotation taking e_z to the unit vector `tangent`.
inline Eigen::Matrix3d align_z(const Eigen::Vector3d& tangent) {
  const Eigen::Vector3d z(0, 0, 1);
  const Eigen::Vector3d v = z.cross(tangent);
  const double c = z.dot(tangent);
  if (c <= -1.0 + 1e-12) return Eigen::Vector3d(1, -1, -1).asDiagonal();
  Eigen::Matrix3d k;
  k << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return Eigen::Matrix3d::Identity() + k + k * k / (1.0 + c);
}

}  // namespace detail

/// Sections at the requested eta values in 3D. A straight axis puts section
/// eta at z = eta * span_length; a bend curve places the section origin on
/// the curve with the section plane normal along the curve tangent.
inline Wireframe emit_wireframe(const BladeModel& model, const std::vector<double>& etas) {
  Wireframe wf;
  wf.closed = model.closed;
  std::vector<HermiteCubic> axis;
  if (!model.bend.empty()) {
    const auto m = static_cast<Eigen::Index>(model.bend.eta.size());
    Vector knots(m);
    for (Eigen::Index i = 0; i < m; ++i) knots(i) = model.bend.eta[static_cast<std::size_t>(i)];
    for (int c = 0; c < 3; ++c) {
      Vector y(m);
      for (Eigen::Index i = 0; i < m; ++i) y(i) = model.bend.points[static_cast<std::size_t>(i)](c);
      axis.push_back(detail::schedule_spline(knots, y));
    }
  }
  for (double e : etas) {
    const LandmarkShape sec = evaluate_blade(model, e);
    Section3 s;
    s.eta = e;
    s.x.resize(sec.n(), 3);
    if (axis.empty()) {
      s.x.leftCols(2) = sec.x();
      s.x.col(2).setConstant(e * model.span_length);
      wf.span_curve.emplace_back(0.0, 0.0, e * model.span_length);
    } else {
      const Eigen::Vector3d origin(axis[0](e), axis[1](e), axis[2](e));
      Eigen::Vector3d tangent(axis[0].derivative(e), axis[1].derivative(e), axis[2].derivative(e));
      if (!(tangent.norm() > 0.0)) throw DegeneracyError("bend curve has a zero tangent");
      const Eigen::Matrix3d q = detail::align_z(tangent.normalized());
      for (Eigen::Index i = 0; i < sec.n(); ++i) {
        s.x.row(i) = (origin + q * Eigen::Vector3d(sec.x()(i, 0), sec.x()(i, 1), 0.0)).transpose();
      }
      wf.span_curve.push_back(origin);
    }
    wf.sections.push_back(std::move(s));
  }
  return wf;
}

/// `count` sections equally spaced over the station span.
inline Wireframe emit_wireframe(const BladeModel& model, std::size_t count) {
  if (count < 2) throw ContractError("a wireframe needs at least two sections");
  const double lo = model.eta(0);
  const double hi = model.eta(model.eta.size() - 1);
  std::vector<double> etas(count);
  for (std::size_t i = 0; i < count; ++i) {
    etas[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return emit_wireframe(model, etas);
}

}  // namespace sst
