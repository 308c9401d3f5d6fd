#pragma once

// Karcher means and principal geodesic analysis over G(n,2), S2++ and
// their product. The algorithms are written once against a small "space"
// interface (exp, log, vec, unvec) implemented by the three tag types.

#include "sst/error.hpp"
#include "sst/product.hpp"
#include "sst/shape.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace sst {

enum class ManifoldKind { grassmann, spd, product };

inline const char* to_string(ManifoldKind k) {
  switch (k) {
    case ManifoldKind::grassmann: return "grassmann";
    case ManifoldKind::spd: return "spd";
    case ManifoldKind::product: return "product";
  }
  return "?";
}

struct GrassmannSpace {
  using Point = GrassmannPoint;
  using Tangent = GrassmannTangent;
  static constexpr ManifoldKind kind = ManifoldKind::grassmann;

  static Point exp(const Point& p, const Tangent& v) { return gr_exp(p, v); }
  static Tangent log(const Point& p, const Point& q) { return gr_log(p, q); }
  static Tangent transport(const Point& p, const Point& q, const Tangent& v) {
    return gr_transport_between(p, q, v);
  }
  static double distance(const Point& p, const Point& q) { return gr_distance(p, q); }

  static Eigen::Index vec_dim(const Point& p) { return 2 * p.n(); }
  static Eigen::Index intrinsic_dim(const Point& p) { return 2 * (p.n() - 2); }

  static Vector vec(const Tangent& v) { return sst::vec(v.delta); }
  static Tangent unvec(const Vector& v, const Point& p) {
    MatrixN2 d = sst::unvec(v, p.n(), 2);
    d -= p.rep() * (p.rep().transpose() * d);
    return {std::move(d)};
  }
};

struct SpdSpace {
  using Point = SpdMatrix;
  using Tangent = SpdTangent;
  static constexpr ManifoldKind kind = ManifoldKind::spd;

  static Point exp(const Point& p, const Tangent& v) { return spd_exp(p, v); }
  static Tangent log(const Point& p, const Point& q) { return spd_log(p, q); }
  static Tangent transport(const Point& p, const Point& q, const Tangent& v) {
    return spd_transport(p, q, v);
  }
  static double distance(const Point& p, const Point& q) { return spd_distance(p, q); }

  static Eigen::Index vec_dim(const Point&) { return 3; }
  static Eigen::Index intrinsic_dim(const Point&) { return 3; }

  /// (s11, sqrt(2) s12, s22): Euclidean norm equals the Frobenius norm.
  static Vector vec(const Tangent& v) {
    return Eigen::Vector3d(v.s(0, 0), std::numbers::sqrt2 * v.s(0, 1), v.s(1, 1));
  }
  static Tangent unvec(const Vector& v, const Point&) {
    const double off = v(1) / std::numbers::sqrt2;
    Matrix2 s;
    s << v(0), off, off, v(2);
    return SpdTangent(s);
  }
};

struct ProductSpace {
  using Point = ProductPoint;
  using Tangent = ProductTangent;
  static constexpr ManifoldKind kind = ManifoldKind::product;

  static Point exp(const Point& p, const Tangent& v) { return product_exp(p, v); }
  static Tangent log(const Point& p, const Point& q) { return product_log(p, q); }
  static Tangent transport(const Point& p, const Point& q, const Tangent& v) {
    return product_transport(p, q, v);
  }
  static double distance(const Point& p, const Point& q) { return product_distance(p, q); }

  static Eigen::Index vec_dim(const Point& p) { return 2 * p.g.n() + 3; }
  static Eigen::Index intrinsic_dim(const Point& p) { return 2 * (p.g.n() - 2) + 3; }

  static Vector vec(const Tangent& v) {
    Vector out(v.g.delta.size() + 3);
    out << GrassmannSpace::vec(v.g), SpdSpace::vec(v.s);
    return out;
  }
  static Tangent unvec(const Vector& v, const Point& p) {
    const Eigen::Index m = 2 * p.g.n();
    return {GrassmannSpace::unvec(v.head(m), p.g), SpdSpace::unvec(v.tail(3), p.p)};
  }
};

template <class Space>
struct KarcherResult {
  typename Space::Point mean;
  int iterations = 0;
  double gradient_norm = 0.0;
};

/// Fixed-point iteration p <- Exp_p((1/N) sum_k Log_p(p_k)) started at the
/// first point. Stops at the first iterate whose mean tangent has Frobenius
/// norm below epsilon and returns that iterate.
template <class Space>
KarcherResult<Space> karcher_mean(const std::vector<typename Space::Point>& points,
                                  double epsilon = 1e-8, int max_iter = 200) {
  if (points.empty()) throw ContractError("karcher_mean: no points");
  KarcherResult<Space> out{points.front(), 0, 0.0};
  const auto inv_n = 1.0 / static_cast<double>(points.size());
  for (int iter = 0;; ++iter) {
    Vector sum = Vector::Zero(Space::vec_dim(out.mean));
    for (const auto& p : points) sum += Space::vec(Space::log(out.mean, p));
    const Vector v = inv_n * sum;
    out.gradient_norm = v.norm();
    out.iterations = iter;
    if (out.gradient_norm < epsilon) return out;
    if (iter >= max_iter) {
      throw ConvergenceError("karcher_mean did not converge in " + std::to_string(max_iter) +
                                 " iterations (gradient norm " +
                                 std::to_string(out.gradient_norm) + ")",
                             out.gradient_norm);
    }
    out.mean = Space::exp(out.mean, Space::unvec(v, out.mean));
  }
}

/// Principal geodesic analysis model.
///
/// `basis` holds r orthonormal vectorized tangent directions at `mean`.
/// `eigenvalues` are the squared singular values of the lifted data matrix
/// (1/sqrt(N-1)) [vec Log_mean(p_k)], i.e. variances along each direction.
/// `coords` is r x N with column k = basis^T vec Log_mean(p_k), the normal
/// coordinates of sample k, so that generate(coords.col(k)) reproduces
/// sample k when r spans the data.
template <class Space>
struct PgaModel {
  typename Space::Point mean;
  Matrix basis;
  Vector eigenvalues;
  Matrix coords;
  Eigen::Index n = 0;
  Eigen::Index r = 0;
  Eigen::Index samples = 0;
  double epsilon = 1e-8;
  int iterations = 0;
  double gradient_norm = 0.0;
  double radius = 0.0;  // largest |Log_mean(p_k)| over the training data
};

template <class Space>
Eigen::Index landmark_count(const typename Space::Point& p) {
  if constexpr (Space::kind == ManifoldKind::grassmann) {
    return p.n();
  } else if constexpr (Space::kind == ManifoldKind::product) {
    return p.g.n();
  } else {
    return 0;
  }
}

template <class Space>
PgaModel<Space> pga_fit(const std::vector<typename Space::Point>& points, double epsilon,
                        Eigen::Index r, int max_iter = 200) {
  const auto n_samples = static_cast<Eigen::Index>(points.size());
  if (n_samples < 2) throw ContractError("pga_fit needs at least two samples");
  const Eigen::Index max_r = std::min(n_samples - 1, Space::intrinsic_dim(points.front()));
  if (r < 1 || r > max_r) {
    throw ContractError("pga_fit: rank " + std::to_string(r) + " outside [1, " +
                        std::to_string(max_r) + "]");
  }
  const KarcherResult<Space> km = karcher_mean<Space>(points, epsilon, max_iter);

  PgaModel<Space> model;
  model.mean = km.mean;
  model.n = landmark_count<Space>(km.mean);
  model.r = r;
  model.samples = n_samples;
  model.epsilon = epsilon;
  model.iterations = km.iterations;
  model.gradient_norm = km.gradient_norm;

  Matrix lifted(Space::vec_dim(km.mean), n_samples);
  for (Eigen::Index k = 0; k < n_samples; ++k) {
    lifted.col(k) = Space::vec(Space::log(km.mean, points[static_cast<std::size_t>(k)]));
  }
  const double max_norm = lifted.colwise().norm().maxCoeff();
  if (!(max_norm > 1e-14)) throw DegeneracyError("pga_fit: data has zero variance");
  model.radius = max_norm;

  const double scale = 1.0 / std::sqrt(static_cast<double>(n_samples - 1));
  Eigen::BDCSVD<Matrix> svd(scale * lifted, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix u = svd.matrixU().leftCols(r);
  Matrix v = svd.matrixV().leftCols(r);
  detail::fix_signs(u, v);
  model.basis = u;
  model.eigenvalues = svd.singularValues().head(r).array().square();
  model.coords = u.transpose() * lifted;
  return model;
}

/// Normal coordinates basis^T vec(Log_mean(point)).
template <class Space>
Vector embed(const PgaModel<Space>& model, const typename Space::Point& point) {
  return model.basis.transpose() * Space::vec(Space::log(model.mean, point));
}

/// Tangent vec^{-1}(basis * coeffs) at the mean.
template <class Space>
typename Space::Tangent pga_tangent(const PgaModel<Space>& model, const Vector& coeffs) {
  if (coeffs.size() != model.r) throw ContractError("coefficient vector has wrong length");
  return Space::unvec(model.basis * coeffs, model.mean);
}

/// Exp_mean(vec^{-1}(basis * coeffs)), a point on the learned submanifold.
template <class Space>
typename Space::Point generate(const PgaModel<Space>& model, const Vector& coeffs) {
  return Space::exp(model.mean, pga_tangent(model, coeffs));
}

enum class MeanScaleKind { extrinsic_gl2, intrinsic_spd };

struct MeanScale {
  Matrix2 m_bar = Matrix2::Identity();
  MeanScaleKind kind = MeanScaleKind::extrinsic_gl2;
};

/// Extrinsic: entrywise average of the M factors. Intrinsic: Karcher mean
/// over S2++ (every factor must be SPD).
inline MeanScale mean_scale(const std::vector<AffineFactor>& factors, MeanScaleKind kind,
                            double epsilon = 1e-12, int max_iter = 200) {
  if (factors.empty()) throw ContractError("mean_scale: no factors");
  MeanScale out;
  out.kind = kind;
  if (kind == MeanScaleKind::extrinsic_gl2) {
    Matrix2 sum = Matrix2::Zero();
    double det_scale = 0.0;
    for (const auto& f : factors) {
      sum += f.m;
      det_scale += std::abs(f.m.determinant());
    }
    out.m_bar = sum / static_cast<double>(factors.size());
    det_scale /= static_cast<double>(factors.size());
    if (!(std::abs(out.m_bar.determinant()) > 1e-12 * det_scale)) {
      throw DegeneracyError("extrinsic mean scale is singular");
    }
    return out;
  }
  std::vector<SpdMatrix> spds;
  spds.reserve(factors.size());
  for (const auto& f : factors) spds.emplace_back(f.m);
  out.m_bar = karcher_mean<SpdSpace>(spds, epsilon, max_iter).mean.matrix();
  return out;
}

/// Bounding box and origin-centered enclosing ball of normal coordinates.
struct CoordinateDomain {
  Vector lo;
  Vector hi;
  double radius = 0.0;

  bool contains(const Vector& t, double slack = 0.0) const {
    return ((t - lo).array() >= -slack).all() && ((hi - t).array() >= -slack).all();
  }
};

inline CoordinateDomain sample_domain(const Matrix& coords) {
  if (coords.cols() < 1) throw ContractError("sample_domain: no coordinates");
  CoordinateDomain d;
  d.lo = coords.rowwise().minCoeff();
  d.hi = coords.rowwise().maxCoeff();
  d.radius = coords.colwise().norm().maxCoeff();
  return d;
}

}  // namespace sst
