#pragma once

// Riemannian primitives on the Grassmannian G(n,2) with Stiefel
// representatives: exponential, logarithm, distance and parallel transport
// along geodesics. Tangent vectors are horizontal n x 2 matrices at the
// representative they were computed for.

#include "sst/error.hpp"
#include "sst/linalg.hpp"

#include <cmath>
#include <string>

namespace sst {

/// Stiefel representative of a point [X] of G(n,2).
class GrassmannPoint {
 public:
  static constexpr double kOrthoTol = 1e-10;

  GrassmannPoint() = default;

  /// Wraps a matrix that already has orthonormal columns.
  static GrassmannPoint from_orthonormal(MatrixN2 rep, double tol = kOrthoTol) {
    check_rows(rep.rows());
    const double err = (rep.transpose() * rep - Matrix2::Identity()).norm();
    if (!(err <= tol)) {
      throw ContractError("Grassmann representative columns are not orthonormal (error " +
                          std::to_string(err) + ")");
    }
    GrassmannPoint g;
    g.rep_ = std::move(rep);
    return g;
  }

  /// Orthonormal basis of the column span of any full-rank n x 2 matrix.
  static GrassmannPoint from_span(const MatrixN2& a) {
    check_rows(a.rows());
    const ThinSvd svd = thin_svd(a);
    if (!(svd.s(1) > 1e-10 * svd.s(0))) {
      throw DegeneracyError("matrix does not have rank 2");
    }
    GrassmannPoint g;
    g.rep_ = svd.u * svd.v.transpose();
    return g;
  }

  const MatrixN2& rep() const noexcept { return rep_; }
  Eigen::Index n() const noexcept { return rep_.rows(); }

 private:
  static void check_rows(Eigen::Index n) {
    if (n < 3) throw DegeneracyError("a Grassmann point needs at least 3 landmarks");
  }

  MatrixN2 rep_;
};

/// Horizontal tangent vector; the base point is carried by the caller.
struct GrassmannTangent {
  MatrixN2 delta;

  static GrassmannTangent zero(Eigen::Index n) { return {MatrixN2::Zero(n, 2)}; }
  double norm() const { return delta.norm(); }
};

enum class GrassmannMetric { frobenius, angle_sum };

inline double horizontality_error(const GrassmannPoint& base, const GrassmannTangent& v) {
  return (base.rep().transpose() * v.delta).norm();
}

namespace detail {

inline void require_horizontal(const GrassmannPoint& base, const GrassmannTangent& v,
                               const char* what) {
  if (v.delta.rows() != base.n()) {
    throw ContractError(std::string(what) + ": tangent has wrong number of rows");
  }
  const double err = horizontality_error(base, v);
  if (!(err <= 1e-10 * std::max(1.0, v.delta.norm()))) {
    throw ContractError(std::string(what) + ": tangent is not horizontal (|X^T D| = " +
                        std::to_string(err) + ")");
  }
}

}  // namespace detail

/// Exp_{[X]}(delta), re-orthonormalized by one polar step.
inline GrassmannPoint gr_exp(const GrassmannPoint& base, const GrassmannTangent& delta) {
  detail::require_horizontal(base, delta, "gr_exp");
  const ThinSvd svd = thin_svd(delta.delta);
  const Vector2 c = svd.s.array().cos();
  const Vector2 s = svd.s.array().sin();
  const MatrixN2 y = (base.rep() * svd.v * c.asDiagonal() + svd.u * s.asDiagonal()) *
                     svd.v.transpose();
  return GrassmannPoint::from_orthonormal(polar_project(y), 1e-8);
}

/// Point at parameter t on the geodesic t -> Exp_{[X]}(t delta).
inline GrassmannPoint gr_geodesic(const GrassmannPoint& base, const GrassmannTangent& delta,
                                  double t) {
  return gr_exp(base, GrassmannTangent{t * delta.delta});
}

/// Log_{[X]}([Y]). Throws NeighborhoodError when X^T Y is numerically
/// singular (a principal angle at pi/2, i.e. the cut locus).
inline GrassmannTangent gr_log(const GrassmannPoint& base, const GrassmannPoint& target) {
  if (base.n() != target.n()) throw ContractError("gr_log: landmark counts differ");
  const Matrix2 q = base.rep().transpose() * target.rep();
  if (!(condition2(q) <= 1e12)) {
    throw NeighborhoodError("gr_log: target is outside the normal neighborhood (X^T Y singular)");
  }
  const MatrixN2 yq = target.rep() * q.inverse();
  const MatrixN2 normal = yq - base.rep() * (base.rep().transpose() * yq);
  const ThinSvd svd = thin_svd(normal);
  const Vector2 a = svd.s.array().atan();
  MatrixN2 delta = svd.u * a.asDiagonal() * svd.v.transpose();
  // Remove the rounding-level vertical component.
  delta -= base.rep() * (base.rep().transpose() * delta);
  return {std::move(delta)};
}

/// Geodesic distance; frobenius = sqrt(sum theta_i^2), angle_sum = sum theta_i.
inline double gr_distance(const GrassmannPoint& a, const GrassmannPoint& b,
                          GrassmannMetric metric = GrassmannMetric::frobenius) {
  if (a.rep() == b.rep()) return 0.0;
  const Vector2 theta = principal_angles(a.rep(), b.rep());
  return metric == GrassmannMetric::frobenius ? theta.norm() : theta.sum();
}

/// Parallel transport of `payload` along t -> Exp_{[X]}(t gamma_dir). The
/// result is horizontal at gr_geodesic(base, gamma_dir, t).
inline GrassmannTangent gr_transport(const GrassmannPoint& base, const GrassmannTangent& gamma_dir,
                                     double t, const GrassmannTangent& payload) {
  detail::require_horizontal(base, gamma_dir, "gr_transport");
  detail::require_horizontal(base, payload, "gr_transport");
  const ThinSvd svd = thin_svd(gamma_dir.delta);
  const Vector2 ts = t * svd.s;
  const Vector2 c = ts.array().cos();
  const Vector2 s = ts.array().sin();
  const Matrix2 ut_payload = svd.u.transpose() * payload.delta;
  const MatrixN2 frame = -base.rep() * svd.v * s.asDiagonal() + svd.u * c.asDiagonal();
  MatrixN2 out = frame * ut_payload + payload.delta - svd.u * ut_payload;
  return {std::move(out)};
}

/// Endpoint form of parallel transport from [from] to [to]. The result is
/// expressed at the representative `to.rep()`, so a transport X -> Y -> X
/// returns the original matrix.
inline GrassmannTangent gr_transport_between(const GrassmannPoint& from, const GrassmannPoint& to,
                                             const GrassmannTangent& payload) {
  const GrassmannTangent dir = gr_log(from, to);
  const GrassmannTangent moved = gr_transport(from, dir, 1.0, payload);
  const GrassmannPoint arrived = gr_exp(from, dir);
  // arrived.rep() = to.rep() O for orthogonal O; horizontal lifts follow.
  const Matrix2 o_t = arrived.rep().transpose() * to.rep();
  MatrixN2 out = moved.delta * o_t;
  out -= to.rep() * (to.rep().transpose() * out);
  return {std::move(out)};
}

/// Frobenius inner product tr(A^T B) of two tangents at the same point.
inline double gr_inner(const GrassmannTangent& a, const GrassmannTangent& b) {
  return (a.delta.array() * b.delta.array()).sum();
}

}  // namespace sst
