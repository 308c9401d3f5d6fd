#pragma once

// Landmark shapes and their Landmark-Affine (LA) standardization into a
// Grassmann representative times an affine factor.

#include "sst/error.hpp"
#include "sst/grassmann.hpp"
#include "sst/linalg.hpp"

#include <array>
#include <cmath>
#include <string>

namespace sst {

/// Ordered n x 2 matrix of planar landmarks.
///
/// Construction checks n >= 3 and that the centered landmarks have rank 2
/// (sigma_2 / sigma_1 > 1e-10).
class LandmarkShape {
 public:
  static constexpr double kRankTol = 1e-10;

  LandmarkShape() = default;

  explicit LandmarkShape(MatrixN2 x, bool closed = false) : x_(std::move(x)), closed_(closed) {
    if (x_.rows() < 3) {
      throw DegeneracyError("a landmark shape needs at least 3 points, got " +
                            std::to_string(x_.rows()));
    }
    if (!x_.allFinite()) throw InputError("landmark coordinates must be finite");
    const Vector2 mean = x_.colwise().mean();
    const MatrixN2 centered = x_.rowwise() - mean.transpose();
    const Vector2 s = thin_svd(centered).s;
    if (!(s(1) > kRankTol * s(0))) {
      throw DegeneracyError("landmarks are rank deficient after centering (collinear shape)");
    }
  }

  const MatrixN2& x() const noexcept { return x_; }
  Eigen::Index n() const noexcept { return x_.rows(); }
  bool closed() const noexcept { return closed_; }

  /// True when the first and last landmarks coincide exactly.
  bool repeats_endpoint() const { return x_.row(0) == x_.row(x_.rows() - 1); }

 private:
  MatrixN2 x_;
  bool closed_ = false;
};

/// Affine action X M + 1 b^T.
struct AffineFactor {
  Matrix2 m = Matrix2::Identity();
  Vector2 b = Vector2::Zero();

  AffineFactor() = default;
  AffineFactor(const Matrix2& m_in, const Vector2& b_in) : m(m_in), b(b_in) {
    if (!(std::abs(m.determinant()) > 1e-12)) {
      throw DegeneracyError("affine factor is singular");
    }
  }
};

enum class LaVariant { gl2, polar };

/// X = rep * M + 1 b^T with rep an orthonormal, column-centered matrix.
struct SeparableShape {
  GrassmannPoint grass;
  AffineFactor affine;
  LaVariant variant = LaVariant::gl2;
};

/// LA standardization from the thin SVD of the centered landmarks.
///
/// gl2: rep = V, M = Sigma U^T (a whitening transform).
/// polar: rep = V U^T, M = U Sigma U^T, which is SPD.
/// Here (X - 1 b^T)^T = U Sigma V^T.
inline SeparableShape la_standardize(const LandmarkShape& shape,
                                     LaVariant variant = LaVariant::gl2) {
  const Vector2 b = shape.x().colwise().mean();
  const MatrixN2 centered = shape.x().rowwise() - b.transpose();
  const ThinSvd svd = thin_svd(centered);  // centered = svd.u * S * svd.v^T
  if (!(svd.s(1) > LandmarkShape::kRankTol * svd.s(0))) {
    throw DegeneracyError("cannot standardize a rank-deficient shape");
  }
  SeparableShape out;
  out.variant = variant;
  if (variant == LaVariant::gl2) {
    out.grass = GrassmannPoint::from_orthonormal(svd.u);
    out.affine = AffineFactor(svd.s.asDiagonal() * svd.v.transpose(), b);
  } else {
    out.grass = GrassmannPoint::from_orthonormal(svd.u * svd.v.transpose());
    out.affine =
        AffineFactor(symmetrize(svd.v * svd.s.asDiagonal() * svd.v.transpose()), b);
  }
  return out;
}

/// rep * M + 1 b^T, without any validity checks on the result.
inline MatrixN2 apply_affine(const MatrixN2& rep, const Matrix2& m, const Vector2& b) {
  MatrixN2 x = rep * m;
  x.rowwise() += b.transpose();
  return x;
}

inline LandmarkShape reconstruct(const SeparableShape& sep, bool closed = false) {
  return LandmarkShape(apply_affine(sep.grass.rep(), sep.affine.m, sep.affine.b), closed);
}

/// l1 * diag(l2, l3) * [[cos l4, sin l4], [-sin l4, cos l4]].
inline Matrix2 l4_matrix(const std::array<double, 4>& l) {
  if (l[0] * l[1] * l[2] == 0.0) {
    throw DomainError("l4_matrix: scale parameters must be nonzero");
  }
  Matrix2 rot;
  rot << std::cos(l[3]), std::sin(l[3]), -std::sin(l[3]), std::cos(l[3]);
  return l[0] * Vector2(l[1], l[2]).asDiagonal() * rot;
}

/// pi(pi(X)) == pi(X): re-standardizing the representative stays on the
/// same Grassmann point.
inline bool idempotence_check(const LandmarkShape& shape, double tol = 1e-10) {
  const SeparableShape once = la_standardize(shape);
  const SeparableShape twice = la_standardize(LandmarkShape(once.grass.rep(), shape.closed()));
  return gr_distance(once.grass, twice.grass) <= tol;
}

/// Largest distance between consecutive landmarks.
inline double landmark_gauge(const MatrixN2& x) {
  double h = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.rows(); ++i) h = std::max(h, (x.row(i + 1) - x.row(i)).norm());
  return h;
}

/// Mean distance between consecutive landmarks.
inline double mean_segment(const MatrixN2& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.rows(); ++i) sum += (x.row(i + 1) - x.row(i)).norm();
  return sum / static_cast<double>(x.rows() - 1);
}

}  // namespace sst
