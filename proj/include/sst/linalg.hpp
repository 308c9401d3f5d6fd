#pragma once

// Small dense kernels used throughout: closed-form 2x2 symmetric spectral
// calculus, a thin SVD for n x 2 matrices with a deterministic sign
// convention, polar projection and principal angles.

#include <Eigen/Core>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace sst {

using Matrix2 = Eigen::Matrix2d;
using Vector2 = Eigen::Vector2d;
using MatrixN2 = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigen-decomposition of a symmetric 2x2 matrix, eigenvalues descending.
struct SymEig2 {
  Vector2 values;
  Matrix2 vectors;  // columns
};

inline SymEig2 sym_eig2(const Matrix2& a) {
  const double p = 0.5 * (a(0, 1) + a(1, 0));
  SymEig2 out;
  if (p == 0.0) {
    // Already diagonal: theta is exactly 0 or pi/2.
    if (a(0, 0) >= a(1, 1)) {
      out.values << a(0, 0), a(1, 1);
      out.vectors.setIdentity();
    } else {
      out.values << a(1, 1), a(0, 0);
      out.vectors << 0, -1, 1, 0;
    }
    return out;
  }
  const double mean = 0.5 * (a(0, 0) + a(1, 1));
  const double half_diff = 0.5 * (a(0, 0) - a(1, 1));
  const double radius = std::hypot(half_diff, p);
  const double theta = 0.5 * std::atan2(p, half_diff);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  out.values << mean + radius, mean - radius;
  out.vectors << c, -s, s, c;
  return out;
}

/// Applies a scalar function to the spectrum of a symmetric 2x2 matrix.
template <class F>
Matrix2 sym_apply(const Matrix2& a, F&& f) {
  const SymEig2 e = sym_eig2(a);
  const Vector2 fv(f(e.values(0)), f(e.values(1)));
  Matrix2 out = e.vectors * fv.asDiagonal() * e.vectors.transpose();
  const double off = 0.5 * (out(0, 1) + out(1, 0));
  out(0, 1) = off;
  out(1, 0) = off;
  return out;
}

inline Matrix2 sym_sqrt(const Matrix2& a) {
  return sym_apply(a, [](double x) { return std::sqrt(x); });
}
inline Matrix2 sym_inv_sqrt(const Matrix2& a) {
  return sym_apply(a, [](double x) { return 1.0 / std::sqrt(x); });
}
inline Matrix2 sym_exp(const Matrix2& a) {
  return sym_apply(a, [](double x) { return std::exp(x); });
}
inline Matrix2 sym_log(const Matrix2& a) {
  return sym_apply(a, [](double x) { return std::log(x); });
}

inline Matrix2 symmetrize(const Matrix2& a) { return 0.5 * (a + a.transpose()); }

/// Thin SVD A = U diag(s) V^T of an n x 2 matrix.
///
/// Singular values are descending. Each column of U is flipped so that its
/// first component of non-negligible magnitude is positive, and V follows,
/// which makes the factors reproducible across runs and platforms.
struct ThinSvd {
  MatrixN2 u;
  Vector2 s;
  Matrix2 v;
};

namespace detail {

template <class MatU, class MatV>
void fix_signs(MatU& u, MatV& v) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const double scale = u.col(j).cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      if (std::abs(u(i, j)) > 1e-10 * scale) {
        if (u(i, j) < 0.0) {
          u.col(j) = -u.col(j);
          v.col(j) = -v.col(j);
        }
        break;
      }
    }
  }
}

}  // namespace detail

inline ThinSvd thin_svd(const MatrixN2& a) {
  const Eigen::Index n = a.rows();
  Eigen::HouseholderQR<MatrixN2> qr(a);
  const Matrix2 r = qr.matrixQR().topRows<2>().triangularView<Eigen::Upper>();
  MatrixN2 q = qr.householderQ() * MatrixN2::Identity(n, 2);
  Eigen::JacobiSVD<Matrix2> small(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ThinSvd out;
  out.u = q * small.matrixU();
  out.s = small.singularValues();
  out.v = small.matrixV();
  detail::fix_signs(out.u, out.v);
  return out;
}

/// Full SVD of a 2x2 matrix with the same sign convention.
struct Svd2 {
  Matrix2 u;
  Vector2 s;
  Matrix2 v;
};

inline Svd2 svd2(const Matrix2& a) {
  Eigen::JacobiSVD<Matrix2> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd2 out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  detail::fix_signs(out.u, out.v);
  return out;
}

/// Nearest matrix with orthonormal columns, Y (Y^T Y)^{-1/2}.
inline MatrixN2 polar_project(const MatrixN2& y) {
  const Matrix2 gram = symmetrize(y.transpose() * y);
  return y * sym_inv_sqrt(gram);
}

/// Principal angles between the column spans of two orthonormal n x 2
/// matrices, ascending.
///
/// Cosines come from the singular values of a^T b and sines from those of
/// the residual b - a a^T b; small angles are read from the sines so that
/// nearly identical subspaces resolve well below sqrt(machine epsilon).
inline Vector2 principal_angles(const MatrixN2& a, const MatrixN2& b) {
  const Matrix2 cross = a.transpose() * b;
  Eigen::JacobiSVD<Matrix2> cs(cross);
  Vector2 cosines = cs.singularValues();  // descending
  const MatrixN2 residual = b - a * cross;
  Vector2 sines = thin_svd(residual).s;  // descending
  std::swap(sines(0), sines(1));         // ascending, paired with cosines
  Vector2 angles;
  for (int i = 0; i < 2; ++i) {
    const double c = std::clamp(cosines(i), 0.0, 1.0);
    const double s = std::clamp(sines(i), 0.0, 1.0);
    angles(i) = (c * c >= 0.5) ? std::asin(s) : std::acos(c);
  }
  if (angles(0) > angles(1)) std::swap(angles(0), angles(1));
  return angles;
}

/// 2x2 condition number in the spectral norm; infinity when singular.
inline double condition2(const Matrix2& a) {
  Eigen::JacobiSVD<Matrix2> svd(a);
  const Vector2 s = svd.singularValues();
  if (s(1) == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(1);
}

/// vec(): stacks the columns of a matrix.
inline Vector vec(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

}  // namespace sst
