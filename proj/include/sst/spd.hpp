#pragma once

// Affine-invariant geometry of 2x2 symmetric positive definite matrices.
// All matrix functions go through the closed-form 2x2 eigendecomposition.

#include "sst/error.hpp"
#include "sst/linalg.hpp"

#include <cmath>
#include <string>

namespace sst {

class SpdMatrix {
 public:
  SpdMatrix() : p_(Matrix2::Identity()) {}

  /// Validates symmetry (relative 1e-12, then exactly symmetrized) and
  /// positivity of both eigenvalues.
  explicit SpdMatrix(const Matrix2& p) {
    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    if (!p.allFinite() || std::abs(p(0, 1) - p(1, 0)) > 1e-12 * scale) {
      throw DomainError("SPD matrix must be finite and symmetric");
    }
    p_ = symmetrize(p);
    const SymEig2 e = sym_eig2(p_);
    if (!(e.values(1) > 0.0)) {
      throw DomainError("matrix is not positive definite (smallest eigenvalue " +
                        std::to_string(e.values(1)) + ")");
    }
  }

  const Matrix2& matrix() const noexcept { return p_; }

 private:
  Matrix2 p_;
};

/// Element of T_P S2++ = Sym(2).
struct SpdTangent {
  Matrix2 s = Matrix2::Zero();

  SpdTangent() = default;
  explicit SpdTangent(const Matrix2& m) : s(symmetrize(m)) {}

  double norm() const { return s.norm(); }
};

/// Exp_P(S) = P^{1/2} exp(P^{-1/2} S P^{-1/2}) P^{1/2}.
inline SpdMatrix spd_exp(const SpdMatrix& p, const SpdTangent& s) {
  const Matrix2 root = sym_sqrt(p.matrix());
  const Matrix2 inv_root = sym_inv_sqrt(p.matrix());
  const Matrix2 inner = symmetrize(inv_root * s.s * inv_root);
  return SpdMatrix(symmetrize(root * sym_exp(inner) * root));
}

/// Log_P(D) = P^{1/2} log(P^{-1/2} D P^{-1/2}) P^{1/2}.
inline SpdTangent spd_log(const SpdMatrix& p, const SpdMatrix& d) {
  const Matrix2 root = sym_sqrt(p.matrix());
  const Matrix2 inv_root = sym_inv_sqrt(p.matrix());
  const Matrix2 inner = symmetrize(inv_root * d.matrix() * inv_root);
  return SpdTangent(root * sym_log(inner) * root);
}

/// Affine-invariant distance ||log(P^{-1/2} D P^{-1/2})||_F.
inline double spd_distance(const SpdMatrix& p, const SpdMatrix& d) {
  const Matrix2 inv_root = sym_inv_sqrt(p.matrix());
  const SymEig2 e = sym_eig2(symmetrize(inv_root * d.matrix() * inv_root));
  return std::hypot(std::log(e.values(0)), std::log(e.values(1)));
}

/// Parallel transport E S E^T with E = (D P^{-1})^{1/2}, computed as
/// P^{1/2} (P^{-1/2} D P^{-1/2})^{1/2} P^{-1/2}.
inline SpdTangent spd_transport(const SpdMatrix& p, const SpdMatrix& d, const SpdTangent& s) {
  const Matrix2 root = sym_sqrt(p.matrix());
  const Matrix2 inv_root = sym_inv_sqrt(p.matrix());
  const Matrix2 mid = sym_sqrt(symmetrize(inv_root * d.matrix() * inv_root));
  const Matrix2 e = root * mid * inv_root;
  return SpdTangent(e * s.s * e.transpose());
}

/// Affine-invariant inner product g_P(A, B) = tr(P^{-1} A P^{-1} B).
inline double spd_inner(const SpdMatrix& p, const SpdTangent& a, const SpdTangent& b) {
  const Matrix2 inv = p.matrix().inverse();
  return (inv * a.s * inv * b.s).trace();
}

}  // namespace sst
