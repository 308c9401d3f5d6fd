#pragma once

// Polyline self-intersection guard built on an exact orientation predicate.

#include "sst/linalg.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace sst {

namespace detail {

// Error-free transformations (Knuth two-sum, fma two-product) and
// expansion growth in the style of Shewchuk's robust predicates.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  e = (a - av) + (b - bv);
}

inline void two_diff(double a, double b, double& d, double& e) {
  d = a - b;
  const double bv = a - d;
  const double av = d + bv;
  e = (a - av) + (bv - b);
}

inline void two_product(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

/// Adds a scalar to a nonoverlapping expansion (increasing magnitude).
inline void grow_expansion(std::vector<double>& expansion, double b) {
  double q = b;
  for (double& component : expansion) {
    double sum, err;
    two_sum(q, component, sum, err);
    component = err;
    q = sum;
  }
  expansion.push_back(q);
}

inline int expansion_sign(const std::vector<double>& expansion) {
  for (auto it = expansion.rbegin(); it != expansion.rend(); ++it) {
    if (*it > 0.0) return 1;
    if (*it < 0.0) return -1;
  }
  return 0;
}

inline int orient2d_exact(const Vector2& a, const Vector2& b, const Vector2& c) {
  double acx, acx_e, bcy, bcy_e, acy, acy_e, bcx, bcx_e;
  two_diff(a.x(), c.x(), acx, acx_e);
  two_diff(b.y(), c.y(), bcy, bcy_e);
  two_diff(a.y(), c.y(), acy, acy_e);
  two_diff(b.x(), c.x(), bcx, bcx_e);
  const double left[2] = {acx, acx_e};
  const double right_l[2] = {bcy, bcy_e};
  const double up[2] = {acy, acy_e};
  const double right_u[2] = {bcx, bcx_e};
  std::vector<double> expansion;
  expansion.reserve(24);
  for (double l : left) {
    for (double r : right_l) {
      double p, e;
      two_product(l, r, p, e);
      grow_expansion(expansion, e);
      grow_expansion(expansion, p);
    }
  }
  for (double l : up) {
    for (double r : right_u) {
      double p, e;
      two_product(l, r, p, e);
      grow_expansion(expansion, -e);
      grow_expansion(expansion, -p);
    }
  }
  return expansion_sign(expansion);
}

}  // namespace detail

/// Sign of det[b - a, c - a]: +1 counter-clockwise, -1 clockwise, 0 collinear.
/// Exact for all finite double inputs; a floating-point filter settles the
/// common case.
inline int orient2d(const Vector2& a, const Vector2& b, const Vector2& c) {
  const double det_left = (a.x() - c.x()) * (b.y() - c.y());
  const double det_right = (a.y() - c.y()) * (b.x() - c.x());
  const double det = det_left - det_right;
  constexpr double eps = std::numeric_limits<double>::epsilon() * 0.5;
  const double bound = (3.0 + 16.0 * eps) * eps * (std::abs(det_left) + std::abs(det_right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::orient2d_exact(a, b, c);
}

namespace detail {

inline bool on_segment(const Vector2& p, const Vector2& q, const Vector2& r) {
  // q collinear with p-r: inside the bounding box means on the segment.
  return std::min(p.x(), r.x()) <= q.x() && q.x() <= std::max(p.x(), r.x()) &&
         std::min(p.y(), r.y()) <= q.y() && q.y() <= std::max(p.y(), r.y());
}

}  // namespace detail

/// Closed-segment intersection; touching and collinear overlap count.
inline bool segments_intersect(const Vector2& p1, const Vector2& p2, const Vector2& q1,
                               const Vector2& q2) {
  if (std::max(p1.x(), p2.x()) < std::min(q1.x(), q2.x()) ||
      std::max(q1.x(), q2.x()) < std::min(p1.x(), p2.x()) ||
      std::max(p1.y(), p2.y()) < std::min(q1.y(), q2.y()) ||
      std::max(q1.y(), q2.y()) < std::min(p1.y(), p2.y())) {
    return false;
  }
  const int o1 = orient2d(p1, p2, q1);
  const int o2 = orient2d(p1, p2, q2);
  const int o3 = orient2d(q1, q2, p1);
  const int o4 = orient2d(q1, q2, p2);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && detail::on_segment(p1, q1, p2)) return true;
  if (o2 == 0 && detail::on_segment(p1, q2, p2)) return true;
  if (o3 == 0 && detail::on_segment(q1, p1, q2)) return true;
  if (o4 == 0 && detail::on_segment(q1, p2, q2)) return true;
  return false;
}

/// Landmarks p and q agree to within rounding relative to the extent of x.
template <class Derived>
bool nearly_equal_rows(const Eigen::MatrixBase<Derived>& x, const Eigen::VectorXd& p,
                       const Eigen::VectorXd& q) {
  const double tol = 64.0 * std::numeric_limits<double>::epsilon() * x.cwiseAbs().maxCoeff();
  return (p - q).template lpNorm<Eigen::Infinity>() <= tol;
}

/// True iff two non-adjacent edges of the polyline intersect. Consecutive
/// duplicate landmarks are merged first; when `closed` the edge from the
/// last landmark back to the first is included (or the repeated endpoint
/// is used as the closing vertex). A last landmark within rounding of the
/// first counts as a repeat, since maps on the Grassmannian do not keep
/// duplicated rows bit-identical.
inline bool self_intersects(const MatrixN2& x, bool closed) {
  std::vector<Vector2> pts;
  pts.reserve(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vector2 p = x.row(i).transpose();
    if (pts.empty() || pts.back() != p) pts.push_back(p);
  }
  if (closed && pts.size() > 1 && nearly_equal_rows(x, pts.front(), pts.back())) pts.pop_back();
  const std::size_t m = pts.size();
  if (m < 3) return false;
  const std::size_t edges = closed ? m : m - 1;
  auto a = [&](std::size_t e) -> const Vector2& { return pts[e]; };
  auto b = [&](std::size_t e) -> const Vector2& { return pts[(e + 1) % m]; };
  for (std::size_t i = 0; i < edges; ++i) {
    for (std::size_t j = i + 2; j < edges; ++j) {
      if (closed && i == 0 && j == edges - 1) continue;  // share the closing vertex
      if (segments_intersect(a(i), b(i), a(j), b(j))) return true;
    }
  }
  return false;
}

}  // namespace sst
