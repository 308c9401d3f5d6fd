#pragma once

// One-dimensional interpolants over strictly increasing knots: cubic
// splines (natural, periodic, not-a-knot) and monotone PCHIP.

#include "sst/error.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <vector>

namespace sst {

namespace detail {

inline void require_increasing(const Eigen::VectorXd& x, const char* who) {
  if (x.size() < 2) throw DegeneracyError(std::string(who) + ": need at least two knots");
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    if (!(x(i + 1) > x(i))) {
      throw DegeneracyError(std::string(who) + ": knots must be strictly increasing (degenerate segment)");
    }
  }
}

/// Index k with x[k] <= t < x[k+1], clamped to the valid interval range.
inline Eigen::Index locate(const Eigen::VectorXd& x, double t) {
  const auto* begin = x.data();
  const auto* end = x.data() + x.size();
  Eigen::Index k = std::upper_bound(begin, end, t) - begin - 1;
  return std::clamp<Eigen::Index>(k, 0, x.size() - 2);
}

/// Thomas algorithm; sub/diag/sup have equal length, sub[0] and sup[n-1] unused.
inline Eigen::VectorXd solve_tridiagonal(Eigen::VectorXd sub, Eigen::VectorXd diag,
                                         Eigen::VectorXd sup, Eigen::VectorXd rhs) {
  const Eigen::Index n = diag.size();
  for (Eigen::Index i = 1; i < n; ++i) {
    const double w = sub(i) / diag(i - 1);
    diag(i) -= w * sup(i - 1);
    rhs(i) -= w * rhs(i - 1);
  }
  Eigen::VectorXd out(n);
  out(n - 1) = rhs(n - 1) / diag(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i) out(i) = (rhs(i) - sup(i) * out(i + 1)) / diag(i);
  return out;
}

}  // namespace detail

enum class SplineEnd { natural, periodic, not_a_knot };

/// Piecewise cubic in Hermite form: values and first derivatives at knots.
class HermiteCubic {
 public:
  HermiteCubic() = default;
  HermiteCubic(Eigen::VectorXd x, Eigen::VectorXd y, Eigen::VectorXd dy)
      : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {}

  double operator()(double t) const {
    const Eigen::Index k = detail::locate(x_, t);
    const double h = x_(k + 1) - x_(k);
    const double s = (t - x_(k)) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y_(k) + h * h10 * dy_(k) + h01 * y_(k + 1) + h * h11 * dy_(k + 1);
  }

  Eigen::VectorXd operator()(const Eigen::VectorXd& t) const {
    Eigen::VectorXd out(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) out(i) = (*this)(t(i));
    return out;
  }

  double derivative(double t) const {
    const Eigen::Index k = detail::locate(x_, t);
    const double h = x_(k + 1) - x_(k);
    const double s = (t - x_(k)) / h;
    const double s2 = s * s;
    const double d00 = (6 * s2 - 6 * s) / h;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h;
    const double d11 = 3 * s2 - 2 * s;
    return d00 * y_(k) + d10 * dy_(k) + d01 * y_(k + 1) + d11 * dy_(k + 1);
  }

  const Eigen::VectorXd& knots() const { return x_; }
  const Eigen::VectorXd& values() const { return y_; }
  const Eigen::VectorXd& slopes() const { return dy_; }

 private:
  Eigen::VectorXd x_, y_, dy_;
};

/// Interpolating C2 cubic spline.
///
/// Two knots give the straight line and three knots under not_a_knot give
/// the interpolating parabola. periodic requires y.front() == y.back().
inline HermiteCubic cubic_spline(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 SplineEnd end = SplineEnd::natural) {
  detail::require_increasing(x, "cubic_spline");
  const Eigen::Index n = x.size();
  if (y.size() != n) throw ContractError("cubic_spline: size mismatch");
  const Eigen::VectorXd h = x.tail(n - 1) - x.head(n - 1);
  const Eigen::VectorXd delta = (y.tail(n - 1) - y.head(n - 1)).cwiseQuotient(h);
  Eigen::VectorXd dy(n);

  if (n == 2) {
    dy.setConstant(delta(0));
    return {x, y, dy};
  }
  if (n == 3 && end == SplineEnd::not_a_knot) {
    // Parabola through three points.
    const double c = (delta(1) - delta(0)) / (x(2) - x(0));
    dy(0) = delta(0) - c * h(0);
    dy(1) = delta(0) + c * h(0);
    dy(2) = delta(1) + c * h(1);
    return {x, y, dy};
  }

  if (end == SplineEnd::periodic) {
    if (std::abs(y(0) - y(n - 1)) > 1e-12 * std::max(1.0, std::abs(y(0)))) {
      throw ContractError("periodic spline needs matching end values");
    }
    // Unknown slopes d_0..d_{m-1} with m = n-1 and d_m = d_0. Cyclic
    // tridiagonal system solved with Sherman-Morrison.
    const Eigen::Index m = n - 1;
    auto hh = [&](Eigen::Index i) { return h((i + m) % m); };
    auto dd = [&](Eigen::Index i) { return delta((i + m) % m); };
    Eigen::VectorXd sub(m), diag(m), sup(m), rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double hl = hh(i - 1), hr = hh(i);
      sub(i) = hr;
      sup(i) = hl;
      diag(i) = 2 * (hl + hr);
      rhs(i) = 3 * (hr * dd(i - 1) + hl * dd(i));
    }
    if (m == 2) {
      Eigen::Matrix2d a;
      a << diag(0), sub(0) + sup(0), sub(1) + sup(1), diag(1);
      const Eigen::Vector2d sol = a.partialPivLu().solve(Eigen::Vector2d(rhs(0), rhs(1)));
      dy << sol(0), sol(1), sol(0);
      return {x, y, dy};
    }
    const double alpha = sup(m - 1);  // couples row m-1 to column 0
    const double beta = sub(0);       // couples row 0 to column m-1
    const double gamma = -diag(0);
    Eigen::VectorXd diag2 = diag;
    diag2(0) -= gamma;
    diag2(m - 1) -= alpha * beta / gamma;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
    u(0) = gamma;
    u(m - 1) = alpha;
    // Row i: sub(i) d_{i-1} + diag(i) d_i + sup(i) d_{i+1}.
    const Eigen::VectorXd y1 = detail::solve_tridiagonal(sub, diag2, sup, rhs);
    const Eigen::VectorXd q = detail::solve_tridiagonal(sub, diag2, sup, u);
    const double vy = y1(0) + beta / gamma * y1(m - 1);
    const double vq = q(0) + beta / gamma * q(m - 1);
    const Eigen::VectorXd sol = y1 - (vy / (1.0 + vq)) * q;
    dy.head(m) = sol;
    dy(m) = sol(0);
    return {x, y, dy};
  }

  Eigen::VectorXd sub(n), diag(n), sup(n), rhs(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    sub(i) = h(i);
    diag(i) = 2 * (h(i - 1) + h(i));
    sup(i) = h(i - 1);
    rhs(i) = 3 * (h(i) * delta(i - 1) + h(i - 1) * delta(i));
  }
  if (end == SplineEnd::not_a_knot) {
    // Third derivative continuous at x_1 and x_{n-2}.
    diag(0) = h(1);
    sup(0) = h(0) + h(1);
    rhs(0) = ((h(0) + 2 * sup(0)) * h(1) * delta(0) + h(0) * h(0) * delta(1)) / sup(0);
    const double hl = h(n - 2), hp = h(n - 3);
    sub(n - 1) = hl + hp;
    diag(n - 1) = hp;
    rhs(n - 1) = (hl * hl * delta(n - 3) + (2 * sub(n - 1) + hl) * hp * delta(n - 2)) / sub(n - 1);
  } else {
    diag(0) = 2;
    sup(0) = 1;
    rhs(0) = 3 * delta(0);
    sub(n - 1) = 1;
    diag(n - 1) = 2;
    rhs(n - 1) = 3 * delta(n - 2);
  }
  sub(0) = 0;
  sup(n - 1) = 0;
  dy = detail::solve_tridiagonal(sub, diag, sup, rhs);
  return {x, y, dy};
}

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Carlson).
/// Interior slopes are weighted harmonic means; endpoint slopes use the
/// one-sided three-point formula with the usual shape-preserving limits.
inline HermiteCubic pchip(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  detail::require_increasing(x, "pchip");
  const Eigen::Index n = x.size();
  if (y.size() != n) throw ContractError("pchip: size mismatch");
  const Eigen::VectorXd h = x.tail(n - 1) - x.head(n - 1);
  const Eigen::VectorXd delta = (y.tail(n - 1) - y.head(n - 1)).cwiseQuotient(h);
  Eigen::VectorXd d(n);
  if (n == 2) {
    d.setConstant(delta(0));
    return {x, y, d};
  }
  for (Eigen::Index k = 1; k + 1 < n; ++k) {
    if (delta(k - 1) * delta(k) <= 0.0) {
      d(k) = 0.0;
    } else {
      const double w1 = 2 * h(k) + h(k - 1);
      const double w2 = h(k) + 2 * h(k - 1);
      d(k) = (w1 + w2) / (w1 / delta(k - 1) + w2 / delta(k));
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) {
      s = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3 * d0)) {
      s = 3 * d0;
    }
    return s;
  };
  d(0) = end_slope(h(0), h(1), delta(0), delta(1));
  d(n - 1) = end_slope(h(n - 2), h(n - 3), delta(n - 2), delta(n - 3));
  return {x, y, d};
}

}  // namespace sst
