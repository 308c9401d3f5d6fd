#pragma once

// G(n,2) x S2++ with the sum metric; every map acts componentwise.

#include "sst/grassmann.hpp"
#include "sst/spd.hpp"

#include <cmath>

namespace sst {

struct ProductPoint {
  GrassmannPoint g;
  SpdMatrix p;
};

struct ProductTangent {
  GrassmannTangent g;
  SpdTangent s;

  double norm() const { return std::hypot(g.norm(), s.norm()); }
};

inline ProductPoint product_exp(const ProductPoint& x, const ProductTangent& v) {
  return {gr_exp(x.g, v.g), spd_exp(x.p, v.s)};
}

inline ProductTangent product_log(const ProductPoint& x, const ProductPoint& y) {
  return {gr_log(x.g, y.g), spd_log(x.p, y.p)};
}

/// Transport from x to y along the connecting product geodesic, expressed
/// at y's Grassmann representative.
inline ProductTangent product_transport(const ProductPoint& x, const ProductPoint& y,
                                        const ProductTangent& v) {
  return {gr_transport_between(x.g, y.g, v.g), spd_transport(x.p, y.p, v.s)};
}

inline double product_distance(const ProductPoint& x, const ProductPoint& y,
                               GrassmannMetric metric = GrassmannMetric::frobenius) {
  return std::hypot(gr_distance(x.g, y.g, metric), spd_distance(x.p, y.p));
}

}  // namespace sst
