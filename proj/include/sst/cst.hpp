#pragma once

// Class-shape transformation (CST) airfoils with nine Bernstein
// coefficients per surface, class exponents (0.5, 1.0) and a sharp
// trailing edge.

#include "sst/intersect.hpp"
#include "sst/preprocess.hpp"
#include "sst/random.hpp"
#include "sst/shape.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace sst {

using CstCoefficients = std::array<double, 9>;

struct CstAirfoil {
  CstCoefficients upper{};
  CstCoefficients lower{};
};

/// Surface ordinate C(x) * S(x) for x in [0, 1], with C(x) = sqrt(x) (1 - x).
inline double cst_surface(const CstCoefficients& a, double x) {
  constexpr int order = 8;
  constexpr std::array<double, 9> binom = {1, 8, 28, 56, 70, 56, 28, 8, 1};
  double shape = 0.0;
  for (int i = 0; i <= order; ++i) {
    shape += a[i] * binom[i] * std::pow(x, i) * std::pow(1.0 - x, order - i);
  }
  return std::sqrt(x) * (1.0 - x) * shape;
}

/// Chordwise stations for a single closed traversal parameter u in [0, 1]:
/// u = 0 and u = 1 are the trailing edge, u = 1/2 the leading edge.
/// cosine: x = (1 + cos(2 pi u)) / 2, which clusters landmarks at both
/// edges; uniform: x = |1 - 2u|.
inline double cst_chord_station(double u, Sampling sampling) {
  if (sampling == Sampling::cosine) return 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * u));
  return std::abs(1.0 - 2.0 * u);
}

/// Landmarks ordered trailing edge -> upper surface -> leading edge ->
/// lower surface -> trailing edge. Upper ordinates are +C S_upper and lower
/// ordinates -C S_lower, so nonnegative coefficients give a valid airfoil
/// and upper == lower gives a section symmetric about the chord line.
inline LandmarkShape cst_airfoil(const CstAirfoil& coeffs, Eigen::Index n_c,
                                 Sampling sampling = Sampling::cosine) {
  if (n_c < 3) throw DegeneracyError("a CST airfoil needs at least 3 landmarks");
  for (int i = 0; i < 9; ++i) {
    if (!std::isfinite(coeffs.upper[i]) || !std::isfinite(coeffs.lower[i])) {
      throw InputError("CST coefficients must be finite");
    }
  }
  MatrixN2 x(n_c, 2);
  for (Eigen::Index i = 0; i < n_c; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n_c - 1);
    const double xc = cst_chord_station(u, sampling);
    const bool upper = 2 * i <= n_c - 1;
    x(i, 0) = xc;
    x(i, 1) = upper ? cst_surface(coeffs.upper, xc) : -cst_surface(coeffs.lower, xc);
  }
  x(0, 0) = 1.0;
  x(n_c - 1, 0) = 1.0;
  return LandmarkShape(std::move(x), true);
}

/// Coefficients drawn independently and uniformly on [lo, hi].
inline CstAirfoil random_cst(Rng& rng, double lo = 0.0, double hi = 0.45) {
  CstAirfoil a;
  for (double& c : a.upper) c = rng.uniform(lo, hi);
  for (double& c : a.lower) c = rng.uniform(lo, hi);
  return a;
}

/// Each coefficient scaled by an independent factor in [1 - frac, 1 + frac],
/// then clamped to [lo, hi].
inline CstAirfoil perturb_cst(const CstAirfoil& nominal, double frac, Rng& rng,
                              double lo = 0.0, double hi = 0.45) {
  if (!(frac >= 0.0)) throw DomainError("perturbation fraction must be nonnegative");
  CstAirfoil a = nominal;
  auto bump = [&](double& c) {
    const double f = frac == 0.0 ? 1.0 : 1.0 + rng.uniform(-frac, frac);
    c = std::clamp(c * f, lo, hi);
  };
  for (double& c : a.upper) bump(c);
  for (double& c : a.lower) bump(c);
  return a;
}

struct CstEnsemble {
  std::vector<CstAirfoil> nominals;
  std::vector<CstAirfoil> coefficients;
  std::vector<int> labels;  // index of the nominal each shape perturbs
  std::vector<LandmarkShape> shapes;
  int resampled = 0;
};

struct EnsembleOptions {
  int nominal_count = 16;
  int per_nominal = 10;
  double frac = 0.2;
  double nominal_lo = 0.1;
  double nominal_hi = 0.4;
  Eigen::Index n_c = 201;
  Sampling sampling = Sampling::cosine;
  int max_attempts = 100;
};

/// Labeled ensemble of perturbations around random nominal airfoils. Draws
/// that fail the self-intersection guard are redrawn; shapes are ordered
/// nominal-major.
inline CstEnsemble synthetic_ensemble(Rng& rng, const EnsembleOptions& opts = {}) {
  if (opts.nominal_count < 1 || opts.per_nominal < 1) {
    throw InputError("ensemble needs at least one nominal and one shape per nominal");
  }
  CstEnsemble out;
  auto valid = [&](const CstAirfoil& a, LandmarkShape& shape) {
    try {
      shape = cst_airfoil(a, opts.n_c, opts.sampling);
    } catch (const DegeneracyError&) {
      return false;
    }
    return !self_intersects(shape);
  };
  for (int k = 0; k < opts.nominal_count; ++k) {
    LandmarkShape shape;
    CstAirfoil nominal;
    int attempts = 0;
    do {
      if (++attempts > opts.max_attempts) throw DegeneracyError("no valid nominal airfoil drawn");
      nominal = random_cst(rng, opts.nominal_lo, opts.nominal_hi);
    } while (!valid(nominal, shape));
    out.resampled += attempts - 1;
    out.nominals.push_back(nominal);
  }
  for (int k = 0; k < opts.nominal_count; ++k) {
    for (int j = 0; j < opts.per_nominal; ++j) {
      LandmarkShape shape;
      CstAirfoil a;
      int attempts = 0;
      do {
        if (++attempts > opts.max_attempts) throw DegeneracyError("no valid perturbation drawn");
        a = perturb_cst(out.nominals[static_cast<std::size_t>(k)], opts.frac, rng);
      } while (!valid(a, shape));
      out.resampled += attempts - 1;
      out.coefficients.push_back(a);
      out.labels.push_back(k);
      out.shapes.push_back(std::move(shape));
    }
  }
  return out;
}

}  // namespace sst
