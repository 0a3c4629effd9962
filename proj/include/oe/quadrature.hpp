#pragma once
// Gauss-Legendre rules, plus the mapped rules used throughout: radial on
// (0, c) against dk, polar on [0, pi] against sin(theta) dtheta (nodes are
// Gauss-Legendre in cos(theta)), and uniform azimuth (periodic trapezoid,
// exact for bandlimited integrands).

#include "oe/common.hpp"

#include <cmath>

namespace oe {

enum class QuadKind { Radial, Polar, Sphere };

struct QuadratureRule {
  RealVec nodes;
  RealVec weights;
  QuadKind kind = QuadKind::Radial;
};

// n-point Gauss-Legendre nodes/weights on [-1, 1]. Newton iteration on the
// three-term recurrence; node pairs are filled symmetrically so the rule is
// bit-symmetric about zero.
inline void gauss_legendre(int n, RealVec& x, RealVec& w) {
  if (n < 1) throw InvalidArgumentError("gauss_legendre: n must be >= 1");
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x(i) = -z;
    x(n - 1 - i) = z;
    w(i) = 2.0 / ((1.0 - z * z) * pp * pp);
    w(n - 1 - i) = w(i);
  }
}

// Radial rule on (0, c), measure dk (any k^2 factor belongs to the
// integrand). Weights sum to c.
inline QuadratureRule radial_rule(double c, int n = 64) {
  if (!(c > 0.0)) throw InvalidArgumentError("radial_rule: c must be positive");
  RealVec x, w;
  gauss_legendre(n, x, w);
  QuadratureRule r;
  r.kind = QuadKind::Radial;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes(i) = 0.5 * c * (x(i) + 1.0);
    r.weights(i) = 0.5 * c * w(i);
  }
  return r;
}

// Polar rule on [0, pi] against sin(theta) dtheta: Gauss-Legendre in
// cos(theta). Weights sum to 2. Nodes ascend in theta.
inline QuadratureRule polar_rule(int n) {
  RealVec x, w;
  gauss_legendre(n, x, w);
  QuadratureRule r;
  r.kind = QuadKind::Polar;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes(i) = std::acos(x(n - 1 - i));
    r.weights(i) = w(n - 1 - i);
  }
  return r;
}

struct SphereRule {
  RealVec cos_theta;   // Gauss-Legendre nodes, one per polar ring
  RealVec sin_theta;
  RealVec polar_weights;
  int n_azimuth = 0;   // uniform azimuth nodes phi_q = 2 pi q / n_azimuth
  double azimuth_weight = 0.0;

  double phi(int q) const { return 2.0 * pi * q / n_azimuth; }
};

// Product rule on the unit sphere; total weight 4 pi. n_azimuth is forced
// even so the node set is closed under inversion.
inline SphereRule sphere_rule(int n_polar, int n_azimuth) {
  if (n_azimuth % 2 != 0) ++n_azimuth;
  RealVec x, w;
  gauss_legendre(n_polar, x, w);
  SphereRule r;
  r.cos_theta = x;
  r.sin_theta.resize(n_polar);
  for (int i = 0; i < n_polar; ++i) r.sin_theta(i) = std::sqrt(std::max(0.0, 1.0 - x(i) * x(i)));
  r.polar_weights = w;
  r.n_azimuth = n_azimuth;
  r.azimuth_weight = 2.0 * pi / n_azimuth;
  return r;
}

}  // namespace oe
