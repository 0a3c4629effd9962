#pragma once
// Spherical-Bessel radial basis and real spherical harmonics.
//
// The radial functions are scaled zeros-of-j_l modes on the band (0, c):
//   j_ls(k) = n_ls * j_l(R_{l,s} k / c),
// with R_{l,s} the s-th positive zero of j_l and n_ls chosen so that
// int_0^c j_ls(k)^2 k^2 dk = 1 (closed form: the unnormalized integral is
// c^3 j_{l+1}(R_{l,s})^2 / 2). The per-degree truncation S_l keeps the modes
// whose next zero still fits the support: R_{l,s+1} <= 2 pi c R, boundary
// inclusive; L is the last degree with S_l >= 1.
//
// Real spherical harmonics are orthonormal, with no Condon-Shortley sign:
//   m = 0:  Y_l^0 = Pbar_l0(cos theta)
//   m > 0:  Y_l^m = sqrt(2) Pbar_lm(cos theta) cos(m phi)
//   m < 0:  Y_l^m = sqrt(2) Pbar_l|m|(cos theta) sin(|m| phi)
// where Pbar is the fully normalized associated Legendre function.

#include "oe/common.hpp"
#include "oe/quadrature.hpp"

#include <cmath>
#include <vector>

namespace oe {

inline double sph_bessel_j(int l, double x) { return std::sph_bessel(unsigned(l), x); }

namespace detail {

inline double bisect_bessel_zero(int l, double lo, double hi) {
  double flo = sph_bessel_j(l, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = sph_bessel_j(l, mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

// Rows of zeros of j_l, grown lazily. Row l is bracketed by row l-1 through
// the interlacing R_{l-1,s} < R_{l,s} < R_{l-1,s+1}; row 0 is exact (s pi).
class BesselRootRows {
 public:
  double root(int l, int s) {
    ensure(l, s);
    return rows_[l][s - 1];
  }

 private:
  void ensure(int l, int s) {
    if (int(rows_.size()) <= l) rows_.resize(l + 1);
    if (l == 0) {
      while (int(rows_[0].size()) < s) rows_[0].push_back(double(rows_[0].size() + 1) * pi);
      return;
    }
    while (int(rows_[l].size()) < s) {
      const int k = int(rows_[l].size()) + 1;
      ensure(l - 1, k + 1);
      rows_[l].push_back(bisect_bessel_zero(l, rows_[l - 1][k - 1], rows_[l - 1][k]));
    }
  }

  std::vector<std::vector<double>> rows_;
};

}  // namespace detail

// R_{l,s}: the s-th positive zero of j_l, |j_l(R_{l,s})| <= 1e-10.
inline double bessel_root(int l, int s) {
  if (l < 0 || s < 1) throw InvalidArgumentError("bessel_root: need l >= 0, s >= 1");
  thread_local detail::BesselRootRows table;
  return table.root(l, s);
}

struct BasisSpec {
  double c = 0.0;  // bandlimit, cycles/voxel, in (0, 0.5]
  double R = 0.0;  // support radius, voxels
  int L = 0;       // max degree with S_l >= 1
  std::vector<int> S;                      // S[l], l = 0..L
  std::vector<std::vector<double>> roots;  // roots[l][s-1], s = 1..S[l]+1

  int max_degree() const { return L; }
  double root(int l, int s) const { return roots[size_t(l)][size_t(s - 1)]; }
};

inline BasisSpec truncation(double c, double R) {
  if (!(c > 0.0 && c <= 0.5)) throw InvalidArgumentError("truncation: need 0 < c <= 0.5");
  if (!(R >= 2.0)) throw InvalidArgumentError("truncation: need support radius R >= 2");
  const double limit = 2.0 * pi * c * R;
  BasisSpec spec;
  spec.c = c;
  spec.R = R;
  for (int l = 0;; ++l) {
    int count = 0;
    while (bessel_root(l, count + 1) <= limit) ++count;
    const int sl = count - 1;
    if (sl < 1) {
      if (l == 0) throw EmptyBasisError("truncation: 2 pi c R is below the second j_0 zero");
      spec.L = l - 1;
      break;
    }
    spec.S.push_back(sl);
    std::vector<double> row(size_t(sl) + 1);
    for (int s = 1; s <= sl + 1; ++s) row[size_t(s - 1)] = bessel_root(l, s);
    spec.roots.push_back(std::move(row));
  }
  return spec;
}

// Normalization constant n_ls making int_0^c j_ls^2 k^2 dk = 1.
inline double radial_basis_norm(int l, double c, double root) {
  return std::sqrt(2.0) / (std::pow(c, 1.5) * std::abs(sph_bessel_j(l + 1, root)));
}

// Valid on [0, c); used internally where the k -> 0 limit is needed.
inline double radial_basis_value(int l, double c, double root, double k) {
  return radial_basis_norm(l, c, root) * sph_bessel_j(l, root * k / c);
}

inline double radial_basis(int l, int s, double c, double k) {
  if (!(k > 0.0 && k < c)) throw DomainError("radial_basis: k must lie in (0, c)");
  return radial_basis_value(l, c, bessel_root(l, s), k);
}

// Legendre polynomial P_l(x) by the three-term recurrence.
inline double legendre(int l, double x) {
  if (l < 0) throw InvalidArgumentError("legendre: l must be >= 0");
  double p0 = 1.0;
  if (l == 0) return p0;
  double p1 = x;
  for (int j = 2; j <= l; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / double(j);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

namespace detail {

// Fully normalized associated Legendre values Pbar_lm(x) for all l <= L,
// 0 <= m <= l, packed as P[l (l + 1) / 2 + m]. No Condon-Shortley sign.
inline void normalized_legendre_all(int lmax, double x, double sx, std::vector<double>& p) {
  p.assign(size_t(lmax + 1) * size_t(lmax + 2) / 2, 0.0);
  auto at = [&](int l, int m) -> double& { return p[size_t(l) * size_t(l + 1) / 2 + size_t(m)]; };
  at(0, 0) = std::sqrt(1.0 / (4.0 * pi));
  for (int m = 1; m <= lmax; ++m)
    at(m, m) = at(m - 1, m - 1) * sx * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
  for (int m = 0; m < lmax; ++m) at(m + 1, m) = at(m, m) * x * std::sqrt(2.0 * m + 3.0);
  for (int m = 0; m <= lmax; ++m)
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b =
          std::sqrt((double(l - 1) * (l - 1) - double(m) * m) / (4.0 * double(l - 1) * (l - 1) - 1.0));
      at(l, m) = a * (x * at(l - 1, m) - b * at(l - 2, m));
    }
}

}  // namespace detail

inline double real_sph_harm(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l)
    throw InvalidArgumentError("real_sph_harm: need |m| <= l");
  const double x = std::cos(theta);
  const double sx = std::sin(theta);
  std::vector<double> p;
  detail::normalized_legendre_all(l, x, sx, p);
  const double pb = p[size_t(l) * size_t(l + 1) / 2 + size_t(std::abs(m))];
  if (m == 0) return pb;
  if (m > 0) return std::sqrt(2.0) * pb * std::cos(m * phi);
  return std::sqrt(2.0) * pb * std::sin(-m * phi);
}

}  // namespace oe
