#pragma once
// Voxel phantoms, volume <-> coefficient transforms, and Fourier-domain
// comparison metrics.
//
// Conventions: grids are cubic, even-sided, z-slowest row-major, with voxel
// centers at (i - n/2) * voxel_size. Fourier evaluation uses frequencies in
// cycles/voxel, F(k) = sum_x vol(x) exp(-2 pi i k . x) with x in voxel units,
// so the Nyquist frequency is 0.5. Transforms are direct sums (no FFT
// dependency); grid sides up to ~48 run in seconds.

#include "oe/autocorr.hpp"
#include "oe/parallel.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace oe {

struct VolumeGrid {
  int n = 0;
  double voxel_size = 1.0;
  std::vector<double> data;  // size n^3, index (iz*n + iy)*n + ix

  double& at(int ix, int iy, int iz) { return data[size_t((iz * n + iy)) * size_t(n) + size_t(ix)]; }
  double at(int ix, int iy, int iz) const {
    return data[size_t((iz * n + iy)) * size_t(n) + size_t(ix)];
  }
  double coord(int i) const { return (i - n / 2) * voxel_size; }
};

inline VolumeGrid make_grid(int n, double voxel_size) {
  if (n < 8 || n % 2 != 0) throw InvalidArgumentError("volume grid: n must be even and >= 8");
  if (!(voxel_size > 0.0)) throw InvalidArgumentError("volume grid: voxel_size must be positive");
  VolumeGrid g;
  g.n = n;
  g.voxel_size = voxel_size;
  g.data.assign(size_t(n) * size_t(n) * size_t(n), 0.0);
  return g;
}

inline void validate_grid(const VolumeGrid& v) {
  if (v.n < 8 || v.n % 2 != 0 || v.data.size() != size_t(v.n) * size_t(v.n) * size_t(v.n))
    throw InvalidArgumentError("volume grid: inconsistent shape");
  for (double x : v.data)
    if (!std::isfinite(x)) throw InvalidInputError("volume grid: non-finite data");
}

struct Ellipsoid {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d semi_axes = Eigen::Vector3d::Ones();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // body-to-world
  double density = 1.0;
};

using EllipsoidPhantom = std::vector<Ellipsoid>;

inline void validate_phantom(const EllipsoidPhantom& p) {
  for (const Ellipsoid& e : p) {
    if (!(e.semi_axes.minCoeff() > 0.0))
      throw InvalidArgumentError("phantom: semi-axes must be positive");
    if ((e.rotation.transpose() * e.rotation - Eigen::Matrix3d::Identity()).norm() > 1e-10)
      throw InvalidArgumentError("phantom: rotation must be orthogonal");
  }
}

// Voxel value = sum of densities of the ellipsoids containing the voxel
// center.
inline VolumeGrid render_phantom(const EllipsoidPhantom& p, int n, double voxel_size) {
  validate_phantom(p);
  VolumeGrid g = make_grid(n, voxel_size);
  for (const Ellipsoid& e : p) {
    const Eigen::Matrix3d rt = e.rotation.transpose();
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
          const Eigen::Vector3d pos(g.coord(ix), g.coord(iy), g.coord(iz));
          const Eigen::Vector3d u = rt * (pos - e.center);
          const double q = (u.array() / e.semi_axes.array()).square().sum();
          if (q <= 1.0) g.at(ix, iy, iz) += e.density;
        }
  }
  return g;
}

// "Mickey Mouse" test molecule: a spherical head plus ears, snout, feet and
// an arm, with a small nose that plays the unknown-subunit role. Geometry is
// in voxel units, sized for n = 32 grids with support radius 14.
//
// The body carries substantial mass at every degree and deliberately breaks
// every mirror symmetry, for two reasons: a symmetric phantom zeroes whole
// coefficient columns and leaves the wide (N < D) homolog blocks
// rank-deficient (which the estimators reject), and the nose must stay a
// small relative perturbation of each degree block for the homology
// estimators to operate in their intended regime.
inline Ellipsoid mickey_nose() {
  Ellipsoid nose;
  nose.center = Eigen::Vector3d(1.0, 9.2, 0.0);
  nose.semi_axes = Eigen::Vector3d(1.7, 2.1, 1.6);
  return nose;
}

inline EllipsoidPhantom phantom_mickey_homolog() {
  auto part = [](double cx, double cy, double cz, double ax, double ay, double az) {
    Ellipsoid e;
    e.center = Eigen::Vector3d(cx, cy, cz);
    e.semi_axes = Eigen::Vector3d(ax, ay, az);
    return e;
  };
  return {part(0.2, -0.4, 0.3, 6.6, 6.4, 6.5),    // head
          part(-5.4, 0.8, 5.4, 3.2, 2.9, 3.0),    // left ear
          part(5.1, -0.7, 5.8, 2.9, 3.2, 3.0),    // right ear
          part(0.6, 5.4, -0.8, 3.6, 3.0, 2.7),    // snout
          part(-3.6, -3.2, -6.0, 3.0, 2.5, 2.7),  // left foot
          part(3.3, -2.5, -6.3, 2.4, 2.9, 3.1),   // right foot
          part(-6.5, -4.5, 0.5, 2.6, 2.2, 2.4)};  // arm
}

inline EllipsoidPhantom phantom_mickey_truth() {
  EllipsoidPhantom p = phantom_mickey_homolog();
  p.push_back(mickey_nose());
  return p;
}

inline EllipsoidPhantom phantom_mickey_nose_mask(double scale = 1.5) {
  Ellipsoid m = mickey_nose();
  m.semi_axes *= scale;
  return {m};
}

struct FcrCurve {
  RealVec shell_k;  // shell centers, cycles/voxel, strictly increasing
  RealVec value;    // normalized cross-correlation per shell, in [-1, 1]
  std::vector<int> skipped_shells;
};

struct ExpandDiagnostics {
  RealVec parity_residual;  // per degree l: |discarded| / |kept|
};

namespace detail {

using Cplx = std::complex<double>;

inline void fill_phase(std::vector<Cplx>& out, int n, double k) {
  out.resize(size_t(n));
  for (int i = 0; i < n; ++i) {
    const double arg = -2.0 * pi * k * double(i - n / 2);
    out[size_t(i)] = Cplx(std::cos(arg), std::sin(arg));
  }
}

// In-place centered DFT along each axis of an n^3 complex grid.
// sign = -1: forward (matches F(k) above at k = f/n); sign = +1: inverse
// without the 1/n^3 factor.
inline void dft3_centered(std::vector<Cplx>& g, int n, int sign, int threads) {
  std::vector<Cplx> tw(size_t(n) * size_t(n));
  for (int f = 0; f < n; ++f)
    for (int i = 0; i < n; ++i) {
      const double arg = sign * 2.0 * pi * double(f - n / 2) * double(i - n / 2) / double(n);
      tw[size_t(f) * size_t(n) + size_t(i)] = Cplx(std::cos(arg), std::sin(arg));
    }
  const size_t nn = size_t(n);
  // x axis: rows are contiguous
  parallel_for_index(nn * nn, threads, [&](size_t row) {
    Cplx* base = g.data() + row * nn;
    std::vector<Cplx> tmp(nn, Cplx(0, 0));
    for (size_t f = 0; f < nn; ++f) {
      Cplx acc(0, 0);
      const Cplx* t = tw.data() + f * nn;
      for (size_t i = 0; i < nn; ++i) acc += t[i] * base[i];
      tmp[f] = acc;
    }
    for (size_t i = 0; i < nn; ++i) base[i] = tmp[i];
  });
  // y axis
  parallel_for_index(nn, threads, [&](size_t iz) {
    std::vector<Cplx> tmp(nn);
    for (size_t ix = 0; ix < nn; ++ix) {
      for (size_t f = 0; f < nn; ++f) {
        Cplx acc(0, 0);
        const Cplx* t = tw.data() + f * nn;
        for (size_t iy = 0; iy < nn; ++iy) acc += t[iy] * g[(iz * nn + iy) * nn + ix];
        tmp[f] = acc;
      }
      for (size_t iy = 0; iy < nn; ++iy) g[(iz * nn + iy) * nn + ix] = tmp[iy];
    }
  });
  // z axis
  parallel_for_index(nn, threads, [&](size_t iy) {
    std::vector<Cplx> tmp(nn);
    for (size_t ix = 0; ix < nn; ++ix) {
      for (size_t f = 0; f < nn; ++f) {
        Cplx acc(0, 0);
        const Cplx* t = tw.data() + f * nn;
        for (size_t iz = 0; iz < nn; ++iz) acc += t[iz] * g[(iz * nn + iy) * nn + ix];
        tmp[f] = acc;
      }
      for (size_t iz = 0; iz < nn; ++iz) g[(iz * nn + iy) * nn + ix] = tmp[iz];
    }
  });
}

inline std::vector<Cplx> forward_dft(const VolumeGrid& v, int threads) {
  std::vector<Cplx> g(v.data.size());
  for (size_t i = 0; i < v.data.size(); ++i) g[i] = Cplx(v.data[i], 0.0);
  dft3_centered(g, v.n, -1, threads);
  return g;
}

}  // namespace detail

// Project the volume's Fourier transform onto the spherical basis: sample
// F on a radial x sphere quadrature grid by direct summation over voxels,
// contract against the real harmonics, then against the radial modes.
// The wrong-parity part (real for odd l, imaginary for even l) is discarded
// by projection; its relative size per degree is reported as a diagnostic.
inline CoefficientSet expand(const VolumeGrid& v, const BasisSpec& basis,
                             ExpandDiagnostics* diag = nullptr, int threads = 0,
                             int n_radial = 64) {
  validate_grid(v);
  if (!(basis.c > 0.0 && basis.c <= 0.5))
    throw InvalidArgumentError("expand: basis bandlimit incompatible with grid Nyquist");
  using detail::Cplx;
  const int n = v.n;
  const int big_l = basis.L;
  const int np = big_l + 8;
  const int nq = 2 * big_l + 8;
  const QuadratureRule rk = radial_rule(basis.c, n_radial);
  const SphereRule sph = sphere_rule(np, nq);
  const int nk = n_radial;

  // F on the (radial, polar, azimuth) grid
  std::vector<Cplx> fgrid(size_t(nk) * size_t(np) * size_t(nq));
  parallel_for_index(size_t(nk) * size_t(np), threads, [&](size_t ap) {
    const int a = int(ap / size_t(np));
    const int p = int(ap % size_t(np));
    const double k = rk.nodes(a);
    const double kz = k * sph.cos_theta(p);
    const double ks = k * sph.sin_theta(p);
    const size_t nn = size_t(n);
    std::vector<Cplx> phase(nn);
    std::vector<Cplx> zc(nn * nn, Cplx(0, 0));
    detail::fill_phase(phase, n, kz);
    for (int iz = 0; iz < n; ++iz) {
      const double* slab = v.data.data() + size_t(iz) * nn * nn;
      const Cplx w = phase[size_t(iz)];
      for (size_t i = 0; i < nn * nn; ++i) zc[i] += w * slab[i];
    }
    std::vector<Cplx> py(nn), px(nn), rowx(nn);
    for (int q = 0; q < nq; ++q) {
      const double phi = sph.phi(q);
      detail::fill_phase(py, n, ks * std::sin(phi));
      detail::fill_phase(px, n, ks * std::cos(phi));
      std::fill(rowx.begin(), rowx.end(), Cplx(0, 0));
      for (int iy = 0; iy < n; ++iy) {
        const Cplx w = py[size_t(iy)];
        const Cplx* row = zc.data() + size_t(iy) * size_t(n);
        for (int ix = 0; ix < n; ++ix) rowx[size_t(ix)] += w * row[size_t(ix)];
      }
      Cplx acc(0, 0);
      for (int ix = 0; ix < n; ++ix) acc += px[size_t(ix)] * rowx[size_t(ix)];
      fgrid[(size_t(a) * size_t(np) + size_t(p)) * size_t(nq) + size_t(q)] = acc;
    }
  });

  // azimuth contraction: cos/sin(m phi) moments per (a, p)
  std::vector<double> cosm(size_t(big_l + 1) * size_t(nq)), sinm(cosm.size());
  for (int m = 0; m <= big_l; ++m)
    for (int q = 0; q < nq; ++q) {
      cosm[size_t(m) * size_t(nq) + size_t(q)] = std::cos(m * sph.phi(q));
      sinm[size_t(m) * size_t(nq) + size_t(q)] = std::sin(m * sph.phi(q));
    }
  std::vector<Cplx> fc(size_t(nk) * size_t(np) * size_t(big_l + 1));
  std::vector<Cplx> fs(fc.size());
  for (int a = 0; a < nk; ++a)
    for (int p = 0; p < np; ++p) {
      const Cplx* gq = fgrid.data() + (size_t(a) * size_t(np) + size_t(p)) * size_t(nq);
      for (int m = 0; m <= big_l; ++m) {
        Cplx ac(0, 0), as(0, 0);
        const double* cm = cosm.data() + size_t(m) * size_t(nq);
        const double* sm = sinm.data() + size_t(m) * size_t(nq);
        for (int q = 0; q < nq; ++q) {
          ac += gq[size_t(q)] * cm[size_t(q)];
          as += gq[size_t(q)] * sm[size_t(q)];
        }
        const size_t idx = (size_t(a) * size_t(np) + size_t(p)) * size_t(big_l + 1) + size_t(m);
        fc[idx] = ac * sph.azimuth_weight;
        fs[idx] = as * sph.azimuth_weight;
      }
    }

  // polar contraction: A_lm(k_a)
  std::vector<std::vector<double>> ptab;
  ptab.resize(size_t(np));
  for (int p = 0; p < np; ++p)
    detail::normalized_legendre_all(big_l, sph.cos_theta(p), sph.sin_theta(p), ptab[size_t(p)]);
  const size_t n_lm = size_t(big_l + 1) * size_t(big_l + 1);
  auto lm_index = [](int l, int m) { return size_t(l) * size_t(l) + size_t(m + l); };
  std::vector<Cplx> alm(size_t(nk) * n_lm, Cplx(0, 0));
  const double sqrt2 = std::sqrt(2.0);
  for (int a = 0; a < nk; ++a)
    for (int p = 0; p < np; ++p) {
      const double wp = sph.polar_weights(p);
      const std::vector<double>& pb = ptab[size_t(p)];
      const size_t base = (size_t(a) * size_t(np) + size_t(p)) * size_t(big_l + 1);
      for (int l = 0; l <= big_l; ++l)
        for (int m = -l; m <= l; ++m) {
          const double pv = pb[size_t(l) * size_t(l + 1) / 2 + size_t(std::abs(m))];
          Cplx val;
          if (m == 0)
            val = fc[base];
          else if (m > 0)
            val = sqrt2 * fc[base + size_t(m)];
          else
            val = sqrt2 * fs[base + size_t(-m)];
          alm[size_t(a) * n_lm + lm_index(l, m)] += wp * pv * val;
        }
    }

  // radial projection and parity split
  CoefficientSet out;
  out.basis = basis;
  out.coeff.resize(size_t(big_l + 1));
  if (diag != nullptr) diag->parity_residual = RealVec::Zero(big_l + 1);
  for (int l = 0; l <= big_l; ++l) {
    const int sl = basis.S[size_t(l)];
    RealMat block(sl, 2 * l + 1);
    double kept2 = 0.0, disc2 = 0.0;
    for (int sidx = 1; sidx <= sl; ++sidx) {
      const double root = basis.root(l, sidx);
      RealVec w(nk);
      for (int a = 0; a < nk; ++a) {
        const double k = rk.nodes(a);
        w(a) = rk.weights(a) * k * k * radial_basis_value(l, basis.c, root, k);
      }
      for (int m = -l; m <= l; ++m) {
        Cplx acc(0, 0);
        for (int a = 0; a < nk; ++a) acc += w(a) * alm[size_t(a) * n_lm + lm_index(l, m)];
        const double keep = (l % 2 == 0) ? acc.real() : acc.imag();
        const double disc = (l % 2 == 0) ? acc.imag() : acc.real();
        block(sidx - 1, m + l) = keep;
        kept2 += keep * keep;
        disc2 += disc * disc;
      }
    }
    out.coeff[size_t(l)] = block;
    if (diag != nullptr)
      diag->parity_residual(l) = std::sqrt(disc2) / std::max(std::sqrt(kept2), 1e-300);
  }
  return out;
}

// Evaluate the truncated expansion on the Cartesian frequency grid
// (|k| >= c zeroed), inverse-transform, and return the real part. The
// imaginary residual is near machine precision for parity-respecting
// coefficient sets and is reported through imag_residual.
inline VolumeGrid synthesize(const CoefficientSet& a, int n, double voxel_size,
                             double* imag_residual = nullptr, int threads = 0) {
  validate_coefficient_set(a);
  VolumeGrid out = make_grid(n, voxel_size);
  using detail::Cplx;
  const BasisSpec& basis = a.basis;
  const int big_l = basis.L;
  const int half = n / 2;
  const double k2max = basis.c * basis.c * double(n) * double(n);

  // radial profiles at the distinct grid radii
  const int f2_limit = 3 * half * half + 1;
  std::vector<int> ridx(size_t(f2_limit), -1);
  std::vector<int> distinct;
  for (int f2 = 0; f2 < f2_limit; ++f2)
    if (double(f2) < k2max) {
      ridx[size_t(f2)] = int(distinct.size());
      distinct.push_back(f2);
    }
  const size_t n_lm = size_t(big_l + 1) * size_t(big_l + 1);
  auto lm_index = [](int l, int m) { return size_t(l) * size_t(l) + size_t(m + l); };
  std::vector<Cplx> profile(distinct.size() * n_lm, Cplx(0, 0));
  for (size_t r = 0; r < distinct.size(); ++r) {
    const double k = std::sqrt(double(distinct[r])) / double(n);
    for (int l = 0; l <= big_l; ++l) {
      const Cplx unit = (l % 2 == 0) ? Cplx(1, 0) : Cplx(0, 1);
      const int sl = basis.S[size_t(l)];
      RealVec jv(sl);
      for (int sidx = 1; sidx <= sl; ++sidx)
        jv(sidx - 1) = radial_basis_value(l, basis.c, basis.root(l, sidx), k);
      const RealMat& block = a.coeff[size_t(l)];
      for (int m = -l; m <= l; ++m) {
        double acc = 0.0;
        for (int sidx = 0; sidx < sl; ++sidx) acc += block(sidx, m + l) * jv(sidx);
        profile[r * n_lm + lm_index(l, m)] = unit * acc;
      }
    }
  }

  // assemble the Cartesian frequency grid
  std::vector<Cplx> g(size_t(n) * size_t(n) * size_t(n), Cplx(0, 0));
  parallel_for_index(size_t(n), threads, [&](size_t izf) {
    const int fz = int(izf) - half;
    std::vector<double> pb;
    std::vector<double> cmphi(size_t(big_l + 1)), smphi(size_t(big_l + 1));
    for (int iyf = 0; iyf < n; ++iyf) {
      const int fy = iyf - half;
      for (int ixf = 0; ixf < n; ++ixf) {
        const int fx = ixf - half;
        const int f2 = fx * fx + fy * fy + fz * fz;
        if (!(double(f2) < k2max)) continue;
        const size_t gi = (izf * size_t(n) + size_t(iyf)) * size_t(n) + size_t(ixf);
        const Cplx* prof = profile.data() + size_t(ridx[size_t(f2)]) * n_lm;
        if (f2 == 0) {
          g[gi] = prof[lm_index(0, 0)] * std::sqrt(1.0 / (4.0 * pi));
          continue;
        }
        const double rad = std::sqrt(double(f2));
        const double ct = double(fz) / rad;
        const double rho = std::sqrt(double(fx * fx + fy * fy));
        const double st = rho / rad;
        detail::normalized_legendre_all(big_l, ct, st, pb);
        double cphi = 1.0, sphi = 0.0;
        if (rho > 0.0) {
          cphi = double(fx) / rho;
          sphi = double(fy) / rho;
        }
        cmphi[0] = 1.0;
        smphi[0] = 0.0;
        for (int m = 1; m <= big_l; ++m) {
          cmphi[size_t(m)] = cmphi[size_t(m - 1)] * cphi - smphi[size_t(m - 1)] * sphi;
          smphi[size_t(m)] = smphi[size_t(m - 1)] * cphi + cmphi[size_t(m - 1)] * sphi;
        }
        const double sqrt2 = std::sqrt(2.0);
        Cplx acc(0, 0);
        for (int l = 0; l <= big_l; ++l) {
          const double* pl = pb.data() + size_t(l) * size_t(l + 1) / 2;
          acc += prof[lm_index(l, 0)] * pl[0];
          for (int m = 1; m <= l; ++m) {
            const double y = sqrt2 * pl[size_t(m)];
            acc += prof[lm_index(l, m)] * (y * cmphi[size_t(m)]);
            acc += prof[lm_index(l, -m)] * (y * smphi[size_t(m)]);
          }
        }
        g[gi] = acc;
      }
    }
  });

  detail::dft3_centered(g, n, +1, threads);
  double re2 = 0.0, im2 = 0.0;
  const double scale = 1.0 / (double(n) * double(n) * double(n));
  for (size_t i = 0; i < g.size(); ++i) {
    const Cplx z = g[i] * scale;
    out.data[i] = z.real();
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
  }
  if (imag_residual != nullptr)
    *imag_residual = std::sqrt(im2) / std::max(std::sqrt(re2), 1e-300);
  return out;
}

// || mask .* (recon - truth) || / || mask .* truth ||
inline double masked_relative_error(const VolumeGrid& recon, const VolumeGrid& truth,
                                    const VolumeGrid& mask) {
  if (recon.n != truth.n || recon.n != mask.n)
    throw InvalidArgumentError("masked_relative_error: grid shapes differ");
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < truth.data.size(); ++i) {
    const double m = mask.data[i];
    const double d = m * (recon.data[i] - truth.data[i]);
    const double t = m * truth.data[i];
    num += d * d;
    den += t * t;
  }
  if (den <= 0.0) throw UndefinedMetricError("masked_relative_error: mask.*truth is zero");
  return std::sqrt(num) / std::sqrt(den);
}

// Fourier cross resolution: per-shell normalized cross-correlation
// Re<F1, F2> / (|F1| |F2|) of the two volumes' transforms. Shell i covers
// |k| in [i w, (i+1) w); shells whose center exceeds Nyquist (0.5) are not
// reported, empty or degenerate shells are skipped and recorded.
inline FcrCurve fcr(const VolumeGrid& v1, const VolumeGrid& v2, double shell_width,
                    int threads = 0) {
  if (v1.n != v2.n) throw InvalidArgumentError("fcr: grid shapes differ");
  if (!(shell_width > 0.0)) throw InvalidArgumentError("fcr: shell width must be positive");
  const int n = v1.n;
  const auto f1 = detail::forward_dft(v1, threads);
  const auto f2 = detail::forward_dft(v2, threads);
  const int n_shells = int(std::floor((0.5 - 0.5 * shell_width) / shell_width)) + 1;
  std::vector<double> cross(size_t(n_shells), 0.0), p1(size_t(n_shells), 0.0),
      p2(size_t(n_shells), 0.0);
  const int half = n / 2;
  for (int izf = 0; izf < n; ++izf)
    for (int iyf = 0; iyf < n; ++iyf)
      for (int ixf = 0; ixf < n; ++ixf) {
        const double fx = ixf - half, fy = iyf - half, fz = izf - half;
        const double k = std::sqrt(fx * fx + fy * fy + fz * fz) / double(n);
        const int shell = int(std::floor(k / shell_width));
        if (shell >= n_shells) continue;
        const size_t gi = (size_t(izf) * size_t(n) + size_t(iyf)) * size_t(n) + size_t(ixf);
        const auto a = f1[gi];
        const auto b = f2[gi];
        cross[size_t(shell)] += a.real() * b.real() + a.imag() * b.imag();
        p1[size_t(shell)] += std::norm(a);
        p2[size_t(shell)] += std::norm(b);
      }
  FcrCurve curve;
  std::vector<double> ks, vals;
  for (int s = 0; s < n_shells; ++s) {
    const double denom = std::sqrt(p1[size_t(s)]) * std::sqrt(p2[size_t(s)]);
    if (denom <= 0.0) {
      curve.skipped_shells.push_back(s);
      continue;
    }
    ks.push_back((s + 0.5) * shell_width);
    vals.push_back(cross[size_t(s)] / denom);
  }
  curve.shell_k.resize(Index(ks.size()));
  curve.value.resize(Index(vals.size()));
  for (size_t i = 0; i < ks.size(); ++i) {
    curve.shell_k(Index(i)) = ks[i];
    curve.value(Index(i)) = vals[i];
  }
  return curve;
}

}  // namespace oe
