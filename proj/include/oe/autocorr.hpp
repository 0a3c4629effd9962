#pragma once
// Rotation-invariant autocorrelation matrices over the spherical-Bessel
// basis: construction from coefficients, extraction from a rotational
// covariance by Legendre projection, rank truncation, cyclic symmetry masks.
//
// Coefficient matrices are stored as real matrices for both parities: the
// degree-l block of a real-valued volume is real for even l and purely
// imaginary for odd l, so odd blocks hold the imaginary part (the global
// factor i cancels in every Gram product).
//
// The covariance slice convention is Sigma(k1, k2, psi) =
// sum_l C_l(k1, k2) P_l(cos psi) / (4 pi), the inverse of the Legendre
// projection below; the 4 pi constant is pinned by the pure-P_l roundtrip
// in the test suite rather than by any external software convention.

#include "oe/linalg.hpp"
#include "oe/sphbasis.hpp"

#include <numeric>
#include <utility>
#include <vector>

namespace oe {

struct CoefficientSet {
  BasisSpec basis;
  int sym_order = 1;           // cyclic symmetry order; 1 = none
  std::vector<RealMat> coeff;  // coeff[l]: S_l x (2l+1); column j <-> m = j - l
};

struct AutocorrelationSet {
  BasisSpec basis;
  std::vector<RealMat> C;     // C[l]: S_l x S_l, symmetric PSD
  std::vector<int> rank_cap;  // <= 2l+1 (smaller under symmetry)
};

struct CovarianceSlice {
  RealVec k_nodes, k_weights;      // radial grid on (0, c), weights against dk
  RealVec psi_nodes, psi_weights;  // polar grid on [0, pi], weights against sin(psi) dpsi
  std::vector<RealMat> values;     // values[p](a, b) = Sigma(k_a, k_b, psi_p)
};

// Number of orders m in [-l, l] with m = 0 mod n.
inline int symmetry_retained_cols(int l, int n) { return 2 * (l / n) + 1; }

inline int rank_cap_for(const BasisSpec& basis, int l, int sym_order) {
  return std::min(basis.S[size_t(l)], symmetry_retained_cols(l, sym_order));
}

inline void validate_coefficient_set(const CoefficientSet& a) {
  if (a.sym_order < 1) throw InvalidArgumentError("coefficient set: sym_order must be >= 1");
  if (int(a.coeff.size()) != a.basis.L + 1)
    throw InvalidArgumentError("coefficient set: block count does not match basis");
  for (int l = 0; l <= a.basis.L; ++l) {
    const RealMat& m = a.coeff[size_t(l)];
    if (m.rows() != a.basis.S[size_t(l)] || m.cols() != 2 * l + 1)
      throw InvalidArgumentError("coefficient set: block shape does not match basis");
    require_finite(m, "coefficient set");
  }
}

inline void validate_autocorrelation_set(const AutocorrelationSet& c) {
  if (int(c.C.size()) != c.basis.L + 1 || c.rank_cap.size() != c.C.size())
    throw InvalidArgumentError("autocorrelation set: block count does not match basis");
  for (int l = 0; l <= c.basis.L; ++l) {
    const RealMat& m = c.C[size_t(l)];
    if (m.rows() != c.basis.S[size_t(l)] || m.cols() != m.rows())
      throw InvalidArgumentError("autocorrelation set: block shape does not match basis");
    require_finite(m, "autocorrelation set");
    require_hermitian(m, "autocorrelation set");
    if (c.rank_cap[size_t(l)] < 0 || c.rank_cap[size_t(l)] > 2 * l + 1)
      throw InvalidArgumentError("autocorrelation set: rank cap outside [0, 2l+1]");
  }
}

inline void validate_covariance_slice(const CovarianceSlice& s) {
  if (s.k_nodes.size() < 1 || s.psi_nodes.size() < 1)
    throw InvalidArgumentError("covariance slice: empty grid");
  if (s.k_nodes.size() != s.k_weights.size() || s.psi_nodes.size() != s.psi_weights.size())
    throw InvalidArgumentError("covariance slice: node/weight length mismatch");
  if (int(s.values.size()) != s.psi_nodes.size())
    throw InvalidArgumentError("covariance slice: value count does not match polar grid");
  double scale = 0.0;
  for (const RealMat& v : s.values) scale = std::max(scale, v.norm());
  for (const RealMat& v : s.values) {
    if (v.rows() != s.k_nodes.size() || v.cols() != s.k_nodes.size())
      throw InvalidArgumentError("covariance slice: value shape does not match radial grid");
    require_finite(v, "covariance slice");
    if ((v - v.transpose()).norm() > kHermTol * std::max(scale, 1e-300))
      throw InvalidInputError("covariance slice: values not symmetric in k1 <-> k2");
  }
}

namespace detail {

// Clamp a symmetric matrix onto the PSD cone (negative eigenvalues to zero).
inline RealMat clamp_psd(const RealMat& c) {
  Eigen::SelfAdjointEigenSolver<RealMat> es(0.5 * (c + c.transpose()));
  RealVec lam = es.eigenvalues();
  for (Index i = 0; i < lam.size(); ++i) lam(i) = std::max(lam(i), 0.0);
  RealMat out = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace detail

inline AutocorrelationSet autocorr_from_coeffs(const CoefficientSet& a) {
  validate_coefficient_set(a);
  AutocorrelationSet out;
  out.basis = a.basis;
  out.C.reserve(a.coeff.size());
  out.rank_cap.reserve(a.coeff.size());
  for (int l = 0; l <= a.basis.L; ++l) {
    const RealMat& al = a.coeff[size_t(l)];
    RealMat c = al * al.transpose();
    out.C.push_back(0.5 * (c + c.transpose()));
    out.rank_cap.push_back(rank_cap_for(a.basis, l, a.sym_order));
  }
  return out;
}

// Legendre projection of a rotational covariance:
//   C_l(k1, k2) = 2 pi (2l+1) int_0^pi Sigma(k1, k2, psi) P_l(cos psi) sin psi dpsi,
// evaluated with the slice's own polar rule, then projected onto the radial
// basis with the slice's radial rule. Quadrature noise can push eigenvalues
// slightly negative, so each block is symmetrized and clamped to PSD.
inline AutocorrelationSet autocorr_from_covariance(const CovarianceSlice& s,
                                                   const BasisSpec& basis) {
  validate_covariance_slice(s);
  if (s.psi_nodes.size() < 2 * basis.L + 2)
    throw QuadratureUnderresolvedError(
        "autocorr_from_covariance: polar grid needs at least 2L+2 nodes");
  for (Index i = 0; i < s.k_nodes.size(); ++i)
    if (!(s.k_nodes(i) > 0.0 && s.k_nodes(i) < basis.c))
      throw IncompatibleInputError("autocorr_from_covariance: radial node outside (0, c)");

  const Index nk = s.k_nodes.size();
  AutocorrelationSet out;
  out.basis = basis;
  for (int l = 0; l <= basis.L; ++l) {
    RealMat cfun = RealMat::Zero(nk, nk);
    for (Index p = 0; p < s.psi_nodes.size(); ++p) {
      const double w = s.psi_weights(p) * legendre(l, std::cos(s.psi_nodes(p)));
      cfun.noalias() += w * s.values[size_t(p)];
    }
    cfun *= 2.0 * pi * (2.0 * l + 1.0);

    const int sl = basis.S[size_t(l)];
    RealMat proj(nk, sl);  // proj(a, s) = w_a k_a^2 j_ls(k_a)
    for (int sidx = 1; sidx <= sl; ++sidx) {
      const double root = basis.root(l, sidx);
      for (Index a = 0; a < nk; ++a) {
        const double k = s.k_nodes(a);
        proj(a, sidx - 1) = s.k_weights(a) * k * k * radial_basis_value(l, basis.c, root, k);
      }
    }
    out.C.push_back(detail::clamp_psd(proj.transpose() * cfun * proj));
    out.rank_cap.push_back(rank_cap_for(basis, l, 1));
  }
  return out;
}

// Inverse of the projection above, sampled on Gauss-Legendre grids; used to
// synthesize covariance slices from a known autocorrelation set.
inline CovarianceSlice covariance_from_autocorr(const AutocorrelationSet& acorr, int n_radial,
                                                int n_psi) {
  const BasisSpec& basis = acorr.basis;
  CovarianceSlice s;
  const QuadratureRule rk = radial_rule(basis.c, n_radial);
  const QuadratureRule rp = polar_rule(n_psi);
  s.k_nodes = rk.nodes;
  s.k_weights = rk.weights;
  s.psi_nodes = rp.nodes;
  s.psi_weights = rp.weights;
  s.values.assign(size_t(n_psi), RealMat::Zero(n_radial, n_radial));

  for (int l = 0; l <= basis.L; ++l) {
    const int sl = basis.S[size_t(l)];
    RealMat jt(n_radial, sl);  // jt(a, s) = j_ls(k_a)
    for (int sidx = 1; sidx <= sl; ++sidx)
      for (int a = 0; a < n_radial; ++a)
        jt(a, sidx - 1) = radial_basis_value(l, basis.c, basis.root(l, sidx), rk.nodes(a));
    const RealMat cfun = jt * acorr.C[size_t(l)] * jt.transpose();
    for (int p = 0; p < n_psi; ++p)
      s.values[size_t(p)].noalias() +=
          (legendre(l, std::cos(rp.nodes(p))) / (4.0 * pi)) * cfun;
  }
  return s;
}

// Replace each block by its best PSD approximation of rank <= rank_cap.
// Ties in the spectrum resolve to the lowest eigenvector index of the
// deterministic eigendecomposition.
inline AutocorrelationSet rank_truncate(const AutocorrelationSet& in) {
  AutocorrelationSet out;
  out.basis = in.basis;
  out.rank_cap = in.rank_cap;
  out.C.reserve(in.C.size());
  for (size_t l = 0; l < in.C.size(); ++l) {
    const auto eg = eig_hermitian(in.C[l]);
    const int cap = std::min<int>(in.rank_cap[l], int(eg.lambda.size()));
    RealMat c = RealMat::Zero(in.C[l].rows(), in.C[l].cols());
    for (int k = 0; k < cap; ++k) {
      const double lam = std::max(eg.lambda(k), 0.0);
      c.noalias() += lam * eg.U.col(k) * eg.U.col(k).transpose();
    }
    out.C.push_back(0.5 * (c + c.transpose()));
  }
  return out;
}

// Keep only the symmetry-invariant orders m = 0 mod n; other columns are
// zeroed and the rank caps shrink accordingly.
inline CoefficientSet symmetry_mask(const CoefficientSet& a, int n) {
  if (n < 1) throw InvalidArgumentError("symmetry_mask: order must be >= 1");
  validate_coefficient_set(a);
  CoefficientSet out = a;
  out.sym_order = std::lcm(a.sym_order, n);
  if (n == 1) return out;
  for (int l = 0; l <= a.basis.L; ++l)
    for (int m = -l; m <= l; ++m)
      if (((m % n) + n) % n != 0) out.coeff[size_t(l)].col(m + l).setZero();
  return out;
}

}  // namespace oe
