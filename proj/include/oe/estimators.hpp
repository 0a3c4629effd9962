#pragma once
// Estimators for the orthogonal retrieval problem: estimate A from a nearby
// homolog B and the Gram matrix C = A A*. Least squares picks the feasible
// point closest to B; it systematically shrinks the perturbed part, and the
// spectral corrections below (twicing, the anisotropic correction, and the
// interpolating family) remove that shrinkage at first order.
//
// The correction gain T is diagonal in the eigenbasis of C. With lambda_i
// the eigenvalues of C,
//   real field:    T_ii = (1/D) [ -1/2 + sum_j lambda_i / (lambda_i + lambda_j) ]
//   complex field: T_ii = (1/D)          sum_j lambda_i / (lambda_i + lambda_j)
// and the full correction uses W = (I - T)^{-1}. A 0/0 ratio (both
// eigenvalues zero) is taken as 1/2, the limit along lambda_i = lambda_j -> 0;
// a single zero eigenvalue contributes 0. The Monte Carlo consistency checks
// in the test suite are the authority for this formula.

#include "oe/linalg.hpp"

#include <string>

namespace oe {

template <class S>
struct EstimationProblem {
  Mat<S> B;  // N x D homolog coefficients
  Mat<S> C;  // N x N Hermitian PSD, rank <= D
};

template <class S>
struct CorrectionSpectrum {
  Mat<S> U;   // eigenvectors of C (square problem)
  RealVec T;  // diagonal gains, each in [0, 1)
  RealVec W;  // 1 / (1 - T)
};

enum class EstimatorKind { LS, Twicing, AT, Family };

struct EstimatorMethod {
  EstimatorKind kind = EstimatorKind::LS;
  int t = 0;  // Family order; ignored otherwise
};

struct LsDiagnostics {
  double min_alignment_sv = 0.0;  // smallest singular value of B* F
  bool degenerate = false;        // alignment SVD had a (near-)zero singular value
};

template <class S>
void validate_problem(const EstimationProblem<S>& p) {
  if (p.B.rows() < 1 || p.B.cols() < 1)
    throw InvalidArgumentError("estimation problem: B must be at least 1 x 1");
  if (p.C.rows() != p.B.rows())
    throw InvalidArgumentError("estimation problem: C must be N x N with N = rows(B)");
  require_finite(p.B, "estimation problem B");
  require_finite(p.C, "estimation problem C");
  require_hermitian(p.C, "estimation problem C");
}

namespace detail {

inline double eig_ratio(double li, double lj) {
  const double a = std::max(li, 0.0);
  const double b = std::max(lj, 0.0);
  if (a + b <= 0.0) return 0.5;
  return a / (a + b);
}

}  // namespace detail

template <class S>
CorrectionSpectrum<S> correction_spectrum(const Mat<S>& c) {
  const auto eg = eig_hermitian(c);
  const Index d = c.rows();
  CorrectionSpectrum<S> cs;
  cs.U = eg.U;
  cs.T.resize(d);
  cs.W.resize(d);
  for (Index i = 0; i < d; ++i) {
    double sum = 0.0;
    for (Index j = 0; j < d; ++j) sum += detail::eig_ratio(eg.lambda(i), eg.lambda(j));
    if constexpr (is_complex_v<S>)
      cs.T(i) = sum / double(d);
    else
      cs.T(i) = (sum - 0.5) / double(d);
    cs.W(i) = 1.0 / (1.0 - cs.T(i));
  }
  return cs;
}

// Least squares: factor C, align the factor to B by the orthogonal
// Procrustes solution. C is truncated to rank min(N, D) before factoring so
// noisy Gram inputs behave like their best low-rank PSD approximation.
template <class S>
Mat<S> estimate_ls(const EstimationProblem<S>& p, LsDiagnostics* diag = nullptr) {
  validate_problem(p);
  const Index n = p.B.rows(), d = p.B.cols();
  const Index r = std::min(n, d);
  const Mat<S> f = psd_factor(p.C, r);
  const Mat<S> m = p.B.adjoint() * f;  // d x r
  const auto sv  = svd(m);
  if (diag != nullptr) {
    diag->min_alignment_sv = sv.sigma.size() > 0 ? sv.sigma(sv.sigma.size() - 1) : 0.0;
    diag->degenerate =
        diag->min_alignment_sv <= 1e-12 * std::max(sv.sigma.size() > 0 ? sv.sigma(0) : 0.0, 1e-300);
  }
  return f * sv.V * sv.U.adjoint();
}

template <class S>
Mat<S> estimate_twicing(const EstimationProblem<S>& p, LsDiagnostics* diag = nullptr) {
  return 2.0 * estimate_ls(p, diag) - p.B;
}

namespace detail {

// Partial geometric sum 1 + T + ... + T^t, in closed form.
inline RealVec geometric_partial_sum(const RealVec& t_diag, int t) {
  RealVec g(t_diag.size());
  for (Index i = 0; i < g.size(); ++i)
    g(i) = (1.0 - std::pow(t_diag(i), double(t + 1))) / (1.0 - t_diag(i));
  return g;
}

// Square-case correction: B + U diag(gain) U* (A_ls - B).
template <class S>
Mat<S> corrected_square(const Mat<S>& b, const Mat<S>& c, bool use_w, int t,
                        LsDiagnostics* diag) {
  const auto cs    = correction_spectrum(c);
  const RealVec g  = use_w ? cs.W : geometric_partial_sum(cs.T, t);
  const Mat<S> als = estimate_ls(EstimationProblem<S>{b, c}, diag);
  return b + cs.U * (g.template cast<S>().asDiagonal() * (cs.U.adjoint() * (als - b)));
}

// Rectangular problems reduce to a square one. N > D: restrict to the
// column space of C (its top-D eigenvectors). N < D: restrict to the row
// space of B; this branch is a heuristic with no unbiasedness guarantee,
// but the assumption that the estimate shares B's row space is reasonable
// and works well in practice.
template <class S>
Mat<S> corrected_any(const EstimationProblem<S>& p, bool use_w, int t, LsDiagnostics* diag) {
  validate_problem(p);
  const Index n = p.B.rows(), d = p.B.cols();
  if (n == d) return corrected_square(p.B, p.C, use_w, t, diag);
  if (n > d) {
    const auto eg  = eig_hermitian(p.C);
    const Mat<S> proj = eg.U.leftCols(d);
    const Mat<S> b0   = proj.adjoint() * p.B;
    const Mat<S> c0   = proj.adjoint() * p.C * proj;
    return proj * corrected_square(b0, c0, use_w, t, diag);
  }
  const auto fb = svd(p.B);
  if (fb.sigma(n - 1) <= 1e-12 * std::max(fb.sigma(0), 1e-300))
    throw RankDeficientHomologError("estimate: homolog B has deficient row rank (N < D)");
  const Mat<S> proj = fb.V;  // D x N, orthonormal columns spanning row space of B
  const Mat<S> b0   = p.B * proj;
  return corrected_square(b0, p.C, use_w, t, diag) * proj.adjoint();
}

}  // namespace detail

template <class S>
Mat<S> estimate_at(const EstimationProblem<S>& p, LsDiagnostics* diag = nullptr) {
  return detail::corrected_any(p, /*use_w=*/true, 0, diag);
}

template <class S>
Mat<S> estimate_family(const EstimationProblem<S>& p, int t, LsDiagnostics* diag = nullptr) {
  if (t < 0) throw InvalidArgumentError("estimate_family: t must be >= 0");
  return detail::corrected_any(p, /*use_w=*/false, t, diag);
}

template <class S>
Mat<S> estimate(const EstimationProblem<S>& p, const EstimatorMethod& m,
                LsDiagnostics* diag = nullptr) {
  switch (m.kind) {
    case EstimatorKind::LS: return estimate_ls(p, diag);
    case EstimatorKind::Twicing: return estimate_twicing(p, diag);
    case EstimatorKind::AT: return estimate_at(p, diag);
    case EstimatorKind::Family: return estimate_family(p, m.t, diag);
  }
  throw InvalidArgumentError("estimate: unknown method");
}

// First-order prediction of the least-squares estimate around a square
// nonsingular A, used as a test oracle: with A = U S V*, E0 = U* E V and
//   Z_ij = -(conj(E0_ji) s_j^3 + E0_ij s_i^3) / (s_i^2 + s_j^2),
// the prediction is A + U [S^-1 Z + S^-1 E0* S] V*.
template <class S>
Mat<S> ls_first_order_expansion(const Mat<S>& a, const Mat<S>& e) {
  require_square(a, "ls_first_order_expansion");
  require_finite(a, "ls_first_order_expansion");
  require_finite(e, "ls_first_order_expansion");
  if (e.rows() != a.rows() || e.cols() != a.cols())
    throw InvalidArgumentError("ls_first_order_expansion: dimension mismatch");
  const auto f = svd(a);
  const Index n = a.rows();
  if (f.sigma(n - 1) <= 1e-12 * std::max(f.sigma(0), 1e-300))
    throw SingularInputError("ls_first_order_expansion: A is singular");
  const Mat<S> e0 = f.U.adjoint() * e * f.V;
  Mat<S> m(n, n);
  for (Index i = 0; i < n; ++i) {
    const double si = f.sigma(i);
    for (Index j = 0; j < n; ++j) {
      const double sj = f.sigma(j);
      const S z = -(Eigen::numext::conj(e0(j, i)) * S(sj * sj * sj) + e0(i, j) * S(si * si * si)) /
                  S(si * si + sj * sj);
      m(i, j) = z / S(si) + Eigen::numext::conj(e0(j, i)) * S(sj / si);
    }
  }
  return a + f.U * m * f.V.adjoint();
}

}  // namespace oe
