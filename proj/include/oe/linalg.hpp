#pragma once
// Dense kernels shared by the estimators and the spherical pipeline:
// deterministic SVD and Hermitian eigendecomposition, PSD factorization and
// square roots, Haar-distributed orthogonal/unitary sampling.
//
// Determinism contract: for a given input, every factorization returns the
// same bytes. Singular/eigen vectors are pinned by making the
// largest-magnitude entry of each left vector real and nonnegative (first
// index wins ties). Downstream estimators depend only on products that are
// invariant to this convention; the convention itself is a reproducibility
// guarantee, not a mathematical one.

#include "oe/common.hpp"
#include "oe/rng.hpp"

#include <algorithm>
#include <cmath>

namespace oe {

template <class S>
struct SvdFactors {
  Mat<S> U;       // orthonormal columns
  RealVec sigma;  // nonincreasing, >= 0
  Mat<S> V;       // orthonormal columns
};

template <class S>
struct EigFactors {
  Mat<S> U;        // orthonormal columns
  RealVec lambda;  // nonincreasing
};

namespace detail {

// Multiply column pair (U_k, V_k) by a unit scalar so the largest-magnitude
// entry of U_k becomes real and nonnegative. U S V* is unchanged.
template <class S>
void fix_column_phases(Mat<S>& u, Mat<S>* v) {
  for (Index k = 0; k < u.cols(); ++k) {
    Index jmax  = 0;
    double best = -1.0;
    for (Index j = 0; j < u.rows(); ++j) {
      const double m = std::abs(u(j, k));
      if (m > best) {
        best = m;
        jmax = j;
      }
    }
    if (best <= 0.0) continue;
    const S pivot = u(jmax, k);
    const S a     = Eigen::numext::conj(pivot / S(std::abs(pivot)));
    u.col(k) *= a;
    if (v != nullptr) v->col(k) *= a;
  }
}

}  // namespace detail

// Thin SVD, singular values nonincreasing, deterministic sign/phase.
template <class S>
SvdFactors<S> svd(const Mat<S>& x) {
  require_finite(x, "svd");
  Eigen::JacobiSVD<Mat<S>> dec(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors<S> f{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  detail::fix_column_phases(f.U, &f.V);
  return f;
}

// Hermitian eigendecomposition, eigenvalues nonincreasing.
template <class S>
EigFactors<S> eig_hermitian(const Mat<S>& x) {
  require_finite(x, "eig_hermitian");
  require_hermitian(x, "eig_hermitian");
  const Mat<S> h = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat<S>> es(h);
  if (es.info() != Eigen::Success)
    throw InvalidInputError("eig_hermitian: eigensolver failed to converge");
  EigFactors<S> f;
  f.U      = es.eigenvectors().rowwise().reverse();
  f.lambda = es.eigenvalues().reverse();
  detail::fix_column_phases(f.U, static_cast<Mat<S>*>(nullptr));
  return f;
}

// F (n x rank) with F F* equal to the best rank-`rank` PSD approximation of
// C; negative eigenvalues are clamped to zero. A classical Cholesky would
// fail on singular C, so the factor comes from the truncated
// eigendecomposition F = U_r diag(sqrt(lambda_r)).
template <class S>
Mat<S> psd_factor(const Mat<S>& c, Index rank) {
  if (rank < 0 || rank > c.rows())
    throw InvalidArgumentError("psd_factor: rank exceeds matrix dimension");
  const auto eg      = eig_hermitian(c);
  const double scale = c.norm();
  if (eg.lambda.size() > 0 && eg.lambda.minCoeff() < -kHermTol * scale)
    throw InvalidInputError("psd_factor: negative eigenvalue beyond PSD tolerance");
  Mat<S> f(c.rows(), rank);
  for (Index k = 0; k < rank; ++k)
    f.col(k) = eg.U.col(k) * std::sqrt(std::max(eg.lambda(k), 0.0));
  return f;
}

// Hermitian square root of a PSD matrix.
template <class S>
Mat<S> psd_sqrt(const Mat<S>& x) {
  const auto eg      = eig_hermitian(x);
  const double scale = x.norm();
  if (eg.lambda.size() > 0 && eg.lambda.minCoeff() < -kHermTol * scale)
    throw InvalidInputError("psd_sqrt: negative eigenvalue beyond PSD tolerance");
  RealVec s(eg.lambda.size());
  for (Index i = 0; i < s.size(); ++i) s(i) = std::sqrt(std::max(eg.lambda(i), 0.0));
  Mat<S> y = eg.U * s.template cast<S>().asDiagonal() * eg.U.adjoint();
  return Mat<S>(0.5 * (y + y.adjoint()));
}

// Haar-uniform orthogonal (real) or unitary (complex) matrix: QR of a
// Gaussian matrix with the diagonal-phase correction that makes the law
// exactly Haar rather than merely orthonormal.
template <class S>
Mat<S> haar_orthogonal(Index dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidArgumentError("haar_orthogonal: dim must be >= 1");
  NormalSampler g(seed);
  const Mat<S> gm = gaussian_matrix<S>(dim, dim, g);
  Eigen::HouseholderQR<Mat<S>> qr(gm);
  Mat<S> q       = qr.householderQ() * Mat<S>::Identity(dim, dim);
  const Mat<S> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index k = 0; k < dim; ++k) {
    const double m = std::abs(r(k, k));
    q.col(k) *= (m > 0.0) ? S(r(k, k) / S(m)) : S(1);
  }
  return q;
}

// First-order change of the matrix square root at a positive diagonal
// point: entry (i, j) moves by E_ij / (sqrt(x_i) + sqrt(x_j)).
template <class S>
Mat<S> sqrt_perturbation_first_order(const Mat<S>& x, const Mat<S>& e) {
  require_square(x, "sqrt_perturbation_first_order");
  require_finite(x, "sqrt_perturbation_first_order");
  require_hermitian(e, "sqrt_perturbation_first_order");
  if (x.rows() != e.rows())
    throw InvalidArgumentError("sqrt_perturbation_first_order: dimension mismatch");
  const Index n    = x.rows();
  double max_diag  = 0.0;
  for (Index i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(x(i, i)));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && std::abs(x(i, j)) > 1e-12 * std::max(max_diag, 1e-300))
        throw InvalidArgumentError("sqrt_perturbation_first_order: X must be diagonal");
  RealVec sq(n);
  for (Index i = 0; i < n; ++i) {
    const double xi = Eigen::numext::real(x(i, i));
    if (!(xi > 0.0))
      throw SingularInputError("sqrt_perturbation_first_order: diagonal entry not positive");
    sq(i) = std::sqrt(xi);
  }
  Mat<S> out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = e(i, j) / S(sq(i) + sq(j));
  return out;
}

}  // namespace oe
