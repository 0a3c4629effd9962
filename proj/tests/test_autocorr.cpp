#include "oe/autocorr.hpp"

#include <catch2/catch.hpp>

using namespace oe;

namespace {

CoefficientSet random_coeffs(const BasisSpec& basis, std::uint64_t seed) {
  CoefficientSet a;
  a.basis = basis;
  NormalSampler g(seed);
  for (int l = 0; l <= basis.L; ++l)
    a.coeff.push_back(gaussian_matrix<Real>(basis.S[size_t(l)], 2 * l + 1, g));
  return a;
}

}  // namespace

TEST_CASE("autocorr_from_coeffs: zero, rank bound, factor roundtrip") {
  const BasisSpec basis = truncation(0.5, 8.0);
  CoefficientSet zero;
  zero.basis = basis;
  for (int l = 0; l <= basis.L; ++l)
    zero.coeff.push_back(RealMat::Zero(basis.S[size_t(l)], 2 * l + 1));
  const auto cz = autocorr_from_coeffs(zero);
  for (const auto& c : cz.C) CHECK(c.norm() == 0.0);

  const CoefficientSet a = random_coeffs(basis, 5);
  const auto cs = autocorr_from_coeffs(a);
  for (int l = 0; l <= basis.L; ++l) {
    const RealMat& c = cs.C[size_t(l)];
    CHECK(cs.rank_cap[size_t(l)] == std::min(basis.S[size_t(l)], 2 * l + 1));
    const auto eg = eig_hermitian(c);
    for (Index i = 2 * l + 1; i < eg.lambda.size(); ++i)
      CHECK(std::abs(eg.lambda(i)) <= 1e-8 * std::max(c.norm(), 1e-300));
    // factor at the rank cap and re-multiply
    const RealMat f = psd_factor(c, cs.rank_cap[size_t(l)]);
    CHECK((f * f.transpose() - c).norm() <= 1e-10 * std::max(c.norm(), 1e-300));
  }
}

TEST_CASE("autocorr_from_covariance: pure Legendre mode fixes the 4 pi constant") {
  const BasisSpec basis = truncation(0.5, 6.0);
  const QuadratureRule rk = radial_rule(basis.c, 48);
  const QuadratureRule rp = polar_rule(2 * basis.L + 2);
  const int l0 = 2;
  RealVec gv(rk.nodes.size());
  for (Index i = 0; i < gv.size(); ++i) gv(i) = std::exp(-2.0 * rk.nodes(i)) * rk.nodes(i);

  CovarianceSlice s;
  s.k_nodes = rk.nodes;
  s.k_weights = rk.weights;
  s.psi_nodes = rp.nodes;
  s.psi_weights = rp.weights;
  for (Index p = 0; p < rp.nodes.size(); ++p)
    s.values.push_back(legendre(l0, std::cos(rp.nodes(p))) * RealMat(gv * gv.transpose()));

  const auto acorr = autocorr_from_covariance(s, basis);
  RealVec u(basis.S[size_t(l0)]);
  for (int sidx = 1; sidx <= basis.S[size_t(l0)]; ++sidx) {
    double acc = 0.0;
    for (Index i = 0; i < rk.nodes.size(); ++i)
      acc += rk.weights(i) * rk.nodes(i) * rk.nodes(i) *
             radial_basis_value(l0, basis.c, basis.root(l0, sidx), rk.nodes(i)) * gv(i);
    u(sidx - 1) = acc;
  }
  const RealMat expected = 4.0 * pi * u * u.transpose();
  CHECK((acorr.C[size_t(l0)] - expected).norm() <= 1e-8 * expected.norm());
  for (int l = 0; l <= basis.L; ++l)
    if (l != l0) CHECK(acorr.C[size_t(l)].norm() <= 1e-8 * expected.norm());
}

TEST_CASE("autocorr_from_covariance: zero covariance, underresolved grid") {
  const BasisSpec basis = truncation(0.5, 6.0);
  const QuadratureRule rk = radial_rule(basis.c, 24);
  const QuadratureRule rp = polar_rule(2 * basis.L + 2);
  CovarianceSlice s;
  s.k_nodes = rk.nodes;
  s.k_weights = rk.weights;
  s.psi_nodes = rp.nodes;
  s.psi_weights = rp.weights;
  s.values.assign(size_t(rp.nodes.size()), RealMat::Zero(24, 24));
  const auto acorr = autocorr_from_covariance(s, basis);
  for (const auto& c : acorr.C) CHECK(c.norm() == 0.0);

  const QuadratureRule rp_small = polar_rule(basis.L);  // < 2L+2
  CovarianceSlice bad = s;
  bad.psi_nodes = rp_small.nodes;
  bad.psi_weights = rp_small.weights;
  bad.values.assign(size_t(rp_small.nodes.size()), RealMat::Zero(24, 24));
  CHECK_THROWS_AS(autocorr_from_covariance(bad, basis), QuadratureUnderresolvedError);
}

TEST_CASE("autocorrelation set validation: bad caps and asymmetric blocks rejected") {
  const BasisSpec basis = truncation(0.5, 6.0);
  const auto good = autocorr_from_coeffs(random_coeffs(basis, 77));
  AutocorrelationSet bad_cap = good;
  bad_cap.rank_cap[1] = 4;  // > 2l+1 = 3
  CHECK_THROWS_AS(validate_autocorrelation_set(bad_cap), InvalidArgumentError);
  AutocorrelationSet bad_sym = good;
  bad_sym.C[0](0, 1) += 0.5 * bad_sym.C[0].norm();
  CHECK_THROWS_AS(validate_autocorrelation_set(bad_sym), InvalidInputError);
}

TEST_CASE("covariance slice validation: asymmetry in k1 <-> k2 rejected") {
  CovarianceSlice s;
  s.k_nodes = RealVec::LinSpaced(3, 0.1, 0.3);
  s.k_weights = RealVec::Constant(3, 0.1);
  s.psi_nodes = RealVec::LinSpaced(4, 0.2, 3.0);
  s.psi_weights = RealVec::Constant(4, 0.5);
  RealMat v = RealMat::Zero(3, 3);
  v(0, 1) = 1.0;  // not symmetric
  s.values.assign(4, v);
  CHECK_THROWS_AS(validate_covariance_slice(s), InvalidInputError);
}

TEST_CASE("roundtrip: coefficients -> covariance slice -> autocorrelation") {
  const BasisSpec basis = truncation(0.5, 6.0);
  const CoefficientSet a = random_coeffs(basis, 9);
  const auto direct = autocorr_from_coeffs(a);
  const CovarianceSlice slice = covariance_from_autocorr(direct, 64, 2 * basis.L + 2);
  const auto recovered = autocorr_from_covariance(slice, basis);
  for (int l = 0; l <= basis.L; ++l) {
    const double scale = std::max(direct.C[size_t(l)].norm(), 1e-300);
    CHECK((recovered.C[size_t(l)] - direct.C[size_t(l)]).norm() <= 1e-6 * scale);
  }
}

TEST_CASE("rank_truncate: no-op below cap, projector case, Eckart-Young") {
  const BasisSpec basis = truncation(0.5, 8.0);
  const CoefficientSet a = random_coeffs(basis, 13);
  const auto cs = autocorr_from_coeffs(a);
  const auto ct = rank_truncate(cs);
  for (int l = 0; l <= basis.L; ++l)
    CHECK((ct.C[size_t(l)] - cs.C[size_t(l)]).norm() <= 1e-12 * std::max(cs.C[size_t(l)].norm(), 1e-300));

  // identity beyond the cap becomes a rank-cap projector
  AutocorrelationSet ident = cs;
  int l_full = -1;
  for (int l = 0; l <= basis.L; ++l)
    if (basis.S[size_t(l)] > 2 * l + 1) l_full = l;
  REQUIRE(l_full >= 0);
  ident.C[size_t(l_full)] = RealMat::Identity(basis.S[size_t(l_full)], basis.S[size_t(l_full)]);
  const auto it = rank_truncate(ident);
  const RealMat& proj = it.C[size_t(l_full)];
  CHECK((proj * proj - proj).norm() < 1e-12);
  CHECK(proj.trace() == Approx(double(2 * l_full + 1)).margin(1e-12));
  // deterministic tie-break
  const RealMat proj2 = rank_truncate(ident).C[size_t(l_full)];
  CHECK((proj - proj2).norm() == 0.0);

  // truncation moves a noisy Gram matrix closer to the clean one
  NormalSampler g(17);
  const int l = l_full;
  const RealMat clean = cs.C[size_t(l)];
  const RealMat noise_src = gaussian_matrix<Real>(basis.S[size_t(l)], basis.S[size_t(l)], g);
  AutocorrelationSet noisy = cs;
  noisy.C[size_t(l)] = clean + 1e-3 * clean.norm() * RealMat(noise_src * noise_src.transpose()) /
                                   (noise_src * noise_src.transpose()).norm();
  const auto back = rank_truncate(noisy);
  CHECK((back.C[size_t(l)] - clean).norm() <= (noisy.C[size_t(l)] - clean).norm() + 1e-15);
}

TEST_CASE("symmetry_mask: identity, C4 at l = 2, rank collapse") {
  const BasisSpec basis = truncation(0.5, 8.0);
  const CoefficientSet a = random_coeffs(basis, 19);
  const CoefficientSet same = symmetry_mask(a, 1);
  for (int l = 0; l <= basis.L; ++l)
    CHECK((same.coeff[size_t(l)] - a.coeff[size_t(l)]).norm() == 0.0);

  const CoefficientSet masked = symmetry_mask(a, 4);
  CHECK(masked.sym_order == 4);
  REQUIRE(basis.L >= 2);
  const RealMat& m2 = masked.coeff[2];
  for (int m = -2; m <= 2; ++m) {
    if (m == 0)
      CHECK(m2.col(m + 2).norm() > 0.0);
    else
      CHECK(m2.col(m + 2).norm() == 0.0);
  }
  CHECK(symmetry_retained_cols(2, 4) == 1);

  const auto cs = autocorr_from_coeffs(masked);
  for (int l = 0; l <= basis.L; ++l) {
    const int retained = symmetry_retained_cols(l, 4);
    CHECK(cs.rank_cap[size_t(l)] == std::min(basis.S[size_t(l)], retained));
    const auto eg = eig_hermitian(cs.C[size_t(l)]);
    for (Index i = retained; i < eg.lambda.size(); ++i)
      CHECK(std::abs(eg.lambda(i)) <= 1e-10 * std::max(cs.C[size_t(l)].norm(), 1e-300));
  }
}
