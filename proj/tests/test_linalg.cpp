#include "oe/linalg.hpp"

#include <catch2/catch.hpp>

using namespace oe;

namespace {

template <class S>
Mat<S> random_mat(Index rows, Index cols, std::uint64_t seed) {
  NormalSampler g(seed);
  return gaussian_matrix<S>(rows, cols, g);
}

}  // namespace

TEST_CASE("svd: identity and diagonal cases") {
  const RealMat eye = RealMat::Identity(3, 3);
  const auto f = svd(eye);
  CHECK((f.U - eye).norm() < 1e-14);
  CHECK((f.V - eye).norm() < 1e-14);
  for (int i = 0; i < 3; ++i) CHECK(f.sigma(i) == Approx(1.0).margin(1e-14));

  RealMat d = RealMat::Zero(2, 2);
  d(0, 0) = 3.0;
  const auto fd = svd(d);
  CHECK(fd.sigma(0) == Approx(3.0).margin(1e-14));
  CHECK(fd.sigma(1) == Approx(0.0).margin(1e-14));
}

TEMPLATE_TEST_CASE("svd: reconstruction at the working dimensions", "", Real, Complex) {
  using S = TestType;
  const Mat<S> x = random_mat<S>(32, 20, 321);
  const auto f = svd(x);
  CHECK((f.U * f.sigma.template cast<S>().asDiagonal() * f.V.adjoint() - x).norm() <=
        1e-10 * x.norm());
}

TEMPLATE_TEST_CASE("svd: reconstruction, ordering, convention", "", Real, Complex) {
  using S = TestType;
  const Mat<S> x = random_mat<S>(4, 3, 100);
  const auto f = svd(x);
  CHECK((f.U * f.sigma.template cast<S>().asDiagonal() * f.V.adjoint() - x).norm() <=
        1e-12 * x.norm());
  CHECK((f.U.adjoint() * f.U - Mat<S>::Identity(3, 3)).norm() < 1e-12);
  CHECK((f.V.adjoint() * f.V - Mat<S>::Identity(3, 3)).norm() < 1e-12);
  for (Index i = 1; i < f.sigma.size(); ++i) CHECK(f.sigma(i) <= f.sigma(i - 1));
  // convention: largest-magnitude entry of each left vector real-nonnegative
  for (Index k = 0; k < f.U.cols(); ++k) {
    Index jmax = 0;
    for (Index j = 0; j < f.U.rows(); ++j)
      if (std::abs(f.U(j, k)) > std::abs(f.U(jmax, k))) jmax = j;
    CHECK(Eigen::numext::imag(f.U(jmax, k)) == Approx(0.0).margin(1e-14));
    CHECK(Eigen::numext::real(f.U(jmax, k)) >= 0.0);
  }
  // determinism: identical bytes on repeat
  const auto f2 = svd(x);
  CHECK((f.U - f2.U).norm() == 0.0);
  CHECK((f.V - f2.V).norm() == 0.0);
}

TEST_CASE("svd: rejects non-finite input") {
  RealMat x = RealMat::Zero(2, 2);
  x(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd(x), InvalidInputError);
}

TEST_CASE("psd_factor: scalar and identity") {
  RealMat c(1, 1);
  c(0, 0) = 4.0;
  CHECK(psd_factor(c, 1)(0, 0) == Approx(2.0).margin(1e-14));

  const RealMat eye = RealMat::Identity(4, 4);
  const RealMat f = psd_factor(eye, 4);
  CHECK((f * f.transpose() - eye).norm() < 1e-12);
  CHECK((f.transpose() * f - eye).norm() < 1e-12);
}

TEMPLATE_TEST_CASE("psd_factor: rank-r roundtrip", "", Real, Complex) {
  using S = TestType;
  const Mat<S> a = random_mat<S>(5, 3, 7);
  const Mat<S> c = a * a.adjoint();
  const Mat<S> f = psd_factor(c, 3);
  CHECK(f.cols() == 3);
  CHECK((f * f.adjoint() - c).norm() <= 1e-10 * c.norm());
}

TEST_CASE("psd_factor: error paths") {
  RealMat c(2, 2);
  c << 1.0, 0.5, -0.5, 1.0;  // not symmetric
  CHECK_THROWS_AS(psd_factor(c, 2), InvalidInputError);

  const RealMat eye = RealMat::Identity(2, 2);
  CHECK_THROWS_AS(psd_factor(eye, 3), InvalidArgumentError);

  RealMat neg = -eye;  // negative definite
  CHECK_THROWS_AS(psd_factor(neg, 2), InvalidInputError);
}

TEST_CASE("psd_sqrt: diagonal and identity") {
  RealMat x = RealMat::Zero(2, 2);
  x(0, 0) = 4.0;
  x(1, 1) = 9.0;
  const RealMat y = psd_sqrt(x);
  CHECK(y(0, 0) == Approx(2.0).margin(1e-12));
  CHECK(y(1, 1) == Approx(3.0).margin(1e-12));
  CHECK(std::abs(y(0, 1)) < 1e-12);
  CHECK((psd_sqrt(RealMat(RealMat::Identity(3, 3))) - RealMat::Identity(3, 3)).norm() < 1e-12);
}

TEMPLATE_TEST_CASE("psd_sqrt: squaring oracle", "", Real, Complex) {
  using S = TestType;
  const Mat<S> a = random_mat<S>(5, 5, 11);
  const Mat<S> x = a * a.adjoint();
  const Mat<S> y = psd_sqrt(x);
  CHECK((y - y.adjoint()).norm() < 1e-10 * x.norm());
  CHECK((y * y - x).norm() <= 1e-10 * x.norm());
}

TEST_CASE("haar_orthogonal: O(1) is a fair coin") {
  int plus = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double v = haar_orthogonal<Real>(1, 1000 + std::uint64_t(i))(0, 0);
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
    if (v > 0) ++plus;
  }
  CHECK(std::abs(plus / double(n) - 0.5) < 0.02);
}

TEST_CASE("haar_orthogonal: orthogonality and determinant") {
  const RealMat v = haar_orthogonal<Real>(3, 77);
  CHECK((v.transpose() * v - RealMat::Identity(3, 3)).norm() < 1e-12);
  CHECK(std::abs(std::abs(v.determinant()) - 1.0) < 1e-12);
  const ComplexMat u = haar_orthogonal<Complex>(16, 78);
  CHECK((u.adjoint() * u - ComplexMat::Identity(16, 16)).norm() < 1e-12);
  // deterministic per seed
  CHECK((haar_orthogonal<Real>(3, 77) - v).norm() == 0.0);
}

// Second-moment identities of the Haar law. Real: E[V_ij V_mn] =
// delta_im delta_jn / D; complex: E[V_ij V_mn] = 0, E[V_ij conj(V_mn)] =
// delta_im delta_jn / D. Tested at a few index tuples within 3.5 sigma.
TEST_CASE("haar_orthogonal: second-moment identities") {
  for (const int d : {2, 4, 8}) {
    const int n = 20000;
    // accumulate products for tuples: (0,0,0,0) diag, (0,1,0,1) diag, (0,0,1,1) off
    double s_d0 = 0, s_d1 = 0, s_off = 0;
    double q_d0 = 0, q_d1 = 0, q_off = 0;
    Complex cs_same(0, 0), cs_conj(0, 0);
    double cq_conj = 0;
    for (int i = 0; i < n; ++i) {
      const RealMat v = haar_orthogonal<Real>(d, derive_seed(31, std::uint64_t(1000 * d + i)));
      const double p0 = v(0, 0) * v(0, 0), p1 = v(0, 1) * v(0, 1), po = v(0, 0) * v(1, 1);
      s_d0 += p0;
      s_d1 += p1;
      s_off += po;
      q_d0 += p0 * p0;
      q_d1 += p1 * p1;
      q_off += po * po;
      const ComplexMat u = haar_orthogonal<Complex>(d, derive_seed(37, std::uint64_t(1000 * d + i)));
      cs_same += u(0, 1) * u(0, 1);
      const Complex pc = u(0, 1) * std::conj(u(0, 1));
      cs_conj += pc;
      cq_conj += std::norm(pc);
    }
    auto se = [&](double s, double q) {
      const double mean = s / n;
      return std::sqrt(std::max(q / n - mean * mean, 0.0) / n);
    };
    CHECK(std::abs(s_d0 / n - 1.0 / d) <= 3.5 * se(s_d0, q_d0) + 1e-12);
    CHECK(std::abs(s_d1 / n - 1.0 / d) <= 3.5 * se(s_d1, q_d1) + 1e-12);
    CHECK(std::abs(s_off / n) <= 3.5 * se(s_off, q_off) + 1e-12);
    CHECK(std::abs(cs_same) / n <= 4.0 / std::sqrt(double(n) * d));
    CHECK(std::abs(cs_conj / double(n) - 1.0 / d) <=
          3.5 * se(std::real(cs_conj), cq_conj) + 1e-12);
  }
}

TEST_CASE("sqrt_perturbation_first_order: closed-form cases") {
  RealMat x = RealMat::Zero(2, 2);
  x(0, 0) = 4.0;
  x(1, 1) = 4.0;
  RealMat e(2, 2);
  e << 0.3, -0.7, -0.7, 1.1;
  CHECK((sqrt_perturbation_first_order(x, e) - e / 4.0).norm() < 1e-14);

  RealMat x2 = RealMat::Zero(2, 2);
  x2(0, 0) = 1.0;
  x2(1, 1) = 9.0;
  RealMat e2(2, 2);
  e2 << 0.0, 1.0, 1.0, 0.0;
  const RealMat out = sqrt_perturbation_first_order(x2, e2);
  CHECK(out(0, 1) == Approx(0.25).margin(1e-14));
  CHECK(out(1, 0) == Approx(0.25).margin(1e-14));
  CHECK(out(0, 0) == Approx(0.0).margin(1e-14));
}

TEST_CASE("sqrt_perturbation_first_order: zero diagonal rejected") {
  RealMat x = RealMat::Zero(2, 2);
  x(0, 0) = 1.0;  // x(1,1) = 0
  const RealMat e = RealMat::Identity(2, 2);
  CHECK_THROWS_AS(sqrt_perturbation_first_order(x, e), SingularInputError);
}

TEMPLATE_TEST_CASE("sqrt_perturbation_first_order: finite-difference oracle", "", Real, Complex) {
  using S = TestType;
  NormalSampler g(55);
  Mat<S> x = Mat<S>::Zero(4, 4);
  for (int i = 0; i < 4; ++i) x(i, i) = S(1.0 + 2.0 * g.uniform01());
  Mat<S> e = gaussian_matrix<S>(4, 4, g);
  e = Mat<S>(0.5 * (e + e.adjoint()));
  e /= S(e.norm());
  auto resid = [&](double eps) {
    const Mat<S> pred = sqrt_perturbation_first_order(x, Mat<S>(eps * e));
    return (psd_sqrt(Mat<S>(x + eps * e)) - psd_sqrt(x) - pred).norm();
  };
  const double ratio = resid(1e-3) / resid(1e-4);
  CHECK(ratio >= 50.0);
  CHECK(ratio <= 200.0);
}
