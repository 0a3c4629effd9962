#pragma once
// Shared scalar/matrix aliases, error taxonomy and small numeric helpers.

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace oe {

using Real    = double;
using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi_v<double>;

template <class S> using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S> using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using RealVec    = Eigen::VectorXd;
using RealMat    = Mat<Real>;
using ComplexMat = Mat<Complex>;
using Index      = Eigen::Index;

template <class S> struct is_complex_scalar : std::false_type {};
template <class T> struct is_complex_scalar<std::complex<T>> : std::true_type {};
template <class S> inline constexpr bool is_complex_v = is_complex_scalar<S>::value;

enum class Field { Real, Complex };

template <class S>
constexpr Field field_of() { return is_complex_v<S> ? Field::Complex : Field::Real; }

// Everything thrown by this library derives from Error.
struct Error : std::runtime_error { using std::runtime_error::runtime_error; };

struct InvalidInputError : Error { using Error::Error; };    // malformed numeric input
struct InvalidArgumentError : Error { using Error::Error; }; // out-of-range parameter
struct SingularInputError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct RankDeficientHomologError : Error { using Error::Error; };
struct UndefinedMetricError : Error { using Error::Error; };
struct IncompatibleInputError : Error { using Error::Error; };
struct QuadratureUnderresolvedError : Error { using Error::Error; };
struct EmptyBasisError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Relative tolerance for Hermitian/PSD input validation.
inline constexpr double kHermTol = 1e-8;

template <class S>
bool all_finite(const Mat<S>& x) {
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) {
      if constexpr (is_complex_v<S>) {
        if (!std::isfinite(x(i, j).real()) || !std::isfinite(x(i, j).imag())) return false;
      } else {
        if (!std::isfinite(x(i, j))) return false;
      }
    }
  return true;
}

template <class S>
void require_finite(const Mat<S>& x, const char* what) {
  if (!all_finite(x)) throw InvalidInputError(std::string(what) + ": non-finite entries");
}

template <class S>
void require_square(const Mat<S>& x, const char* what) {
  if (x.rows() != x.cols())
    throw InvalidArgumentError(std::string(what) + ": matrix must be square");
}

template <class S>
void require_hermitian(const Mat<S>& x, const char* what, double rel_tol = kHermTol) {
  require_square(x, what);
  const double scale = x.norm();
  if ((x - x.adjoint()).norm() > rel_tol * std::max(scale, 1e-300))
    throw InvalidInputError(std::string(what) + ": matrix is not Hermitian within tolerance");
}

}  // namespace oe
