#pragma once
// Seeded sampling utilities. Every stochastic routine takes an explicit
// 64-bit seed and nothing reads the wall clock; Gaussian variates come from
// our own Box-Muller so a seed pins the exact byte stream regardless of the
// standard library.

#include "oe/common.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace oe {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent stream seed for (base, stream); used for per-trial RNGs.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = base ^ (0x632be59bd9b4e019ull + 0x9e3779b97f4a7c15ull * (stream + 1));
  std::uint64_t r = splitmix64(s);
  return r ^ splitmix64(s);
}

class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

  // uniform on (0, 1]
  double uniform_pos() { return double((eng_() >> 11) + 1) * 0x1.0p-53; }
  // uniform on [0, 1)
  double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }

  double operator()() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    const double r   = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double arg = 2.0 * pi * uniform01();
    cached_ = r * std::sin(arg);
    have_   = true;
    return r * std::cos(arg);
  }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool have_     = false;
};

template <class S>
S gaussian_scalar(NormalSampler& g) {
  if constexpr (is_complex_v<S>) {
    const double re = g();
    const double im = g();
    return S(re, im) * std::sqrt(0.5);
  } else {
    return g();
  }
}

// Row-major fill so the layout of draws is part of the seed contract.
template <class S>
Mat<S> gaussian_matrix(Index rows, Index cols, NormalSampler& g) {
  Mat<S> m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = gaussian_scalar<S>(g);
  return m;
}

}  // namespace oe
