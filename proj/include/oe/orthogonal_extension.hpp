#pragma once
// Orthogonal extension across the whole basis: estimate every degree-l
// coefficient block from the homolog's block and the autocorrelation block.
//
// Per degree, N = S_l rows and D = the number of symmetry-retained orders.
// The square, tall (N > D) and wide (N < D) branches are picked by that
// comparison; under a cyclic mask only the retained columns enter the
// problem and the masked columns stay zero.

#include "oe/autocorr.hpp"
#include "oe/estimators.hpp"

#include <string>
#include <vector>

namespace oe {

inline bool bases_equal(const BasisSpec& a, const BasisSpec& b) {
  if (a.c != b.c || a.R != b.R || a.L != b.L || a.S != b.S) return false;
  return a.roots == b.roots;
}

inline CoefficientSet estimate_coefficients(const CoefficientSet& homolog,
                                            const AutocorrelationSet& acorr,
                                            const EstimatorMethod& method) {
  validate_coefficient_set(homolog);
  validate_autocorrelation_set(acorr);
  if (!bases_equal(homolog.basis, acorr.basis))
    throw IncompatibleInputError("estimate_coefficients: basis mismatch between inputs");
  if (acorr.C.size() != homolog.coeff.size())
    throw IncompatibleInputError("estimate_coefficients: block count mismatch");

  CoefficientSet out = homolog;
  for (int l = 0; l <= homolog.basis.L; ++l) {
    const RealMat& bl = homolog.coeff[size_t(l)];
    const int d_eff = symmetry_retained_cols(l, homolog.sym_order);
    RealMat b_ret(bl.rows(), d_eff);
    std::vector<int> cols;
    cols.reserve(size_t(d_eff));
    for (int m = -l; m <= l; ++m)
      if (((m % homolog.sym_order) + homolog.sym_order) % homolog.sym_order == 0)
        cols.push_back(m + l);
    for (int j = 0; j < d_eff; ++j) b_ret.col(j) = bl.col(cols[size_t(j)]);

    const EstimationProblem<Real> problem{b_ret, acorr.C[size_t(l)]};
    const RealMat a_ret = estimate(problem, method);

    RealMat full = RealMat::Zero(bl.rows(), bl.cols());
    for (int j = 0; j < d_eff; ++j) full.col(cols[size_t(j)]) = a_ret.col(j);
    out.coeff[size_t(l)] = full;
  }
  return out;
}

}  // namespace oe
