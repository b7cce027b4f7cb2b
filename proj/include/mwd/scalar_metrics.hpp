#pragma once

#include <vector>

#include "mwd/lp_simplex.hpp"
#include "mwd/measures.hpp"

namespace mwd {

/// Right-closed cumulative masses: values[k] includes the mass at theta_k.
struct CdfTable {
  Grid grid;
  std::vector<double> values;
};

CdfTable cdf(const ScalarMeasure& mu);

double tv_scalar(const ScalarMeasure& mu1, const ScalarMeasure& mu2);

/// sup_k |F1_k - F2_k|
double kolmogorov(const ScalarMeasure& mu1, const ScalarMeasure& mu2);

/// Balanced 1-Wasserstein distance from the CDF area formula. Throws
/// PreconditionError when total masses differ by more than 1e-9 relative.
double w1_balanced(const ScalarMeasure& mu1, const ScalarMeasure& mu2);

/// Unbalanced W1 with total-variation penalty kappa, evaluated through its
/// dual: max sum_k f_k (m1_k - m2_k) over 1-Lipschitz f with |f| <= kappa.
/// Only adjacent Lipschitz constraints are imposed; on a line they imply
/// the remaining pairs.
double w1_kappa_scalar(const ScalarMeasure& mu1, const ScalarMeasure& mu2, double kappa);

/// The LP solved by w1_kappa_scalar, exposed for inspection.
LpProblem w1_kappa_lp(const Grid& grid, const std::vector<double>& delta, double kappa);

}  // namespace mwd
