#include "mwd/scalar_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mwd/errors.hpp"

namespace mwd {

namespace {

void require_scalar_pair(const ScalarMeasure& mu1, const ScalarMeasure& mu2) {
  require_compatible(mu1, mu2);
  if (mu1.dim() != 1) throw ShapeError("scalar metric requires 1x1 measures");
}

}  // namespace

CdfTable cdf(const ScalarMeasure& mu) {
  std::vector<double> values;
  values.reserve(mu.size());
  double acc = 0.0;
  for (double m : scalar_masses(mu)) values.push_back(acc += m);
  return {mu.grid(), std::move(values)};
}

double tv_scalar(const ScalarMeasure& mu1, const ScalarMeasure& mu2) {
  require_scalar_pair(mu1, mu2);
  const auto a = scalar_masses(mu1), b = scalar_masses(mu2);
  double tv = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) tv += std::abs(a[k] - b[k]);
  return tv;
}

double kolmogorov(const ScalarMeasure& mu1, const ScalarMeasure& mu2) {
  require_scalar_pair(mu1, mu2);
  const auto f1 = cdf(mu1).values, f2 = cdf(mu2).values;
  double d = 0.0;
  for (std::size_t k = 0; k < f1.size(); ++k) d = std::max(d, std::abs(f1[k] - f2[k]));
  return d;
}

double w1_balanced(const ScalarMeasure& mu1, const ScalarMeasure& mu2) {
  require_scalar_pair(mu1, mu2);
  const auto f1 = cdf(mu1).values, f2 = cdf(mu2).values;
  const auto a = scalar_masses(mu1), b = scalar_masses(mu2);
  const double scale = std::max({std::abs(f1.back()), std::abs(f2.back()),
                                 *std::max_element(a.begin(), a.end()),
                                 *std::max_element(b.begin(), b.end())});
  if (std::abs(f1.back() - f2.back()) > 1e-9 * scale) {
    std::ostringstream os;
    os << "balanced W1 needs equal total masses (got " << f1.back() << " and "
       << f2.back() << "); use the unbalanced w1k metric instead";
    throw PreconditionError(os.str());
  }
  const auto gaps = mu1.grid().gaps();
  double w = 0.0;
  for (std::size_t k = 0; k < gaps.size(); ++k) w += std::abs(f1[k] - f2[k]) * gaps[k];
  return w;
}

LpProblem w1_kappa_lp(const Grid& grid, const std::vector<double>& delta, double kappa) {
  const Index k = static_cast<Index>(grid.size());
  const auto gaps = grid.gaps();
  LpProblem lp;
  lp.objective = Eigen::Map<const Eigen::VectorXd>(delta.data(), k);
  const Index rows = 2 * k + 2 * (k - 1);
  lp.constraints = Eigen::MatrixXd::Zero(rows, k);
  lp.bounds.resize(rows);
  Index r = 0;
  for (Index i = 0; i < k; ++i) {
    lp.constraints(r, i) = 1.0;
    lp.bounds(r++) = kappa;
    lp.constraints(r, i) = -1.0;
    lp.bounds(r++) = kappa;
  }
  for (Index i = 0; i + 1 < k; ++i) {
    lp.constraints(r, i) = 1.0;
    lp.constraints(r, i + 1) = -1.0;
    lp.bounds(r++) = gaps[i];
    lp.constraints(r, i) = -1.0;
    lp.constraints(r, i + 1) = 1.0;
    lp.bounds(r++) = gaps[i];
  }
  return lp;
}

double w1_kappa_scalar(const ScalarMeasure& mu1, const ScalarMeasure& mu2, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  require_scalar_pair(mu1, mu2);
  const auto a = scalar_masses(mu1), b = scalar_masses(mu2);
  std::vector<double> delta(a.size());
  bool all_zero = true;
  for (std::size_t k = 0; k < a.size(); ++k) {
    delta[k] = a[k] - b[k];
    all_zero = all_zero && delta[k] == 0.0;
  }
  if (all_zero) return 0.0;
  try {
    return lp_simplex(w1_kappa_lp(mu1.grid(), delta, kappa)).value;
  } catch (const LpError& e) {
    // The feasible set is a nonempty polytope, so this signals numerical trouble.
    std::ostringstream os;
    os << "w1_kappa_scalar LP failed on K=" << a.size() << ", kappa=" << kappa << ": "
       << e.what();
    throw Error(os.str());
  }
}

}  // namespace mwd
