#pragma once

// Random instance generators and independent LP oracles shared by tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mwd/lp_simplex.hpp"
#include "mwd/measures.hpp"

namespace mwd::testing {

inline ComplexMatrix random_complex(std::mt19937& rng, Index n) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), n == 1 ? 0.0 : g(rng));
  return m;
}

inline HermitianMatrix random_hermitian(std::mt19937& rng, Index n) {
  return HermitianMatrix::hermitian_part(random_complex(rng, n));
}

/// G G* with G of rank `rank` (full rank by default), scaled by `scale`.
inline HermitianMatrix random_psd(std::mt19937& rng, Index n, double scale = 1.0,
                                  Index rank = -1) {
  if (rank < 0) rank = n;
  std::normal_distribution<double> g;
  ComplexMatrix b(n, rank);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < rank; ++j) b(i, j) = Complex(g(rng), n == 1 ? 0.0 : g(rng));
  return HermitianMatrix::hermitian_part(scale * b * b.adjoint() / static_cast<double>(n));
}

/// Sorted random points on [0, span] with unit weights.
inline Grid random_grid(std::mt19937& rng, std::size_t k, double span = 3.0) {
  std::uniform_real_distribution<double> u(0.0, span);
  std::vector<double> pts;
  while (pts.size() < k) {
    const double p = u(rng);
    bool clash = false;
    for (double q : pts) clash = clash || std::abs(p - q) < 1e-3;
    if (!clash) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  return Grid(pts, std::vector<double>(k, 1.0));
}

/// Masses are zero at each point with probability `sparsity`.
inline MatrixMeasure random_measure(std::mt19937& rng, const Grid& grid, Index n,
                                    double sparsity = 0.2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<HermitianMatrix> masses;
  for (std::size_t k = 0; k < grid.size(); ++k)
    masses.push_back(u(rng) < sparsity ? HermitianMatrix::zero(n)
                                       : random_psd(rng, n, u(rng)));
  return MatrixMeasure(grid, masses);
}

/// Unit-trace PSD matrix.
inline HermitianMatrix random_density(std::mt19937& rng, Index n) {
  HermitianMatrix p = random_psd(rng, n);
  return p * (1.0 / p.trace());
}

/// Adds rows a' x <= b to a constraint list.
struct LpBuilder {
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  Index vars;
  explicit LpBuilder(Index v) : vars(v) {}
  void le(const Eigen::VectorXd& a, double b) {
    rows.push_back(a);
    rhs.push_back(b);
  }
  void eq(const Eigen::VectorXd& a, double b) {
    le(a, b);
    le(-a, -b);
  }
  LpProblem build(const Eigen::VectorXd& objective) const {
    LpProblem p;
    p.objective = objective;
    p.constraints.resize(static_cast<Index>(rows.size()), vars);
    p.bounds.resize(static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      p.constraints.row(static_cast<Index>(r)) = rows[r].transpose();
      p.bounds(static_cast<Index>(r)) = rhs[r];
    }
    return p;
  }
};

/// Dual of scalar W1-kappa with every pairwise Lipschitz constraint:
/// max sum f_k delta_k, |f_k| <= kappa, |f_i - f_j| <= |x_i - x_j|.
inline double w1k_all_pairs_lp(const std::vector<double>& x, const std::vector<double>& delta,
                               double kappa) {
  const Index k = static_cast<Index>(x.size());
  LpBuilder lp(k);
  for (Index i = 0; i < k; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
    e(i) = 1.0;
    lp.le(e, kappa);
    lp.le(-e, kappa);
    for (Index j = i + 1; j < k; ++j) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(k);
      d(i) = 1.0;
      d(j) = -1.0;
      const double dist = std::abs(x[i] - x[j]);
      lp.le(d, dist);
      lp.le(-d, dist);
    }
  }
  return lp_simplex(lp.build(Eigen::Map<const Eigen::VectorXd>(delta.data(), k))).value;
}

/// Balanced transport LP: min sum |x_i - x_j| p_ij, p >= 0, marginals a, b.
inline double transport_lp(const std::vector<double>& x, const std::vector<double>& a,
                           const std::vector<double>& b) {
  const Index k = static_cast<Index>(x.size());
  LpBuilder lp(k * k);
  Eigen::VectorXd cost(k * k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      cost(i * k + j) = -std::abs(x[i] - x[j]);
      Eigen::VectorXd e = Eigen::VectorXd::Zero(k * k);
      e(i * k + j) = -1.0;
      lp.le(e, 0.0);
    }
  for (Index i = 0; i < k; ++i) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(k * k), col = row;
    for (Index j = 0; j < k; ++j) {
      row(i * k + j) = 1.0;
      col(j * k + i) = 1.0;
    }
    lp.eq(row, a[i]);
    lp.eq(col, b[i]);
  }
  return -lp_simplex(lp.build(cost)).value;
}

}  // namespace mwd::testing
