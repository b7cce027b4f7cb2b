#include "mwd/lp_simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace mwd {

namespace {

using Index = Eigen::Index;

constexpr double kPivotTol = 1e-9;

// Tableau for: maximize r' z subject to T z = rhs, z >= 0, with the last
// row of `t` holding the negated reduced costs and the last column the rhs.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<Index> basis)
      : t_(std::move(t)), basis_(std::move(basis)) {}

  Index rows() const { return t_.rows() - 1; }
  Index cols() const { return t_.cols() - 1; }

  // Runs Bland's rule over columns [0, active_cols). Returns false when
  // the objective is unbounded.
  bool optimize(Index active_cols, long& pivots) {
    const Index m = rows();
    for (;;) {
      Index enter = -1;
      for (Index j = 0; j < active_cols; ++j) {
        if (t_(m, j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = t_(i, cols()) / a;
        if (ratio < best - kPivotTol ||
            (std::abs(ratio - best) <= kPivotTol && leave >= 0 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(Index row, Index col) {
    t_.row(row) /= t_(row, col);
    for (Index i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  // Replaces the objective row with the reduced costs of `cost` (maximize).
  void set_objective(const Eigen::VectorXd& cost) {
    const Index m = rows();
    t_.row(m).setZero();
    t_.row(m).head(cost.size()) = -cost.transpose();
    for (Index i = 0; i < m; ++i) {
      const Index b = basis_[i];
      if (b < cost.size() && cost(b) != 0.0) t_.row(m) += cost(b) * t_.row(i);
    }
  }

  void drop_row(Index row) {
    const Index last = t_.rows() - 1;
    Eigen::MatrixXd t(t_.rows() - 1, t_.cols());
    Index r = 0;
    for (Index i = 0; i <= last; ++i)
      if (i != row) t.row(r++) = t_.row(i);
    t_ = std::move(t);
    basis_.erase(basis_.begin() + row);
  }

  void keep_columns(Index n) {
    Eigen::MatrixXd t(t_.rows(), n + 1);
    t.leftCols(n) = t_.leftCols(n);
    t.col(n) = t_.col(t_.cols() - 1);
    t_ = std::move(t);
  }

  double value() const { return t_(rows(), cols()); }
  double entry(Index i, Index j) const { return t_(i, j); }
  double rhs(Index i) const { return t_(i, cols()); }
  Index basic(Index i) const { return basis_[i]; }

 private:
  Eigen::MatrixXd t_;
  std::vector<Index> basis_;
};

}  // namespace

LpSolution lp_simplex(const LpProblem& p) {
  const Index n = p.objective.size();
  const Index m = p.constraints.rows();
  if (p.constraints.cols() != n || p.bounds.size() != m)
    throw LpError(LpStatus::malformed, "LP shapes are inconsistent");
  if (!p.objective.allFinite() || !p.constraints.allFinite() || !p.bounds.allFinite())
    throw LpError(LpStatus::malformed, "LP data must be finite");

  // Columns: u (n), v (n), slack (m), artificial (one per negative rhs).
  std::vector<Index> negative_rows;
  for (Index i = 0; i < m; ++i)
    if (p.bounds(i) < 0.0) negative_rows.push_back(i);
  const Index n_art = static_cast<Index>(negative_rows.size());
  const Index n_struct = 2 * n + m;
  const Index n_cols = n_struct + n_art;

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n_cols + 1);
  std::vector<Index> basis(m);
  Index art = 0;
  for (Index i = 0; i < m; ++i) {
    const double sign = p.bounds(i) < 0.0 ? -1.0 : 1.0;
    t.block(i, 0, 1, n) = sign * p.constraints.row(i);
    t.block(i, n, 1, n) = -sign * p.constraints.row(i);
    t(i, 2 * n + i) = sign;
    t(i, n_cols) = sign * p.bounds(i);
    if (sign < 0.0) {
      t(i, n_struct + art) = 1.0;
      basis[i] = n_struct + art;
      ++art;
    } else {
      basis[i] = 2 * n + i;
    }
  }

  Tableau tab(std::move(t), std::move(basis));
  LpSolution sol;

  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n_cols);
    phase1.tail(n_art).setConstant(-1.0);
    tab.set_objective(phase1);
    tab.optimize(n_cols, sol.pivots);
    const double scale = std::max(1.0, p.bounds.cwiseAbs().maxCoeff());
    if (tab.value() < -1e-8 * scale)
      throw LpError(LpStatus::infeasible, "LP is infeasible");
    // Drive zero-level artificials out of the basis.
    for (Index i = tab.rows() - 1; i >= 0; --i) {
      if (tab.basic(i) < n_struct) continue;
      Index col = -1;
      for (Index j = 0; j < n_struct; ++j) {
        if (std::abs(tab.entry(i, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0)
        tab.pivot(i, col);
      else
        tab.drop_row(i);
    }
    tab.keep_columns(n_struct);
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_struct);
  cost.head(n) = p.objective;
  cost.segment(n, n) = -p.objective;
  tab.set_objective(cost);
  if (!tab.optimize(n_struct, sol.pivots))
    throw LpError(LpStatus::unbounded, "LP objective is unbounded");

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n_struct);
  for (Index i = 0; i < tab.rows(); ++i) z(tab.basic(i)) = tab.rhs(i);
  sol.x = z.head(n) - z.segment(n, n);
  sol.value = p.objective.dot(sol.x);
  return sol;
}

}  // namespace mwd
