#pragma once

#include <vector>

#include "mwd/matrix_dual.hpp"

namespace mwd {

/// Matricial transport plan between two measures on a shared grid.
struct TransportSolution {
  /// plan[i * K + j] is the (Hermitian) mass moved from theta_i to theta_j.
  std::vector<HermitianMatrix> plan;
  std::size_t grid_size = 0;
  /// Row and column marginals of the plan. These are Hermitian but not
  /// necessarily PSD: the program leaves them unconstrained.
  std::vector<HermitianMatrix> denoised_first;
  std::vector<HermitianMatrix> denoised_second;
  /// sum_ij |theta_i - theta_j| ||m_ij||_*
  double transport_cost = 0.0;
  /// ||mu1 - mu1_hat||_TV + ||mu2 - mu2_hat||_TV
  double tv_penalty = 0.0;
  /// transport_cost + kappa * tv_penalty
  double objective = 0.0;
  /// Lower bound from the solver's test-function iterate.
  double dual_bound = 0.0;
  long iterations = 0;
  bool converged = false;

  const HermitianMatrix& block(std::size_t i, std::size_t j) const {
    return plan.at(i * grid_size + j);
  }
};

class PrimalConvergenceError : public ConvergenceError {
 public:
  explicit PrimalConvergenceError(TransportSolution best);
  const TransportSolution& best() const noexcept { return best_; }

 private:
  TransportSolution best_;
};

/// min over Hermitian plans m of
///   sum_ij |theta_i - theta_j| ||m_ij||_* + kappa (||mu1 - r(m)||_TV + ||mu2 - c(m)||_TV)
/// with r, c the row and column marginals. The TV slack is eliminated by
/// identifying the denoised measures with the plan marginals.
TransportSolution solve_unbalanced_primal(const MatrixMeasure& mu1, const MatrixMeasure& mu2,
                                          double kappa, const SolverOptions& opts = {});

/// Balanced matricial W1: transport with exact marginals. Requires equal
/// total matricial mass (PreconditionError otherwise). The returned plan
/// has its marginal residual routed through the first grid point, so
/// the cost is that of an exactly feasible plan.
TransportSolution solve_balanced_primal(const MatrixMeasure& mu1, const MatrixMeasure& mu2,
                                        const SolverOptions& opts = {});

double w1_matrix_balanced(const MatrixMeasure& mu1, const MatrixMeasure& mu2,
                          const SolverOptions& opts = {});

/// Recomputes the objective pieces of a plan against the original measures.
TransportSolution evaluate_plan(const MatrixMeasure& mu1, const MatrixMeasure& mu2,
                                double kappa, std::vector<HermitianMatrix> plan);

struct DualityGapReport {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double relative_gap = 0.0;
};

/// Solves the transport (primal) and test-function (dual) programs
/// independently and compares their values.
DualityGapReport duality_gap(const MatrixMeasure& mu1, const MatrixMeasure& mu2, double kappa,
                             const SolverOptions& opts = {});

}  // namespace mwd
