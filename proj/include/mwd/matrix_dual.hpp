#pragma once

#include <vector>

#include "mwd/errors.hpp"
#include "mwd/measures.hpp"

namespace mwd {

struct SolverOptions {
  long max_iterations = 200000;
  /// Relative duality gap at which a solve is declared converged.
  double tolerance = 1e-6;
  /// Initial primal/dual step ratio; <= 0 picks one from the data.
  double primal_weight = 0.0;
  /// Iterations between bound evaluations (restart and stopping checks).
  long check_interval = 32;
};

/// Dual program for the matricial W1-kappa distance:
///   maximize sum_k tr(F_k Delta_k)
///   s.t. ||F_k|| <= kappa,  ||F_k - F_{k+1}|| <= theta_{k+1} - theta_k.
/// Adjacent Lipschitz constraints imply all pairwise ones on a line.
struct DualProblem {
  Grid grid;
  Index dim = 1;
  std::vector<HermitianMatrix> deltas;
  double kappa = 1.0;
  std::vector<double> gaps;
};

/// Optimal test function witnessing a metric value.
struct DualCertificate {
  std::vector<HermitianMatrix> test_function;
  /// sum_k tr(F_k Delta_k); a certified lower bound on the distance.
  double value = 0.0;
  /// Best primal (flow) objective seen; a certified upper bound.
  double upper_bound = 0.0;
  /// max over constraints of the violation, after feasibility scaling.
  double feasibility_residual = 0.0;
  long iterations = 0;
  bool converged = false;

  double gap() const { return upper_bound - value; }
  double relative_gap() const;
};

class DualConvergenceError : public ConvergenceError {
 public:
  explicit DualConvergenceError(DualCertificate best);
  const DualCertificate& best() const noexcept { return best_; }

 private:
  DualCertificate best_;
};

DualProblem assemble_dual(const MatrixMeasure& mu1, const MatrixMeasure& mu2, double kappa);

/// First-order primal-dual solve. Throws DualConvergenceError (carrying
/// the best certificate) when the iteration budget runs out.
DualCertificate solve_dual(const DualProblem& problem, const SolverOptions& opts = {});

/// Distance value of solve_dual(assemble_dual(...)). Exactly 0 when all
/// mass differences vanish.
double dw1_kappa(const MatrixMeasure& mu1, const MatrixMeasure& mu2, double kappa,
                 const SolverOptions& opts = {});

/// Recomputes sum_k tr(F_k Delta_k).
double certificate_value(const DualProblem& problem,
                         const std::vector<HermitianMatrix>& test_function);

/// Largest violation of the box and adjacent Lipschitz constraints.
double certificate_residual(const DualProblem& problem,
                            const std::vector<HermitianMatrix>& test_function);

}  // namespace mwd
