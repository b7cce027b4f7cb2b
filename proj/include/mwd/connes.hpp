#pragma once

#include <vector>

#include "mwd/matrix_dual.hpp"

namespace mwd {

/// Density matrix: PSD with unit trace (within 1e-10).
class State {
 public:
  explicit State(HermitianMatrix rho);
  Index dim() const noexcept { return rho_.dim(); }
  const HermitianMatrix& matrix() const noexcept { return rho_; }

 private:
  HermitianMatrix rho_;
};

/// Nonempty list of Hermitian Dirac operators of a common dimension.
class DiracSet {
 public:
  explicit DiracSet(std::vector<HermitianMatrix> operators);
  Index dim() const noexcept { return ops_.front().dim(); }
  std::size_t size() const noexcept { return ops_.size(); }
  const std::vector<HermitianMatrix>& operators() const noexcept { return ops_; }
  const HermitianMatrix& operator[](std::size_t i) const { return ops_.at(i); }

 private:
  std::vector<HermitianMatrix> ops_;
};

struct ConnesResult {
  /// sup |tr((rho1 - rho2) f)| over the feasible f; for kappa = +inf the
  /// stabilized probe value, or the last probe value when unbounded.
  double value = 0.0;
  /// Certified upper bound on the (finite-kappa) program value.
  double upper_bound = 0.0;
  /// Only set by the kappa = +inf probe.
  bool unbounded = false;
  /// Feasible witness attaining `value`.
  HermitianMatrix witness;
  /// kappa of the final solve (the probe reports where it stopped).
  double kappa = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct ConnesProbeOptions {
  double start_kappa = 1.0;
  /// Relative change between successive doublings treated as a limit.
  double stable_change = 1e-4;
  /// Beyond this kappa the value is reported unbounded.
  double kappa_cap = 1e6;
};

/// sup |tr((rho1 - rho2) f)| over Hermitian f with ||[D_i, f]|| <= 1 for
/// all i and ||f|| <= kappa. kappa = +inf runs the doubling probe.
/// Throws ShapeError on dimension mismatch and ConvergenceError when a
/// finite-kappa solve runs out of budget.
ConnesResult connes_distance(const State& rho1, const State& rho2, const DiracSet& dirac,
                             double kappa, const SolverOptions& opts = {},
                             const ConnesProbeOptions& probe = {});

struct ProbeReport {
  std::vector<double> kappas;
  std::vector<double> values;
  /// (values[i+1] - values[i]) / (kappas[i+1] - kappas[i])
  std::vector<double> slopes;
};

/// connes_distance at each kappa of an increasing positive list.
ProbeReport unboundedness_probe(const State& rho1, const State& rho2, const DiracSet& dirac,
                                const std::vector<double>& kappas,
                                const SolverOptions& opts = {});

/// Largest violation of ||f|| <= kappa and ||[D_i, f]|| <= 1.
double connes_residual(const HermitianMatrix& f, const DiracSet& dirac, double kappa);

}  // namespace mwd
