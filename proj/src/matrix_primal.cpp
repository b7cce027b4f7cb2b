#include "mwd/matrix_primal.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mwd/pdhg.hpp"
#include "test_function.hpp"

namespace mwd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Saddle form of the transport program with x = plan blocks m_ij
// (row-major, K*K of them) and y = (Y_1..Y_K, Z_1..Z_K) multipliers for
// the row and column marginals:
//   g(m)     = sum_ij d_ij ||m_ij||_*
//   h*(Y, Z) = sum_i tr(Y_i M1_i) + sum_j tr(Z_j M2_j)
//              (+ indicators ||Y_i||, ||Z_j|| <= kappa when unbalanced)
// (Z - Y) / 2 is a test function for the dual program once scaled to be
// Lipschitz, which yields the lower bound.
class TransportSaddle {
 public:
  TransportSaddle(const MatrixMeasure& mu1, const MatrixMeasure& mu2, double kappa)
      : k_(mu1.size()),
        n_(mu1.dim()),
        kappa_(kappa),
        gaps_(mu1.grid().gaps()),
        points_(mu1.grid().points()),
        first_(detail::to_blocks(mu1.masses())),
        second_(detail::to_blocks(mu2.masses())) {
    delta_.reserve(k_);
    mass_ = 0.0;
    for (std::size_t i = 0; i < k_; ++i) {
      delta_.push_back(first_[i] - second_[i]);
      mass_ += spectral::nuclear_norm(first_[i]) + spectral::nuclear_norm(second_[i]);
    }
  }

  Index dim() const { return n_; }
  std::size_t primal_count() const { return k_ * k_; }
  std::size_t dual_count() const { return 2 * k_; }
  double distance(std::size_t i, std::size_t j) const { return std::abs(points_[i] - points_[j]); }
  bool balanced() const { return !std::isfinite(kappa_); }

  void apply(const Blocks& m, Blocks& out) const {
    for (auto& b : out) b.setZero(n_, n_);
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j) {
        const ComplexMatrix& b = m[i * k_ + j];
        out[i] += b;
        out[k_ + j] += b;
      }
  }

  void adjoint(const Blocks& y, Blocks& out) const {
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j) out[i * k_ + j] = y[i] + y[k_ + j];
  }

  void prox_primal(Blocks& m, const std::vector<double>& tau) const {
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j) {
        const std::size_t idx = i * k_ + j;
        if (i != j) spectral::shrink(m[idx], tau[idx] * distance(i, j));
      }
  }

  void prox_dual(Blocks& y, const std::vector<double>& sigma) const {
    for (std::size_t i = 0; i < k_; ++i) {
      y[i] -= sigma[i] * first_[i];
      y[k_ + i] -= sigma[k_ + i] * second_[i];
      if (!balanced()) {
        spectral::clip(y[i], kappa_);
        spectral::clip(y[k_ + i], kappa_);
      }
    }
  }

  std::vector<double> primal_preconditioner() const { return std::vector<double>(k_ * k_, 0.5); }
  std::vector<double> dual_preconditioner() const {
    return std::vector<double>(2 * k_, 1.0 / static_cast<double>(k_));
  }

  double initial_primal_weight() const {
    double diameter = points_.back() - points_.front();
    double f_scale = balanced() ? diameter : std::min(kappa_, diameter);
    if (!(f_scale > 0.0)) f_scale = balanced() ? 1.0 : kappa_;
    return mass_ > 0.0 ? mass_ / (static_cast<double>(k_) * f_scale) : 1.0;
  }

  // Lower bound from the multipliers, upper bound from the plan.
  Bounds evaluate(const Blocks& m, const Blocks& y) const {
    Bounds b;
    b.lower = lower_bound(y);
    b.upper = balanced() ? cost(repaired(m)) : objective(m);
    return b;
  }

  double gap_floor() const {
    const double f_scale = balanced() ? (points_.back() - points_.front()) : kappa_;
    return 1e-14 * f_scale * mass_;
  }

  double lower_bound(const Blocks& y) const {
    Blocks phi(k_);
    for (std::size_t i = 0; i < k_; ++i) phi[i] = 0.5 * (y[k_ + i] - y[i]);
    const double t = detail::feasible_scale(phi, gaps_, kappa_);
    return t * detail::pairing(phi, delta_);
  }

  double cost(const Blocks& m) const {
    double c = 0.0;
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j)
        if (i != j) c += distance(i, j) * spectral::nuclear_norm(m[i * k_ + j]);
    return c;
  }

  double objective(const Blocks& m) const {
    Blocks marg(2 * k_);
    apply(m, marg);
    double tv = 0.0;
    for (std::size_t i = 0; i < k_; ++i) {
      tv += spectral::nuclear_norm(first_[i] - marg[i]);
      tv += spectral::nuclear_norm(second_[i] - marg[k_ + i]);
    }
    return cost(m) + kappa_ * tv;
  }

  // Routes the marginal residual through grid point 0 so that the plan
  // reproduces both marginals (exactly when total masses agree).
  Blocks repaired(Blocks m) const {
    Blocks marg(2 * k_);
    apply(m, marg);
    ComplexMatrix col_excess = ComplexMatrix::Zero(n_, n_);
    for (std::size_t i = 0; i < k_; ++i) m[i * k_] += first_[i] - marg[i];
    for (std::size_t j = 1; j < k_; ++j) {
      const ComplexMatrix f = second_[j] - marg[k_ + j];
      m[j] += f;
      col_excess += f;
    }
    m[0] -= col_excess;
    return m;
  }

 private:
  std::size_t k_;
  Index n_;
  double kappa_;
  std::vector<double> gaps_;
  std::vector<double> points_;
  Blocks first_, second_, delta_;
  double mass_;
};

PdhgOptions pdhg_options(const SolverOptions& opts) {
  if (!(opts.tolerance > 0.0) || opts.max_iterations < 1)
    throw DomainError("solver tolerance and iteration budget must be positive");
  PdhgOptions po;
  po.max_iterations = opts.max_iterations;
  po.tolerance = opts.tolerance;
  po.primal_weight = opts.primal_weight;
  po.check_interval = opts.check_interval;
  return po;
}

TransportSolution identity_plan(const MatrixMeasure& mu1, const MatrixMeasure& mu2,
                                double kappa) {
  const std::size_t k = mu1.size();
  std::vector<HermitianMatrix> plan(k * k, HermitianMatrix::zero(mu1.dim()));
  for (std::size_t i = 0; i < k; ++i) plan[i * k + i] = mu1.mass(i);
  TransportSolution s = evaluate_plan(mu1, mu2, kappa, std::move(plan));
  s.converged = true;
  return s;
}

bool identical(const MatrixMeasure& mu1, const MatrixMeasure& mu2) {
  for (std::size_t k = 0; k < mu1.size(); ++k)
    if (!(mu1.mass(k) == mu2.mass(k))) return false;
  return true;
}

}  // namespace

PrimalConvergenceError::PrimalConvergenceError(TransportSolution best)
    : ConvergenceError(
          [&] {
            std::ostringstream os;
            os << "transport solver did not converge in " << best.iterations
               << " iterations (objective " << best.objective << ", lower bound "
               << best.dual_bound << ")";
            return os.str();
          }(),
          best.iterations, best.objective - best.dual_bound, 0.0),
      best_(std::move(best)) {}

TransportSolution evaluate_plan(const MatrixMeasure& mu1, const MatrixMeasure& mu2,
                                double kappa, std::vector<HermitianMatrix> plan) {
  require_compatible(mu1, mu2);
  const std::size_t k = mu1.size();
  if (plan.size() != k * k) throw ShapeError("plan must hold K*K blocks");
  TransportSolution s;
  s.grid_size = k;
  s.denoised_first.assign(k, HermitianMatrix::zero(mu1.dim()));
  s.denoised_second.assign(k, HermitianMatrix::zero(mu1.dim()));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const HermitianMatrix& b = plan[i * k + j];
      if (b.dim() != mu1.dim()) throw ShapeError("plan block dimension mismatch");
      s.denoised_first[i] += b;
      s.denoised_second[j] += b;
      if (i != j) s.transport_cost += mu1.grid().distance(i, j) * nuclear_norm(b);
    }
  for (std::size_t i = 0; i < k; ++i) {
    s.tv_penalty += nuclear_norm(mu1.mass(i) - s.denoised_first[i]);
    s.tv_penalty += nuclear_norm(mu2.mass(i) - s.denoised_second[i]);
  }
  s.objective = s.transport_cost + (std::isfinite(kappa) ? kappa * s.tv_penalty : 0.0);
  s.plan = std::move(plan);
  return s;
}

TransportSolution solve_unbalanced_primal(const MatrixMeasure& mu1, const MatrixMeasure& mu2,
                                          double kappa, const SolverOptions& opts) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be positive");
  require_compatible(mu1, mu2);
  const PdhgOptions po = pdhg_options(opts);
  if (identical(mu1, mu2)) return identity_plan(mu1, mu2, kappa);

  const TransportSaddle saddle(mu1, mu2, kappa);
  const PdhgResult r = solve_pdhg(saddle, po);
  TransportSolution s = evaluate_plan(mu1, mu2, kappa, detail::from_blocks(r.upper_x));
  s.dual_bound = r.bounds.lower;
  s.iterations = r.iterations;
  s.converged = r.converged;
  if (!s.converged) throw PrimalConvergenceError(std::move(s));
  return s;
}

TransportSolution solve_balanced_primal(const MatrixMeasure& mu1, const MatrixMeasure& mu2,
                                        const SolverOptions& opts) {
  require_compatible(mu1, mu2);
  const HermitianMatrix t1 = total_mass(mu1), t2 = total_mass(mu2);
  const double scale = std::max({1e-300, op_norm(t1), op_norm(t2)});
  if (op_norm(t1 - t2) > 1e-8 * scale) {
    std::ostringstream os;
    os << "balanced transport needs equal total matricial mass (mismatch "
       << op_norm(t1 - t2) << " in operator norm)";
    throw PreconditionError(os.str());
  }
  const PdhgOptions po = pdhg_options(opts);
  if (identical(mu1, mu2)) return identity_plan(mu1, mu2, kInf);

  const TransportSaddle saddle(mu1, mu2, kInf);
  const PdhgResult r = solve_pdhg(saddle, po);
  TransportSolution s =
      evaluate_plan(mu1, mu2, kInf, detail::from_blocks(saddle.repaired(r.upper_x)));
  s.dual_bound = r.bounds.lower;
  s.iterations = r.iterations;
  s.converged = r.converged;
  if (!s.converged) throw PrimalConvergenceError(std::move(s));
  return s;
}

double w1_matrix_balanced(const MatrixMeasure& mu1, const MatrixMeasure& mu2,
                          const SolverOptions& opts) {
  return solve_balanced_primal(mu1, mu2, opts).objective;
}

DualityGapReport duality_gap(const MatrixMeasure& mu1, const MatrixMeasure& mu2, double kappa,
                             const SolverOptions& opts) {
  DualityGapReport g;
  g.primal = solve_unbalanced_primal(mu1, mu2, kappa, opts).objective;
  g.dual = dw1_kappa(mu1, mu2, kappa, opts);
  g.gap = g.primal - g.dual;
  const double scale = std::max(std::abs(g.primal), std::abs(g.dual));
  g.relative_gap = scale > 0.0 ? g.gap / scale : 0.0;
  return g;
}

}  // namespace mwd
