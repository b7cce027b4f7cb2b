#include "mwd/matrix_dual.hpp"

#include <cmath>
#include <sstream>

#include "mwd/pdhg.hpp"
#include "test_function.hpp"

namespace mwd {

namespace {

// Saddle form of the dual program with x = F (one block per grid point)
// and y = G (one block per adjacent gap, the matricial "flow"):
//   g(F)  = -<Delta, F> + indicator{||F_k|| <= kappa}
//   h*(G) = sum_k gap_k ||G_k||_*
//   (A F)_k = F_k - F_{k+1}
// The flow objective sum_k gap_k ||G_k||_* + kappa sum_k ||Delta_k - (A'G)_k||_*
// upper-bounds the distance for every G.
class DualSaddle {
 public:
  explicit DualSaddle(const DualProblem& p)
      : n_(p.dim), kappa_(p.kappa), gaps_(p.gaps), delta_(detail::to_blocks(p.deltas)) {
    magnitude_ = 0.0;
    for (const auto& d : delta_) magnitude_ += spectral::nuclear_norm(d);
  }

  Index dim() const { return n_; }
  std::size_t primal_count() const { return delta_.size(); }
  std::size_t dual_count() const { return gaps_.size(); }

  void apply(const Blocks& f, Blocks& out) const {
    for (std::size_t k = 0; k < gaps_.size(); ++k) out[k] = f[k] - f[k + 1];
  }

  void adjoint(const Blocks& g, Blocks& out) const {
    const std::size_t kk = delta_.size();
    for (std::size_t k = 0; k < kk; ++k) {
      out[k].setZero(n_, n_);
      if (k < gaps_.size()) out[k] += g[k];
      if (k > 0) out[k] -= g[k - 1];
    }
  }

  void prox_primal(Blocks& f, const std::vector<double>& tau) const {
    for (std::size_t k = 0; k < f.size(); ++k) {
      f[k] += tau[k] * delta_[k];
      spectral::clip(f[k], kappa_);
    }
  }

  void prox_dual(Blocks& g, const std::vector<double>& sigma) const {
    for (std::size_t k = 0; k < g.size(); ++k) spectral::shrink(g[k], sigma[k] * gaps_[k]);
  }

  std::vector<double> primal_preconditioner() const {
    std::vector<double> t(delta_.size(), 0.5);
    if (gaps_.empty()) {
      t.assign(delta_.size(), 1.0);
    } else {
      t.front() = t.back() = 1.0;
    }
    return t;
  }

  std::vector<double> dual_preconditioner() const {
    return std::vector<double>(gaps_.size(), 0.5);
  }

  double initial_primal_weight() const {
    // Ratio of the natural magnitudes of F (bounded by kappa and by the
    // grid diameter) and of the flow (bounded by the moved mass).
    double diameter = 0.0;
    for (double g : gaps_) diameter += g;
    const double f_scale = gaps_.empty() ? kappa_ : std::min(kappa_, diameter);
    return magnitude_ > 0.0 ? f_scale / magnitude_ : 1.0;
  }

  Bounds evaluate(const Blocks& f, const Blocks& g) const {
    Bounds b;
    b.lower = feasible_scale(f) * detail::pairing(f, delta_);
    Blocks div(delta_.size());
    for (auto& d : div) d.setZero(n_, n_);
    adjoint(g, div);
    double up = 0.0;
    for (std::size_t k = 0; k < gaps_.size(); ++k) up += gaps_[k] * spectral::nuclear_norm(g[k]);
    for (std::size_t k = 0; k < delta_.size(); ++k) {
      const ComplexMatrix slack = delta_[k] - div[k];
      up += kappa_ * spectral::nuclear_norm(slack);
    }
    b.upper = up;
    return b;
  }

  double gap_floor() const { return 1e-14 * kappa_ * magnitude_; }

  double feasible_scale(const Blocks& f) const {
    return detail::feasible_scale(f, gaps_, kappa_);
  }

 private:
  Index n_;
  double kappa_;
  std::vector<double> gaps_;
  Blocks delta_;
  double magnitude_;
};

DualCertificate certificate_from(const DualProblem& problem, const DualSaddle& saddle,
                                 const PdhgResult& r) {
  DualCertificate c;
  Blocks f = r.lower_x;
  const double t = saddle.feasible_scale(f);
  for (auto& b : f) b *= t;
  c.test_function = detail::from_blocks(f);
  c.value = certificate_value(problem, c.test_function);
  c.upper_bound = r.bounds.upper;
  c.feasibility_residual = certificate_residual(problem, c.test_function);
  c.iterations = r.iterations;
  c.converged = r.converged;
  return c;
}

}  // namespace

double DualCertificate::relative_gap() const {
  const double scale = std::max(std::abs(upper_bound), std::abs(value));
  return scale > 0.0 ? gap() / scale : 0.0;
}

DualConvergenceError::DualConvergenceError(DualCertificate best)
    : ConvergenceError(
          [&] {
            std::ostringstream os;
            os << "dual solver did not converge in " << best.iterations
               << " iterations (value " << best.value << ", upper bound " << best.upper_bound
               << ", relative gap " << best.relative_gap() << ")";
            return os.str();
          }(),
          best.iterations, best.gap(), best.feasibility_residual),
      best_(std::move(best)) {}

DualProblem assemble_dual(const MatrixMeasure& mu1, const MatrixMeasure& mu2, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  DualProblem p{mu1.grid(), mu1.dim(), mass_differences(mu1, mu2), kappa, mu1.grid().gaps()};
  return p;
}

double certificate_value(const DualProblem& problem,
                         const std::vector<HermitianMatrix>& test_function) {
  if (test_function.size() != problem.deltas.size())
    throw ShapeError("test function length differs from grid size");
  double v = 0.0;
  for (std::size_t k = 0; k < test_function.size(); ++k)
    v += trace_pairing(test_function[k], problem.deltas[k]);
  return v;
}

double certificate_residual(const DualProblem& problem,
                            const std::vector<HermitianMatrix>& test_function) {
  if (test_function.size() != problem.deltas.size())
    throw ShapeError("test function length differs from grid size");
  double r = 0.0;
  for (std::size_t k = 0; k < test_function.size(); ++k) {
    r = std::max(r, op_norm(test_function[k]) - problem.kappa);
    if (k + 1 < test_function.size())
      r = std::max(r, op_norm(test_function[k] - test_function[k + 1]) - problem.gaps[k]);
  }
  return std::max(r, 0.0);
}

DualCertificate solve_dual(const DualProblem& problem, const SolverOptions& opts) {
  if (!(problem.kappa > 0.0)) throw DomainError("kappa must be positive");
  if (problem.deltas.empty()) throw ShapeError("dual problem needs at least one grid point");
  if (problem.gaps.size() + 1 != problem.deltas.size())
    throw ShapeError("dual problem gaps must number K - 1");
  if (!(opts.tolerance > 0.0) || opts.max_iterations < 1)
    throw DomainError("solver tolerance and iteration budget must be positive");

  bool all_zero = true;
  for (const auto& d : problem.deltas) all_zero = all_zero && d.matrix().isZero(0.0);
  if (all_zero) {
    DualCertificate c;
    c.test_function.assign(problem.deltas.size(), HermitianMatrix::zero(problem.dim));
    c.converged = true;
    return c;
  }

  const DualSaddle saddle(problem);
  PdhgOptions po;
  po.max_iterations = opts.max_iterations;
  po.tolerance = opts.tolerance;
  po.primal_weight = opts.primal_weight;
  po.check_interval = opts.check_interval;
  const PdhgResult r = solve_pdhg(saddle, po);
  DualCertificate c = certificate_from(problem, saddle, r);
  if (!c.converged) throw DualConvergenceError(std::move(c));
  return c;
}

double dw1_kappa(const MatrixMeasure& mu1, const MatrixMeasure& mu2, double kappa,
                 const SolverOptions& opts) {
  return solve_dual(assemble_dual(mu1, mu2, kappa), opts).value;
}

}  // namespace mwd
