#include "mwd/connes.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mwd/pdhg.hpp"

namespace mwd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Complex kI(0.0, 1.0);

// Spread of the spectrum, i.e. the norm of f -> [D, f] on Hermitian f.
double spread(const HermitianMatrix& d) {
  const RealVector ev = eigvalsh(d);
  return ev(ev.size() - 1) - ev(0);
}

// Saddle form with x = f (a single block) and y = (Y_1, ..., Y_m):
//   g(f)  = -s tr(Delta f) + indicator{||f|| <= kappa}
//   h*(Y) = sum_i ||Y_i||_*
//   L_i f = i [D_i, f]   (Hermitian),   L_i* Y = -i [D_i, Y]
class ConnesSaddle {
 public:
  ConnesSaddle(const ComplexMatrix& delta, const DiracSet& dirac, double kappa, double sign)
      : n_(dirac.dim()), kappa_(kappa), delta_(sign * delta) {
    for (const auto& d : dirac.operators()) {
      d_.push_back(d.matrix());
      norms_.push_back(spread(d));
    }
    magnitude_ = spectral::nuclear_norm(delta_);
  }

  Index dim() const { return n_; }
  std::size_t primal_count() const { return 1; }
  std::size_t dual_count() const { return d_.size(); }

  void apply(const Blocks& f, Blocks& out) const {
    for (std::size_t i = 0; i < d_.size(); ++i) {
      const ComplexMatrix c = kI * (d_[i] * f[0] - f[0] * d_[i]);
      out[i] = 0.5 * (c + c.adjoint());
    }
  }

  void adjoint(const Blocks& y, Blocks& out) const {
    ComplexMatrix s = ComplexMatrix::Zero(n_, n_);
    for (std::size_t i = 0; i < d_.size(); ++i) s += -kI * (d_[i] * y[i] - y[i] * d_[i]);
    out[0] = 0.5 * (s + s.adjoint());
  }

  void prox_primal(Blocks& f, const std::vector<double>& tau) const {
    f[0] += tau[0] * delta_;
    spectral::clip(f[0], kappa_);
  }

  void prox_dual(Blocks& y, const std::vector<double>& sigma) const {
    for (std::size_t i = 0; i < y.size(); ++i) spectral::shrink(y[i], sigma[i]);
  }

  std::vector<double> primal_preconditioner() const {
    double total = 0.0;
    for (double c : norms_) total += c;
    return {total > 0.0 ? 1.0 / total : 1.0};
  }

  std::vector<double> dual_preconditioner() const {
    std::vector<double> s;
    for (double c : norms_) s.push_back(c > 0.0 ? 1.0 / c : 1.0);
    return s;
  }

  double initial_primal_weight() const {
    // Directions commuting with every D_i let f grow up to kappa.
    return magnitude_ > 0.0 ? kappa_ / magnitude_ : 1.0;
  }

  Bounds evaluate(const Blocks& f, const Blocks& y) const {
    Bounds b;
    b.lower = feasible_scale(f[0]) * pairing(f[0]);
    Blocks lty(1);
    adjoint(y, lty);
    double up = kappa_ * spectral::nuclear_norm(delta_ - lty[0]);
    for (const auto& yi : y) up += spectral::nuclear_norm(yi);
    b.upper = up;
    return b;
  }

  double gap_floor() const { return 1e-14 * kappa_ * magnitude_; }

  double feasible_scale(const ComplexMatrix& f) const {
    double t = 1.0;
    const double r = spectral::op_norm(f);
    if (r > kappa_) t = kappa_ / r;
    Blocks lf(d_.size());
    apply(Blocks{f}, lf);
    for (const auto& c : lf) {
      const double cn = spectral::op_norm(c);
      if (cn > 1.0) t = std::min(t, 1.0 / cn);
    }
    return t;
  }

  double pairing(const ComplexMatrix& f) const {
    return (f.array() * delta_.conjugate().array()).sum().real();
  }

 private:
  Index n_;
  double kappa_;
  ComplexMatrix delta_;
  std::vector<ComplexMatrix> d_;
  std::vector<double> norms_;
  double magnitude_;
};

ConnesResult solve_sign(const ComplexMatrix& delta, const DiracSet& dirac, double kappa,
                        double sign, const PdhgOptions& po) {
  const ConnesSaddle saddle(delta, dirac, kappa, sign);
  const PdhgResult r = solve_pdhg(saddle, po);
  ConnesResult c;
  ComplexMatrix f = r.lower_x.empty() ? ComplexMatrix::Zero(dirac.dim(), dirac.dim())
                                      : ComplexMatrix(r.lower_x[0]);
  f *= saddle.feasible_scale(f);
  c.witness = HermitianMatrix::hermitian_part(sign * f);
  c.value = std::max(0.0, r.bounds.lower);
  c.upper_bound = r.bounds.upper;
  c.kappa = kappa;
  c.iterations = r.iterations;
  c.converged = r.converged;
  return c;
}

ConnesResult solve_finite(const State& rho1, const State& rho2, const DiracSet& dirac,
                          double kappa, const SolverOptions& opts) {
  const ComplexMatrix delta = rho1.matrix().matrix() - rho2.matrix().matrix();
  if (delta.isZero(0.0)) {
    ConnesResult c;
    c.witness = HermitianMatrix::zero(dirac.dim());
    c.kappa = kappa;
    c.converged = true;
    return c;
  }
  PdhgOptions po;
  po.max_iterations = opts.max_iterations;
  po.tolerance = opts.tolerance;
  po.primal_weight = opts.primal_weight;
  po.check_interval = opts.check_interval;
  // |tr(Delta f)|: both signs of the linear objective.
  ConnesResult plus = solve_sign(delta, dirac, kappa, 1.0, po);
  ConnesResult minus = solve_sign(delta, dirac, kappa, -1.0, po);
  ConnesResult best = plus.value >= minus.value ? plus : minus;
  best.upper_bound = std::max(plus.upper_bound, minus.upper_bound);
  best.iterations = plus.iterations + minus.iterations;
  best.converged = plus.converged && minus.converged;
  if (!best.converged) {
    std::ostringstream os;
    os << "Connes solver did not converge in " << best.iterations << " iterations (value "
       << best.value << ", upper bound " << best.upper_bound << ", kappa " << kappa << ")";
    throw ConvergenceError(os.str(), best.iterations, best.upper_bound - best.value, 0.0);
  }
  return best;
}

}  // namespace

State::State(HermitianMatrix rho) : rho_(std::move(rho)) {
  if (!is_psd(rho_)) throw ValidationError("state is not positive semidefinite");
  if (std::abs(rho_.trace() - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "state trace is " << rho_.trace() << ", expected 1";
    throw ValidationError(os.str());
  }
}

DiracSet::DiracSet(std::vector<HermitianMatrix> operators) : ops_(std::move(operators)) {
  if (ops_.empty()) throw ValidationError("Dirac set needs at least one operator");
  for (const auto& d : ops_)
    if (d.dim() != ops_.front().dim()) throw ShapeError("Dirac operators differ in dimension");
}

double connes_residual(const HermitianMatrix& f, const DiracSet& dirac, double kappa) {
  if (f.dim() != dirac.dim()) throw ShapeError("witness and Dirac operators differ in dimension");
  double r = std::isfinite(kappa) ? op_norm(f) - kappa : 0.0;
  for (const auto& d : dirac.operators()) r = std::max(r, op_norm(commutator(d, f)) - 1.0);
  return std::max(r, 0.0);
}

ConnesResult connes_distance(const State& rho1, const State& rho2, const DiracSet& dirac,
                             double kappa, const SolverOptions& opts,
                             const ConnesProbeOptions& probe) {
  if (rho1.dim() != rho2.dim() || rho1.dim() != dirac.dim())
    throw ShapeError("states and Dirac operators must share a dimension");
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  if (!(opts.tolerance > 0.0) || opts.max_iterations < 1)
    throw DomainError("solver tolerance and iteration budget must be positive");
  if (std::isfinite(kappa)) return solve_finite(rho1, rho2, dirac, kappa, opts);

  if (!(probe.start_kappa > 0.0) || !(probe.kappa_cap >= probe.start_kappa))
    throw DomainError("probe needs 0 < start_kappa <= kappa_cap");
  ConnesResult prev = solve_finite(rho1, rho2, dirac, probe.start_kappa, opts);
  long iterations = prev.iterations;
  for (double k = 2.0 * probe.start_kappa;; k *= 2.0) {
    if (k > probe.kappa_cap) {
      prev.unbounded = true;
      prev.iterations = iterations;
      return prev;
    }
    ConnesResult cur = solve_finite(rho1, rho2, dirac, k, opts);
    iterations += cur.iterations;
    const double scale = std::max(std::abs(cur.value), std::abs(prev.value));
    if (std::abs(cur.value - prev.value) <= probe.stable_change * scale) {
      cur.iterations = iterations;
      return cur;
    }
    prev = std::move(cur);
  }
}

ProbeReport unboundedness_probe(const State& rho1, const State& rho2, const DiracSet& dirac,
                                const std::vector<double>& kappas, const SolverOptions& opts) {
  ProbeReport r;
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (!(kappas[i] > 0.0) || !std::isfinite(kappas[i]))
      throw DomainError("probe kappas must be positive and finite");
    if (i > 0 && !(kappas[i] > kappas[i - 1]))
      throw DomainError("probe kappas must be strictly increasing");
  }
  for (double k : kappas) {
    r.kappas.push_back(k);
    r.values.push_back(connes_distance(rho1, rho2, dirac, k, opts).value);
  }
  for (std::size_t i = 0; i + 1 < r.values.size(); ++i)
    r.slopes.push_back((r.values[i + 1] - r.values[i]) / (r.kappas[i + 1] - r.kappas[i]));
  return r;
}

}  // namespace mwd
