#pragma once

// Restarted primal-dual hybrid gradient for the saddle problems behind
// every test-function metric in this library:
//
//   min_x max_y  g(x) + <A x, y> - h*(y)
//
// where x and y are lists of Hermitian blocks and both proximal maps are
// spectral (clip or shrink). Each problem also supplies certified lower
// and upper bounds on the target value, so the duality gap drives both
// the restart scheme and the stopping test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "mwd/hermitian.hpp"

namespace mwd {

using Blocks = std::vector<ComplexMatrix>;

struct Bounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double gap() const { return upper - lower; }
};

struct PdhgOptions {
  long max_iterations = 200000;
  /// Stop once upper - lower <= tolerance * max(|upper|, |lower|) + floor.
  double tolerance = 1e-6;
  /// Initial ratio tau / sigma; <= 0 lets the problem choose.
  double primal_weight = 0.0;
  long check_interval = 32;
  /// Rebalance the step ratio at restarts.
  bool adapt_weight = true;
  /// Called after every bound evaluation with (iteration, best bounds, weight).
  std::function<void(long, const Bounds&, double)> trace;
};

struct PdhgResult {
  Blocks lower_x, lower_y;  // iterate attaining `bounds.lower`
  Blocks upper_x, upper_y;  // iterate attaining `bounds.upper`
  Bounds bounds;
  long iterations = 0;
  bool converged = false;
};

namespace blocks {

inline Blocks zeros(std::size_t count, Index n) {
  return Blocks(count, ComplexMatrix::Zero(n, n));
}

/// Distance in the metric sum_i ||a_i - b_i||_F^2 / scale_i.
inline double distance(const Blocks& a, const Blocks& b, const std::vector<double>& scale) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).squaredNorm() / scale[i];
  return std::sqrt(s);
}

}  // namespace blocks

/// Requirements on a saddle problem consumed by solve_pdhg.
template <class P>
concept SaddleProblem = requires(const P& p, Blocks& b, const Blocks& cb,
                                 const std::vector<double>& steps) {
  { p.dim() } -> std::convertible_to<Index>;
  { p.primal_count() } -> std::convertible_to<std::size_t>;
  { p.dual_count() } -> std::convertible_to<std::size_t>;
  p.apply(cb, b);
  p.adjoint(cb, b);
  p.prox_primal(b, steps);
  p.prox_dual(b, steps);
  { p.primal_preconditioner() } -> std::convertible_to<std::vector<double>>;
  { p.dual_preconditioner() } -> std::convertible_to<std::vector<double>>;
  { p.initial_primal_weight() } -> std::convertible_to<double>;
  { p.evaluate(cb, cb) } -> std::convertible_to<Bounds>;
  { p.gap_floor() } -> std::convertible_to<double>;
};

template <SaddleProblem Problem>
PdhgResult solve_pdhg(const Problem& problem, const PdhgOptions& opts) {
  const Index n = problem.dim();
  const std::size_t nx = problem.primal_count(), ny = problem.dual_count();
  const std::vector<double> tx = problem.primal_preconditioner();
  const std::vector<double> sy = problem.dual_preconditioner();
  double weight = opts.primal_weight > 0.0 ? opts.primal_weight : problem.initial_primal_weight();

  Blocks x = blocks::zeros(nx, n), y = blocks::zeros(ny, n);
  Blocks x_next = x, y_next = y, aty = x, ax = y;
  Blocks x_sum = x, y_sum = y;
  Blocks x_restart = x, y_restart = y;
  long since_restart = 0;

  std::vector<double> tau(nx), sigma(ny);
  auto set_steps = [&] {
    // Pock-Chambolle diagonal preconditioning keeps ||S^1/2 A T^1/2|| <= 1.
    for (std::size_t j = 0; j < nx; ++j) tau[j] = 0.99 * weight * tx[j];
    for (std::size_t i = 0; i < ny; ++i) sigma[i] = 0.99 * sy[i] / weight;
  };
  set_steps();

  PdhgResult out;
  auto record = [&](const Blocks& bx, const Blocks& by, const Bounds& b) {
    if (b.lower > out.bounds.lower) {
      out.bounds.lower = b.lower;
      out.lower_x = bx;
      out.lower_y = by;
    }
    if (b.upper < out.bounds.upper) {
      out.bounds.upper = b.upper;
      out.upper_x = bx;
      out.upper_y = by;
    }
  };
  auto done = [&] {
    const Bounds& b = out.bounds;
    const double scale = std::max(std::abs(b.upper), std::abs(b.lower));
    return b.gap() <= opts.tolerance * scale + problem.gap_floor();
  };

  Bounds start = problem.evaluate(x, y);
  record(x, y, start);
  double restart_gap = start.gap();
  double last_candidate_gap = std::numeric_limits<double>::infinity();
  if (done()) {
    out.converged = true;
    return out;
  }

  const long check = std::max(1L, opts.check_interval);
  for (long it = 1; it <= opts.max_iterations; ++it) {
    problem.adjoint(y, aty);
    for (std::size_t j = 0; j < nx; ++j) x_next[j] = x[j] - tau[j] * aty[j];
    problem.prox_primal(x_next, tau);
    // Extrapolate in place: x <- 2 x_next - x.
    for (std::size_t j = 0; j < nx; ++j) x[j] = 2.0 * x_next[j] - x[j];
    problem.apply(x, ax);
    for (std::size_t i = 0; i < ny; ++i) y_next[i] = y[i] + sigma[i] * ax[i];
    problem.prox_dual(y_next, sigma);
    std::swap(x, x_next);
    std::swap(y, y_next);
    for (std::size_t j = 0; j < nx; ++j) x_sum[j] += x[j];
    for (std::size_t i = 0; i < ny; ++i) y_sum[i] += y[i];
    ++since_restart;
    out.iterations = it;

    if (it % check != 0 && it != opts.max_iterations) continue;

    Blocks x_avg = x_sum, y_avg = y_sum;
    const double inv = 1.0 / static_cast<double>(since_restart);
    for (auto& b : x_avg) b *= inv;
    for (auto& b : y_avg) b *= inv;
    const Bounds b_cur = problem.evaluate(x, y);
    const Bounds b_avg = problem.evaluate(x_avg, y_avg);
    record(x, y, b_cur);
    record(x_avg, y_avg, b_avg);
    if (opts.trace) opts.trace(it, out.bounds, weight);
    if (done()) {
      out.converged = true;
      return out;
    }

    const bool use_avg = b_avg.gap() < b_cur.gap();
    const double candidate_gap = use_avg ? b_avg.gap() : b_cur.gap();
    const bool restart =
        candidate_gap <= 0.2 * restart_gap ||
        (candidate_gap <= 0.8 * restart_gap && candidate_gap > last_candidate_gap) ||
        static_cast<double>(since_restart) >= 0.36 * static_cast<double>(it);
    last_candidate_gap = candidate_gap;
    if (!restart) continue;

    if (use_avg) {
      x = std::move(x_avg);
      y = std::move(y_avg);
    }
    // Balance primal and dual movement in the preconditioned metric.
    const double dx = blocks::distance(x, x_restart, tx);
    const double dy = blocks::distance(y, y_restart, sy);
    if (opts.adapt_weight && dx > 1e-12 && dy > 1e-12 && std::isfinite(dx / dy)) {
      weight = std::exp(0.5 * std::log(dx / dy) + 0.5 * std::log(weight));
      set_steps();
    }
    x_restart = x;
    y_restart = y;
    x_sum = x;
    y_sum = y;
    // Sums restart from the candidate itself as the first averaged term.
    since_restart = 1;
    restart_gap = candidate_gap;
    last_candidate_gap = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace mwd
