#pragma once

#include <Eigen/Dense>

#include "mwd/errors.hpp"

namespace mwd {

/// maximize objective' x  subject to  constraints * x <= bounds,  x free.
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd bounds;
};

struct LpSolution {
  double value = 0.0;
  Eigen::VectorXd x;
  long pivots = 0;
};

enum class LpStatus { infeasible, unbounded, malformed };

class LpError : public Error {
 public:
  LpError(LpStatus status, const std::string& what) : Error(what), status_(status) {}
  LpStatus status() const noexcept { return status_; }

 private:
  LpStatus status_;
};

/// Dense two-phase tableau simplex with Bland's rule (pivot tolerance 1e-9).
/// Meant for small problems (a few hundred variables at most). Free
/// variables are split into nonnegative parts internally.
LpSolution lp_simplex(const LpProblem& problem);

}  // namespace mwd
