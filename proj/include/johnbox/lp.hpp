#ifndef JOHNBOX_LP_HPP
#define JOHNBOX_LP_HPP

// Small dense two-phase simplex. Problem sizes here are a few hundred rows at
// most, so a full tableau with Bland's anti-cycling rule is adequate.

#include "johnbox/lift.hpp"

namespace johnbox::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Vector x;
  double objective = 0.0;
  double infeasibility = 0.0;  // phase-1 optimum, sum of artificial values
};

/// min c.x  s.t.  A x = b, x >= 0.
Result solve_standard(const Matrix& a, const Vector& b, const Vector& c, double tol = 1e-9);

/// max c.x  s.t.  G x <= h, x free.
Result maximize(const Vector& c, const Matrix& g, const Vector& h, double tol = 1e-9);

/// Phase 1 only: does A x = b have a solution with x >= 0? The returned
/// infeasibility is the minimal l1 norm of the residual.
Result find_nonnegative(const Matrix& a, const Vector& b, double tol = 1e-9);

}  // namespace johnbox::lp

#endif  // JOHNBOX_LP_HPP
