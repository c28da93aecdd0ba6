#ifndef JOHNBOX_SRC_BARRIER_HPP
#define JOHNBOX_SRC_BARRIER_HPP

// Path-following loop shared by the ellipsoid and affine-image solvers.
//
// A Problem provides
//   std::optional<double> value(const Vector& x, double mu)   // nullopt if x is infeasible
//   double objective(const Vector& x)                         // the quantity being maximized
//   void derivatives(const Vector& x, double mu, Vector& g, Matrix& h)
//   Vector newton_step(const Vector& g, const Matrix& h)
// where value() is the barrier function being minimized.

#include <optional>
#include <vector>

#include "johnbox/solver.hpp"

namespace johnbox::detail {

struct BarrierOptions {
  bool monotone_objective = false;  // reject steps that decrease objective()
  bool relative_centering = false;  // compare the intermediate decrement against mu * intermediate_decrement
  double intermediate_decrement = 1e-5;
  double final_decrement = 1e-14;
  double armijo = 1e-2;
};

struct BarrierOutcome {
  SolveReport report;
  double last_decrement = 0.0;
  std::vector<double> history;  // objective after every accepted step
};

template <typename Problem>
BarrierOutcome barrier_solve(Problem& problem, Vector& x, const SolverConfig& cfg, const BarrierOptions& opt = {}) {
  BarrierOutcome out;
  double mu = cfg.barrier_mu0;
  int iters = 0;
  bool budget_exhausted = false;
  Vector g;
  Matrix h;
  out.history.push_back(problem.objective(x));

  for (;;) {
    const bool last_stage = mu <= cfg.min_mu;
    const double target = last_stage           ? opt.final_decrement
                          : opt.relative_centering ? opt.intermediate_decrement * mu
                                                   : opt.intermediate_decrement;
    for (;;) {
      if (iters >= cfg.max_newton_iters) {
        budget_exhausted = true;
        break;
      }
      problem.derivatives(x, mu, g, h);
      const Vector step = problem.newton_step(g, h);
      const double dec = -g.dot(step);
      out.last_decrement = dec;
      if (!(dec > 0.0) || dec / 2.0 <= target) break;

      const double f0 = *problem.value(x, mu);
      const double obj0 = problem.objective(x);
      double t = 1.0;
      bool accepted = false, guarded = false;
      Vector trial;
      while (t > 1e-14) {
        trial = x + t * step;
        const std::optional<double> f = problem.value(trial, mu);
        if (f && *f <= f0 - opt.armijo * t * dec) {
          if (!opt.monotone_objective || problem.objective(trial) >= obj0 - 1e-12) {
            accepted = true;
            break;
          }
          guarded = true;
        }
        t *= cfg.line_search_beta;
      }
      ++iters;
      if (!accepted) break;  // numerical floor for this mu
      if (guarded && !last_stage) break;  // centering would lower the objective; tighten mu instead
      x = trial;
      out.history.push_back(problem.objective(x));
    }
    if (budget_exhausted || last_stage) break;
    mu = std::max(mu * cfg.barrier_shrink, cfg.min_mu);
  }

  out.report.iterations = iters;
  out.report.final_mu = mu;
  out.report.objective = problem.objective(x);
  out.report.converged = !budget_exhausted && mu <= cfg.min_mu && out.last_decrement / 2.0 <= cfg.tol_kkt;
  return out;
}

}  // namespace johnbox::detail

#endif  // JOHNBOX_SRC_BARRIER_HPP
