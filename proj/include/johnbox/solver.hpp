#ifndef JOHNBOX_SOLVER_HPP
#define JOHNBOX_SOLVER_HPP

#include <vector>

#include "johnbox/body.hpp"
#include "johnbox/lift.hpp"

namespace johnbox {

/// The ellipsoid A B^d + a, A symmetric positive definite.
struct EllipsoidParam {
  Sym A;
  Vector a;

  EllipsoidParam() = default;
  EllipsoidParam(Sym shape, Vector center);

  static EllipsoidParam unit_ball(Index d) { return {Sym::identity(d), Vector::Zero(d)}; }

  Index dim() const { return A.dim(); }
  double log_det() const;
};

struct SolverConfig {
  double tol_kkt = 1e-8;
  int max_newton_iters = 200;
  double barrier_mu0 = 1.0;
  double barrier_shrink = 0.2;
  double min_mu = 1e-10;
  double line_search_beta = 0.5;

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  double final_mu = 0.0;
  double objective = 0.0;  // log det A (log |det M| for affine images)
  double max_constraint_violation = 0.0;
  bool converged = false;
};

enum class SolveMode { Symmetric, General };

struct MvieResult {
  EllipsoidParam ellipsoid;
  SolveReport report;
};

/// Maximum-volume ellipsoid inscribed in C.
///
/// Each facet (v_i, h_i) contributes the single second-order constraint
/// ||A v_i|| + a.v_i <= h_i, which is the supremum over u in S^{d-1} of the
/// halfspace family A.(u (x) v_i) + a.v_i <= h_i. The barrier problem
///
///   max  log det A + mu * sum_i log(h_i - a.v_i - ||A v_i||)
///
/// is solved by damped Newton steps in (svec(A), a) coordinates while mu
/// shrinks geometrically from `barrier_mu0` to `min_mu`. In symmetric mode the
/// center is pinned to o and C must be centrally symmetric.
///
/// Throws Infeasible when the origin is not interior, Asymmetric for a
/// symmetric-mode solve on an asymmetric body and NotConverged when the
/// Newton budget runs out.
MvieResult mvie(const HPolytope& body, SolveMode mode, const SolverConfig& cfg = {});

/// s_i = h_i - a.v_i - ||A v_i||.
Vector constraint_slacks(const HPolytope& body, const EllipsoidParam& e);

/// Image of C under x -> A^{-1}(x - a).
HPolytope john_position(const HPolytope& body, const EllipsoidParam& e);

struct Contact {
  Vector u;     // contact point in John-position coordinates (unit)
  Index facet;  // facet of C it comes from
};

inline double default_contact_tol(const HPolytope& body) { return 1e-6 * std::max(1.0, body.max_offset()); }

/// Contact points of the ellipsoid with the facets whose slack is <= tol,
/// mapped to John position: u = A v / ||A v||. Coincident facets yield one
/// contact.
std::vector<Contact> contact_points(const HPolytope& body, const EllipsoidParam& e, double tol);

}  // namespace johnbox

#endif  // JOHNBOX_SOLVER_HPP
