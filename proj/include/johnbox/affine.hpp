#ifndef JOHNBOX_AFFINE_HPP
#define JOHNBOX_AFFINE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "johnbox/body.hpp"
#include "johnbox/decomposition.hpp"
#include "johnbox/solver.hpp"

namespace johnbox {

/// x -> M x + a with M nonsingular.
struct AffineMap {
  Matrix M;
  Vector a;

  AffineMap() = default;
  AffineMap(Matrix m, Vector shift);

  static AffineMap identity(Index d) { return {Matrix::Identity(d, d), Vector::Zero(d)}; }

  Index dim() const { return M.rows(); }
  double log_abs_det() const;
  Vector apply(const Vector& x) const { return M * x + a; }
};

struct AffineOptions {
  int starts = 8;                    // seeded multi-start count
  std::uint64_t seed = 0;
  std::optional<AffineMap> start;    // single user start instead of multi-start
  bool keep_stationary_points = false;
};

struct AffineResult {
  AffineMap map;
  SolveReport report;
  PolarFactors<double> polar;         // M = A R, used to compare equivalent answers
  std::vector<double> history;        // log|det M| after every accepted step of the winning start
  std::vector<AffineMap> stationary;  // every start's end point, if requested
  std::vector<double> stationary_values;
  std::vector<bool> stationary_converged;
};

/// Locally maximizes log |det M| over the affine images M B + a contained in
/// C, i.e. subject to v_i.(M u_j + a) <= h_i for every facet i of C and
/// vertex u_j of B. The constraints are linear in (M, a) but log|det| is not
/// concave, so the result is a local maximizer on the det M > 0 branch. The
/// best of the seeded starts is returned; ties go to the earliest start.
///
/// Throws Precondition when B is not full-dimensional and Infeasible when no
/// strictly feasible start exists.
AffineResult max_affine_image(const VPolytope& inner, const HPolytope& container, const SolverConfig& cfg = {},
                              const AffineOptions& opt = {});

/// Theorem-3 contact pairs of M B + a in C. Every image vertex u on bd C is
/// paired with each unit facet normal active there. Throws NotContained when
/// the image leaves C by more than tol.
ContactSet contact_pairs(const VPolytope& inner, const HPolytope& container, const AffineMap& map, double tol);

}  // namespace johnbox

#endif  // JOHNBOX_AFFINE_HPP
