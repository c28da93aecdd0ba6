#ifndef JOHNBOX_CERTIFY_HPP
#define JOHNBOX_CERTIFY_HPP

// Independent verification of John decompositions. Every sum is recomputed
// from the contacts themselves; nothing produced by the solvers is trusted
// beyond the numbers written in the certificate.

#include <optional>
#include <string>
#include <vector>

#include "johnbox/affine.hpp"
#include "johnbox/body.hpp"
#include "johnbox/decomposition.hpp"
#include "johnbox/solver.hpp"

namespace johnbox {

inline constexpr double default_certify_tol = 1e-6;
inline constexpr double normal_cone_tol = 1e-8;

struct Residuals {
  double identity = 0.0;   // ||sum l_k u_k (x) u_k - I||_F, or with (x) v_k for theorem 3
  double center = 0.0;     // ||sum l_k u_k|| (theorem 2) or ||sum l_k v_k|| (theorem 3)
  double unit_norm = 0.0;  // max_k | ||u_k|| - 1 |, on v_k for theorem 3
  double boundary = 0.0;   // max_k |max_i (n_i.u_k - h_i)|
  double trace = 0.0;      // |sum l_k - d|, theorems 1 and 2
  double min_lambda = 0.0;
};

struct Verdict {
  bool unit_norm = false;
  bool on_boundary = false;
  bool positive_weights = false;
  bool identity = false;
  bool center = false;          // vacuous for theorem 1
  bool bounds = false;
  bool in_inner = false;        // theorem 3: u_k in the image of B
  bool normal_cone = false;     // theorem 3: v_k in N_C(u_k)
  bool valid = false;
  std::vector<std::string> failures;
  std::string conclusion;
};

struct Certificate {
  ContactSet contacts;                 // contacts.kind carries the theorem
  std::optional<EllipsoidParam> ellipsoid;
  std::optional<AffineMap> map;
  std::optional<VPolytope> inner;      // B for theorem 3, in its own coordinates
  std::optional<SolveReport> report;
  Residuals residuals;
  Bounds bounds;
  std::optional<Verdict> verdict;      // absent until checked

  int theorem() const { return theorem_number(contacts.kind); }
};

/// Residuals that depend on the contacts alone (identity, center, unit norm,
/// trace, min weight). The boundary residual is left at zero.
Residuals decomposition_residuals(const ContactSet& contacts);

/// Checks of Theorem 1 (ii). When the certificate carries an ellipsoid, C is
/// first mapped to John position with it; the contacts are read in those
/// coordinates. Throws Asymmetric when C is not centrally symmetric and
/// Precondition when the unit ball is not inscribed (some h_i < 1 - tol).
Certificate check_theorem1(const HPolytope& body, Certificate cert, double tol = default_certify_tol);

/// Theorem 2 (ii): theorem-1 checks without symmetry, plus the center
/// condition ||sum l_k u_k|| <= tol and d+1 <= n <= d(d+3)/2.
Certificate check_theorem2(const HPolytope& body, Certificate cert, double tol = default_certify_tol);

/// Theorem 3 (ii) for B = cert.inner mapped by cert.map (identity if absent).
/// A valid verdict is a necessary condition for maximality only. Throws
/// NotContained when a vertex of the image leaves C by more than tol.
Certificate check_theorem3(const HPolytope& body, Certificate cert, double tol = default_certify_tol);

/// Dispatches on cert.theorem().
Certificate check(const HPolytope& body, Certificate cert, double tol = default_certify_tol);

/// Smallest rho with C inside rho B^d, for C with the unit ball inscribed.
/// Vertices are enumerated when there are at most `max_subsets` d-subsets of
/// facets; otherwise a direction net with norm ascent is used, which gives a
/// lower bound. Throws Precondition when some h_i < 1 - tol.
double containment_ratio(const HPolytope& body, double tol = default_certify_tol, double max_subsets = 2e6);

}  // namespace johnbox

#endif  // JOHNBOX_CERTIFY_HPP
