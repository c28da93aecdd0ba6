#ifndef JOHNBOX_DECOMPOSITION_HPP
#define JOHNBOX_DECOMPOSITION_HPP

// John decompositions in lifted space.
//
//   theorem1:  I      = sum_k l_k u_k (x) u_k                 generators svec(u (x) u)
//   theorem2:  (I, o) = sum_k l_k (u_k (x) u_k, u_k)          generators (svec(u (x) u), u)
//   theorem3:  (I, o) = sum_k l_k (u_k (x) v_k, v_k)          generators (u (x) v row-major, v)
//
// Weights come from nonnegative least squares; the conic Caratheodory
// reducer then trims the support to at most the lifted dimension.

#include <vector>

#include "johnbox/lift.hpp"

namespace johnbox {

enum class ContactKind { Theorem1, Theorem2, Theorem3 };

int theorem_number(ContactKind kind);
ContactKind contact_kind(int theorem);

struct ContactSet {
  Index dim = 0;
  ContactKind kind = ContactKind::Theorem1;
  std::vector<Vector> u;
  std::vector<Vector> v;       // theorem3 only, paired with u
  std::vector<double> lambda;  // empty until weights are solved

  Index size() const { return static_cast<Index>(u.size()); }
  bool has_weights() const { return !lambda.empty(); }

  /// Shape checks plus the unit-norm invariants (u for theorems 1/2, v for
  /// theorem 3) within `tol`, and positivity of weights if present.
  void validate(double tol = 1e-9) const;
};

struct Bounds {
  Index n_min = 0;
  Index n_max = 0;
  Index n_actual = 0;
  bool n_min_ok = false;
  bool n_max_ok = false;
  bool span_ok = false;

  bool ok() const { return n_min_ok && n_max_ok && span_ok; }
};

struct DecompositionResult {
  Vector weights;              // one per contact, >= 0
  double residual = 0.0;       // || sum_k l_k g_k - t || in lifted coordinates
  std::vector<Index> support;  // contacts with l_k > 0
  Bounds bounds;               // evaluated on the support
};

/// Lifted generator g_k for every contact, as the columns of a matrix.
Matrix lifted_generators(const ContactSet& contacts);

/// svec(I) for theorem1, (svec(I), o) for theorem2, (vec(I), o) for theorem3.
Vector lifted_target(ContactKind kind, Index d);

struct NnlsResult {
  Vector x;
  double residual = 0.0;
  int iterations = 0;
};

/// min ||G x - t|| subject to x >= 0, Lawson-Hanson active-set method.
NnlsResult nnls(const Matrix& g, const Vector& t);

/// Weights for the contacts via NNLS against the lifted identity target.
DecompositionResult john_weights(const ContactSet& contacts);

struct Reduction {
  std::vector<Index> indices;  // surviving generators, increasing
  Vector weights;              // positive, aligned with indices
};

/// Conic Caratheodory reduction: keeps sum_k l_k g_k while the support has
/// more than ambient-dimension members or dependent columns. Each step moves
/// along the last right singular vector of the active generator matrix until
/// the first weight (smallest ratio, lowest index on ties) reaches zero.
///
/// Requires ||sum_k l_k g_k - target|| <= 1e-8 ||target|| and positive weights.
Reduction caratheodory_reduce(const Matrix& generators, const Vector& lambda, const Vector& target);
Reduction caratheodory_reduce(const std::vector<LiftedPoint<double>>& generators, const Vector& lambda,
                              const LiftedPoint<double>& target);

/// Contact set restricted to the given indices with the given weights.
ContactSet subset(const ContactSet& contacts, const std::vector<Index>& indices, const Vector& weights);

/// Solve weights, keep the positive support, then reduce it. The residual
/// precondition of the reducer is checked against the achieved NNLS
/// combination rather than the exact target.
ContactSet decompose_and_reduce(const ContactSet& contacts, DecompositionResult* weights_out = nullptr);

/// Cardinality and span bounds: d <= n <= d(d+1)/2 (theorem1),
/// d+1 <= n <= d(d+3)/2 (theorem2), d+1 <= n <= d(d+1) (theorem3), and
/// lin{u_k} (theorems 1/2) or lin{v_k} (theorem3) equal to E^d.
Bounds check_bounds(const ContactSet& contacts);

}  // namespace johnbox

#endif  // JOHNBOX_DECOMPOSITION_HPP
