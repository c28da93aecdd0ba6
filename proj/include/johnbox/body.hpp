#ifndef JOHNBOX_BODY_HPP
#define JOHNBOX_BODY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "johnbox/lift.hpp"

namespace johnbox {

/// What ingestion did to the raw facet data.
struct LoadReport {
  Index facets = 0;
  Index rescaled = 0;            // facets whose normal was not already unit
  double max_norm_deviation = 0; // max |1 - ||raw normal|| |
  Index duplicates_removed = 0;  // vertices only
};

/// Polytope {x : n_i . x <= h_i}. Normals are stored as unit rows of
/// `normals()`; ingestion rescales each raw row together with its offset.
/// The constructor rejects bodies with fewer than d+1 facets or an unbounded
/// direction.
class HPolytope {
 public:
  HPolytope() = default;
  HPolytope(const Matrix& normals, const Vector& offsets, LoadReport* report = nullptr);

  /// Normalizes rows but skips validation. For images of an already
  /// validated body (translates, affine images), which stay bounded.
  static HPolytope unchecked(Matrix normals, Vector offsets);

  Index dim() const { return normals_.cols(); }
  Index num_facets() const { return normals_.rows(); }
  const Matrix& normals() const { return normals_; }
  const Vector& offsets() const { return offsets_; }
  Vector normal(Index i) const { return normals_.row(i).transpose(); }
  double offset(Index i) const { return offsets_(i); }
  double max_offset() const { return offsets_.maxCoeff(); }

  bool origin_interior() const { return offsets_.minCoeff() > 0.0; }

  /// Every facet (n, h) has a partner (-n, h) within `tol`.
  bool is_centrally_symmetric(double tol = 1e-9) const;

  /// The body shifted so that `p` becomes the origin, i.e. C - p.
  HPolytope translated(const Vector& p) const;

 private:
  Matrix normals_;
  Vector offsets_;
};

/// conv{vertices}; vertices are the columns of a d x n matrix.
class VPolytope {
 public:
  VPolytope() = default;
  explicit VPolytope(const Matrix& vertices, LoadReport* report = nullptr);

  Index dim() const { return vertices_.rows(); }
  Index num_vertices() const { return vertices_.cols(); }
  const Matrix& vertices() const { return vertices_; }
  Vector vertex(Index j) const { return vertices_.col(j); }
  Vector centroid() const { return vertices_.rowwise().mean(); }

  /// The affine hull of the vertices is all of E^d.
  bool full_dimensional(double tol = 1e-9) const;

 private:
  Matrix vertices_;
};

double support(const HPolytope& body, const Vector& v);
double support(const VPolytope& body, const Vector& v);

enum class Location { Interior, Boundary, Exterior };

struct BoundaryQuery {
  Vector point;
  Location location = Location::Interior;
  std::vector<Index> active_facets;  // facets with |n_i.x - h_i| <= tol
  double tol = 0.0;
  double max_violation = 0.0;        // max_i (n_i.x - h_i)
};

/// Default boundary tolerance: 1e-7 scaled by the largest offset.
inline double default_boundary_tol(const HPolytope& body) { return 1e-7 * std::max(1.0, body.max_offset()); }

BoundaryQuery classify(const HPolytope& body, const Vector& x, double tol);

/// Unit normals of the facets active at boundary point u; they positively
/// span the normal cone N_C(u). Throws NotOnBoundary otherwise.
std::vector<Vector> normal_cone_generators(const HPolytope& body, const Vector& u, double tol);

/// Is x a point of conv(vertices) (LP feasibility, tolerance `tol`)?
bool contains(const VPolytope& body, const Vector& x, double tol = 1e-8);

/// Is v in pos{generators} (LP feasibility, tolerance `tol`)?
bool in_cone(const std::vector<Vector>& generators, const Vector& v, double tol = 1e-8);

struct Ball {
  Vector center;
  double radius = 0.0;
};

/// Largest ball inside the polytope.
Ball chebyshev_ball(const HPolytope& body);

/// Image T x + t of the polytope under a nonsingular affine map.
HPolytope affine_image(const HPolytope& body, const Matrix& t, const Vector& shift);
VPolytope affine_image(const VPolytope& body, const Matrix& t, const Vector& shift);

enum class StandardBody { Cube, CrossPolytope, Simplex, RandomSymmetric };

StandardBody parse_standard_body(const std::string& name);
std::string to_string(StandardBody name);

/// Test instances: [-1,1]^d, {x : s.x <= 1, s in {-1,1}^d}, the regular
/// simplex with inradius 1 centered at o, and a seeded random body with 2d
/// facet pairs +-n and offsets in [1, 2).
HPolytope make_standard(StandardBody name, Index d, std::uint64_t seed = 0);

/// Vertices of the cube [-1,1]^d as a V-polytope.
VPolytope cube_vertices(Index d);

}  // namespace johnbox

#endif  // JOHNBOX_BODY_HPP
