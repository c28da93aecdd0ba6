#include "johnbox/body.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "johnbox/lp.hpp"

namespace johnbox {
namespace {

void check_bounded(const Matrix& normals, const Vector& offsets) {
  const Index d = normals.cols();
  for (Index i = 0; i < d; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector dir = Vector::Zero(d);
      dir(i) = sign;
      const lp::Result r = lp::maximize(dir, normals, offsets);
      require(r.status != lp::Status::Infeasible, ErrorKind::Infeasible, "polytope is empty");
      require(r.status == lp::Status::Optimal, ErrorKind::Unbounded,
              "polytope is unbounded along " + std::string(sign > 0 ? "+" : "-") + "e_" + std::to_string(i + 1));
    }
  }
}

}  // namespace

HPolytope::HPolytope(const Matrix& normals, const Vector& offsets, LoadReport* report) {
  const Index m = normals.rows(), d = normals.cols();
  require(d >= 1, ErrorKind::Dimension, "polytope dimension must be at least 1");
  require(offsets.size() == m, ErrorKind::Dimension, "facet count and offset count differ");
  require(m >= d + 1, ErrorKind::Unbounded,
          "an H-polytope in dimension " + std::to_string(d) + " needs at least " + std::to_string(d + 1) + " facets");
  normals_.resize(m, d);
  offsets_.resize(m);
  LoadReport rep;
  rep.facets = m;
  for (Index i = 0; i < m; ++i) {
    const double norm = normals.row(i).norm();
    require(norm > 0.0 && std::isfinite(norm), ErrorKind::Dimension, "facet " + std::to_string(i) + " has a zero normal");
    const double dev = std::abs(1.0 - norm);
    rep.max_norm_deviation = std::max(rep.max_norm_deviation, dev);
    // rows that are unit to rounding are kept bit-for-bit
    const double scale = dev > 1e-15 ? norm : 1.0;
    if (dev > 1e-15) ++rep.rescaled;
    normals_.row(i) = normals.row(i) / scale;
    offsets_(i) = offsets(i) / scale;
  }
  check_bounded(normals_, offsets_);
  if (report) *report = rep;
}

HPolytope HPolytope::unchecked(Matrix normals, Vector offsets) {
  for (Index i = 0; i < normals.rows(); ++i) {
    const double norm = normals.row(i).norm();
    normals.row(i) /= norm;
    offsets(i) /= norm;
  }
  HPolytope out;
  out.normals_ = std::move(normals);
  out.offsets_ = std::move(offsets);
  return out;
}

bool HPolytope::is_centrally_symmetric(double tol) const {
  const Index m = num_facets();
  for (Index i = 0; i < m; ++i) {
    bool found = false;
    for (Index j = 0; j < m && !found; ++j) {
      found = (normals_.row(i) + normals_.row(j)).cwiseAbs().maxCoeff() <= tol &&
              std::abs(offsets_(i) - offsets_(j)) <= tol * std::max(1.0, std::abs(offsets_(i)));
    }
    if (!found) return false;
  }
  return true;
}

HPolytope HPolytope::translated(const Vector& p) const {
  require(p.size() == dim(), ErrorKind::Dimension, "translated: dimension mismatch");
  return HPolytope::unchecked(normals_, offsets_ - normals_ * p);
}

VPolytope::VPolytope(const Matrix& vertices, LoadReport* report) {
  require(vertices.rows() >= 1 && vertices.cols() >= 1, ErrorKind::Dimension, "a V-polytope needs at least one vertex");
  LoadReport rep;
  std::vector<Index> keep;
  for (Index j = 0; j < vertices.cols(); ++j) {
    const bool dup = std::any_of(keep.begin(), keep.end(), [&](Index k) {
      return (vertices.col(j) - vertices.col(k)).norm() <= 1e-10;
    });
    if (dup)
      ++rep.duplicates_removed;
    else
      keep.push_back(j);
  }
  vertices_.resize(vertices.rows(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) vertices_.col(static_cast<Index>(k)) = vertices.col(keep[k]);
  rep.facets = 0;
  if (report) *report = rep;
}

bool VPolytope::full_dimensional(double tol) const {
  if (num_vertices() < dim() + 1) return false;
  const Matrix diffs = vertices_.colwise() - vertices_.col(0);
  Eigen::JacobiSVD<Matrix> svd(diffs);
  const Vector& s = svd.singularValues();
  return s.size() >= dim() && s(dim() - 1) > tol * std::max(1.0, s(0));
}

double support(const HPolytope& body, const Vector& v) {
  require(v.size() == body.dim(), ErrorKind::Dimension, "support: dimension mismatch");
  const lp::Result r = lp::maximize(v, body.normals(), body.offsets());
  require(r.status == lp::Status::Optimal, ErrorKind::Unbounded, "support: LP is unbounded or infeasible");
  return r.objective;
}

double support(const VPolytope& body, const Vector& v) {
  require(v.size() == body.dim(), ErrorKind::Dimension, "support: dimension mismatch");
  return (body.vertices().transpose() * v).maxCoeff();
}

BoundaryQuery classify(const HPolytope& body, const Vector& x, double tol) {
  require(x.size() == body.dim(), ErrorKind::Dimension, "classify: dimension mismatch");
  require(tol > 0.0, ErrorKind::Precondition, "classify: tolerance must be positive");
  BoundaryQuery q;
  q.point = x;
  q.tol = tol;
  const Vector viol = body.normals() * x - body.offsets();
  q.max_violation = viol.maxCoeff();
  for (Index i = 0; i < viol.size(); ++i)
    if (std::abs(viol(i)) <= tol) q.active_facets.push_back(i);
  if (q.max_violation > tol)
    q.location = Location::Exterior;
  else if (!q.active_facets.empty())
    q.location = Location::Boundary;
  else
    q.location = Location::Interior;
  return q;
}

std::vector<Vector> normal_cone_generators(const HPolytope& body, const Vector& u, double tol) {
  const BoundaryQuery q = classify(body, u, tol);
  require(q.location == Location::Boundary, ErrorKind::NotOnBoundary, "normal cone requested at a non-boundary point");
  std::vector<Vector> out;
  out.reserve(q.active_facets.size());
  for (Index i : q.active_facets) out.push_back(body.normal(i));
  return out;
}

bool contains(const VPolytope& body, const Vector& x, double tol) {
  require(x.size() == body.dim(), ErrorKind::Dimension, "contains: dimension mismatch");
  const Index d = body.dim(), n = body.num_vertices();
  Matrix a(d + 1, n);
  a.topRows(d) = body.vertices();
  a.row(d).setOnes();
  Vector b(d + 1);
  b << x, 1.0;
  return lp::find_nonnegative(a, b, tol).status == lp::Status::Optimal;
}

bool in_cone(const std::vector<Vector>& generators, const Vector& v, double tol) {
  if (generators.empty()) return v.norm() <= tol;
  Matrix a(v.size(), static_cast<Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) a.col(static_cast<Index>(k)) = generators[k];
  return lp::find_nonnegative(a, v, tol).status == lp::Status::Optimal;
}

Ball chebyshev_ball(const HPolytope& body) {
  const Index d = body.dim(), m = body.num_facets();
  // max r  s.t.  n_i.x + r <= h_i,  r <= max offset (keeps the LP bounded)
  Matrix g(m + 1, d + 1);
  g.topLeftCorner(m, d) = body.normals();
  g.topRightCorner(m, 1).setOnes();
  g.row(m).setZero();
  g(m, d) = 1.0;
  Vector h(m + 1);
  h << body.offsets(), std::abs(body.max_offset()) + 1.0;
  Vector c = Vector::Zero(d + 1);
  c(d) = 1.0;
  const lp::Result r = lp::maximize(c, g, h);
  require(r.status == lp::Status::Optimal && r.x(d) > 0.0, ErrorKind::Infeasible, "polytope has empty interior");
  return {r.x.head(d), r.x(d)};
}

HPolytope affine_image(const HPolytope& body, const Matrix& t, const Vector& shift) {
  require(t.rows() == body.dim() && t.cols() == body.dim() && shift.size() == body.dim(), ErrorKind::Dimension,
          "affine_image: dimension mismatch");
  Eigen::PartialPivLU<Matrix> lu(t.transpose());
  require(std::abs(lu.determinant()) > 1e-300, ErrorKind::Singular, "affine_image: singular map");
  // n.x <= h with x = T^{-1}(y - t)  <=>  (T^{-T} n).y <= h + (T^{-T} n).t
  const Matrix g = lu.solve(body.normals().transpose()).transpose();
  return HPolytope::unchecked(g, body.offsets() + g * shift);
}

VPolytope affine_image(const VPolytope& body, const Matrix& t, const Vector& shift) {
  require(t.rows() == body.dim() && t.cols() == body.dim() && shift.size() == body.dim(), ErrorKind::Dimension,
          "affine_image: dimension mismatch");
  return VPolytope((t * body.vertices()).colwise() + shift);
}

StandardBody parse_standard_body(const std::string& name) {
  if (name == "cube") return StandardBody::Cube;
  if (name == "cross_polytope") return StandardBody::CrossPolytope;
  if (name == "simplex") return StandardBody::Simplex;
  if (name == "random_symmetric") return StandardBody::RandomSymmetric;
  throw Error(ErrorKind::Parse, "unknown standard body '" + name + "'");
}

std::string to_string(StandardBody name) {
  switch (name) {
    case StandardBody::Cube: return "cube";
    case StandardBody::CrossPolytope: return "cross_polytope";
    case StandardBody::Simplex: return "simplex";
    case StandardBody::RandomSymmetric: return "random_symmetric";
  }
  return "unknown";
}

HPolytope make_standard(StandardBody name, Index d, std::uint64_t seed) {
  require(d >= 1, ErrorKind::Dimension, "make_standard: d must be at least 1");
  switch (name) {
    case StandardBody::Cube: {
      Matrix n(2 * d, d);
      n << Matrix::Identity(d, d), -Matrix::Identity(d, d);
      return HPolytope(n, Vector::Ones(2 * d));
    }
    case StandardBody::CrossPolytope: {
      require(d <= 16, ErrorKind::Dimension, "cross_polytope: d must be at most 16");
      const Index m = Index(1) << d;
      Matrix n(m, d);
      for (Index s = 0; s < m; ++s)
        for (Index i = 0; i < d; ++i) n(s, i) = (s >> i) & 1 ? -1.0 : 1.0;
      return HPolytope(n, Vector::Ones(m));
    }
    case StandardBody::Simplex: {
      // Orthonormal basis of the hyperplane orthogonal to (1,...,1) in E^{d+1}.
      Matrix ones = Matrix::Ones(d + 1, 1);
      Eigen::HouseholderQR<Matrix> qr(ones);
      const Matrix q = Matrix(qr.householderQ()).rightCols(d);
      const Matrix centered = Matrix::Identity(d + 1, d + 1).array() - 1.0 / double(d + 1);
      Matrix n = (q.transpose() * centered).transpose();
      n.rowwise().normalize();
      return HPolytope(n, Vector::Ones(d + 1));
    }
    case StandardBody::RandomSymmetric: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> gauss;
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      const Index pairs = 2 * d;
      Matrix n(2 * pairs, d);
      Vector h(2 * pairs);
      for (Index k = 0; k < pairs; ++k) {
        Vector dir(d);
        do {
          for (Index i = 0; i < d; ++i) dir(i) = gauss(rng);
        } while (dir.norm() < 1e-6);
        dir.normalize();
        const double off = 1.0 + unif(rng);
        n.row(2 * k) = dir.transpose();
        n.row(2 * k + 1) = -dir.transpose();
        h(2 * k) = h(2 * k + 1) = off;
      }
      return HPolytope(n, h);
    }
  }
  throw Error(ErrorKind::Parse, "make_standard: unknown body");
}

VPolytope cube_vertices(Index d) {
  const Index m = Index(1) << d;
  Matrix v(d, m);
  for (Index s = 0; s < m; ++s)
    for (Index i = 0; i < d; ++i) v(i, s) = (s >> i) & 1 ? -1.0 : 1.0;
  return VPolytope(v);
}

}  // namespace johnbox
