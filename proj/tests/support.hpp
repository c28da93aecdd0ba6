#ifndef JOHNBOX_TESTS_SUPPORT_HPP
#define JOHNBOX_TESTS_SUPPORT_HPP

// Seeded generators and brute-force oracles shared by the unit and
// acceptance suites. The oracles deliberately avoid the library's own
// solvers: they enumerate, grid-search or sum directly.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "johnbox/body.hpp"
#include "johnbox/lift.hpp"

namespace testkit {

using johnbox::Index;
using johnbox::Matrix;
using johnbox::Vector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double gauss() { return normal_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng_); }

  Vector vec(Index d) {
    Vector v(d);
    for (Index i = 0; i < d; ++i) v(i) = gauss();
    return v;
  }
  Vector unit(Index d) {
    Vector v = vec(d);
    return v / v.norm();
  }
  Matrix mat(Index r, Index c) {
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) m(i, j) = gauss();
    return m;
  }
  Matrix sym(Index d) {
    const Matrix m = mat(d, d);
    return (m + m.transpose()) / 2.0;
  }
  // eigenvalues in [lo, hi]
  Matrix spd(Index d, double lo = 0.2, double hi = 3.0) {
    const Matrix q = Eigen::HouseholderQR<Matrix>(mat(d, d)).householderQ();
    Vector ev(d);
    for (Index i = 0; i < d; ++i) ev(i) = uniform(lo, hi);
    const Matrix a = q * ev.asDiagonal() * q.transpose();
    return (a + a.transpose()) / 2.0;
  }
  // singular values in [lo, hi], det > 0
  Matrix well_conditioned(Index d, double lo = 0.3, double hi = 3.0) {
    const Matrix u = Eigen::HouseholderQR<Matrix>(mat(d, d)).householderQ();
    const Matrix v = Eigen::HouseholderQR<Matrix>(mat(d, d)).householderQ();
    Vector s(d);
    for (Index i = 0; i < d; ++i) s(i) = uniform(lo, hi);
    return u * s.asDiagonal() * v.transpose();
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

// Generic symmetric polytope: k random +-pairs plus the cube facets to keep
// it bounded, offsets in [0.5, 2].
inline johnbox::HPolytope symmetric_polytope(Gen& g, Index d, Index pairs) {
  const Index m = 2 * (pairs + d);
  Matrix n(m, d);
  Vector h(m);
  Index r = 0;
  for (Index k = 0; k < pairs + d; ++k) {
    Vector v = k < pairs ? g.unit(d) : Vector(Vector::Unit(d, k - pairs));
    const double off = k < pairs ? g.uniform(0.5, 2.0) : g.uniform(1.0, 2.0);
    n.row(r) = v.transpose();
    h(r++) = off;
    n.row(r) = -v.transpose();
    h(r++) = off;
  }
  return johnbox::HPolytope(n, h);
}

// Regular simplex with inradius 1 centred at o, built independently of the
// library: vertices of the standard simplex in E^{d+1} projected onto 1^perp,
// then rotated into E^d via an orthonormal basis computed by Gram-Schmidt.
struct SimplexOracle {
  Matrix normals;  // rows, unit
  Vector offsets;
  std::vector<Vector> touch;  // contact points of the inscribed unit ball
};

inline SimplexOracle regular_simplex(Index d) {
  std::vector<Vector> basis;
  const Vector ones = Vector::Ones(d + 1) / std::sqrt(double(d + 1));
  for (Index i = 0; i < d + 1 && static_cast<Index>(basis.size()) < d; ++i) {
    Vector e = Vector::Unit(d + 1, i);
    e -= e.dot(ones) * ones;
    for (const Vector& b : basis) e -= e.dot(b) * b;
    if (e.norm() > 1e-8) basis.push_back(e / e.norm());
  }
  SimplexOracle s;
  s.normals.resize(d + 1, d);
  s.offsets = Vector::Ones(d + 1);
  for (Index i = 0; i < d + 1; ++i) {
    // outward normal of the facet opposite vertex i is minus that vertex direction
    Vector c = Vector::Unit(d + 1, i) - ones / std::sqrt(double(d + 1));
    Vector p(d);
    for (Index k = 0; k < d; ++k) p(k) = -c.dot(basis[k]);
    p /= p.norm();
    s.normals.row(i) = p.transpose();
    s.touch.push_back(p);
  }
  return s;
}

// Largest parallelogram with one side on an edge of the triangle
// (0,0),(1,0),(0,1), by grid search over height and shear; by symmetry of the
// triangle under the affine maps permuting its edges it is enough to search
// the bottom edge. Returns the best area found.
inline double triangle_parallelogram_oracle(int grid = 2000) {
  double best = 0.0;
  for (int i = 1; i < grid; ++i) {
    const double h = double(i) / grid;
    for (int j = -grid; j <= grid; ++j) {
      const double s = double(j) / grid;
      const double x0 = std::max(0.0, -s);
      const double b = std::min(1.0 - x0, 1.0 - h - x0 - s);
      if (b > 0.0) best = std::max(best, b * h);
    }
  }
  return best;
}

// Does target lie in pos{cols of g} using at most `limit` columns? Brute
// force over subsets, each solved by least squares and accepted when the
// weights are nonnegative and reproduce the target.
inline bool subset_representable(const Matrix& g, const Vector& target, Index limit, double tol) {
  const Index n = g.cols();
  std::vector<Index> pick;
  std::function<bool(Index)> rec = [&](Index start) -> bool {
    if (!pick.empty()) {
      Matrix sub(g.rows(), static_cast<Index>(pick.size()));
      for (std::size_t k = 0; k < pick.size(); ++k) sub.col(static_cast<Index>(k)) = g.col(pick[k]);
      const Vector w = sub.colPivHouseholderQr().solve(target);
      if ((w.array() >= -tol).all() && (sub * w - target).norm() <= tol * std::max(1.0, target.norm())) return true;
    }
    if (static_cast<Index>(pick.size()) == limit) return false;
    for (Index k = start; k < n; ++k) {
      pick.push_back(k);
      if (rec(k + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(0);
}

// Max-norm vertex of {x : N x <= h} by enumerating all d-subsets of facets.
inline double vertex_norm_oracle(const Matrix& n, const Vector& h) {
  const Index m = n.rows(), d = n.cols();
  double best = 0.0;
  std::vector<Index> pick;
  std::function<void(Index)> rec = [&](Index start) {
    if (static_cast<Index>(pick.size()) == d) {
      Matrix a(d, d);
      Vector b(d);
      for (Index i = 0; i < d; ++i) {
        a.row(i) = n.row(pick[i]);
        b(i) = h(pick[i]);
      }
      Eigen::ColPivHouseholderQR<Matrix> qr(a);
      if (qr.rank() < d) return;
      const Vector x = qr.solve(b);
      if ((n * x - h).maxCoeff() <= 1e-9) best = std::max(best, x.norm());
      return;
    }
    for (Index k = start; k < m; ++k) {
      pick.push_back(k);
      rec(k + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

}  // namespace testkit

#endif  // JOHNBOX_TESTS_SUPPORT_HPP
