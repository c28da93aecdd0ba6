#include <doctest.h>

#include <cmath>
#include <limits>

#include "johnbox/lift.hpp"
#include "support.hpp"

using namespace johnbox;

TEST_CASE("outer product on basis vectors and by expansion") {
  const Matrix e = outer(Vector::Unit(2, 0), Vector::Unit(2, 1));
  CHECK(e(0, 1) == 1.0);
  CHECK(e(0, 0) == 0.0);
  CHECK(e(1, 0) == 0.0);
  CHECK(e(1, 1) == 0.0);

  Vector u(2), v(2);
  u << 1, 2;
  v << 3, 4;
  Matrix expect(2, 2);
  expect << 3, 4, 6, 8;
  CHECK((outer(u, v) - expect).norm() == 0.0);

  testkit::Gen g(11);
  const Vector w = g.vec(5);
  const Matrix ww = outer(w, w);
  CHECK((ww - ww.transpose()).norm() == 0.0);
}

TEST_CASE("Frobenius product examples") {
  CHECK(frob(Matrix::Identity(3, 3), Matrix::Identity(3, 3)) == doctest::Approx(3.0));
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 5, 6, 7, 8;
  CHECK(frob(a, b) == doctest::Approx(70.0));
}

TEST_CASE("matrix identities M u . v = M . u(x)v and (u(x)v) w = (v.w) u") {
  testkit::Gen g(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index d = g.integer(1, 6);
    const Matrix m = g.mat(d, d);
    const Vector u = g.vec(d), v = g.vec(d), w = g.vec(d);
    const double scale = 1 + m.norm() * u.norm() * v.norm();
    // with u (x) v = u v^T the pairing is M . u (x) v = u . M v = M^T u . v
    CHECK(std::abs(u.dot(m * v) - frob(m, outer(u, v))) <= 1e-12 * scale);
    CHECK(std::abs((m * u).dot(v) - frob(m, outer(v, u))) <= 1e-12 * scale);
    const Matrix s = (m + m.transpose()) / 2.0;
    CHECK(std::abs((s * u).dot(v) - frob(s, outer(u, v))) <= 1e-12 * scale);
    CHECK((outer(u, v) * w - v.dot(w) * u).norm() <= 1e-12 * (1 + u.norm() * v.norm() * w.norm()));
  }
}

TEST_CASE("svec uses the isometric off-diagonal scaling") {
  Matrix a(2, 2);
  a << 1, 2, 2, 3;
  const LiftedPoint<double> p = svec(Sym(a));
  REQUIRE(p.coords.size() == 3);
  CHECK(p.coords(0) == 1.0);
  CHECK(p.coords(1) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(p.coords(2) == 3.0);
}

TEST_CASE("svec and smat are inverse and preserve inner products") {
  testkit::Gen g(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = g.integer(1, 6);
    const Sym a(g.sym(d)), b(g.sym(d));
    const LiftedPoint<double> pa = svec(a), pb = svec(b);
    CHECK(pa.coords.size() == sym_dim(d));
    CHECK((smat(pa).matrix() - a.matrix()).cwiseAbs().maxCoeff() <= 1e-14 * (1 + a.matrix().norm()));

    double direct = 0;
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) direct += a(i, j) * b(i, j);
    CHECK(std::abs(dot(pa, pb) - direct) <= 1e-12 * (1 + std::abs(direct)));
  }
}

TEST_CASE("symmetric construction averages near-symmetric input and rejects the rest") {
  Matrix a(2, 2);
  a << 1, 2, 2 + 1e-12, 3;
  const Sym s(a);
  CHECK(s(0, 1) == s(1, 0));
  a(1, 0) = 2.1;
  CHECK_THROWS_AS(Sym{a}, Error);
}

TEST_CASE("affine and general lifts") {
  const LiftedPoint<double> p = lift_affine(Sym::identity(2), Vector::Zero(2));
  Vector expect(5);
  expect << 1, 0, 1, 0, 0;
  CHECK((p.coords - expect).norm() == 0.0);

  const LiftedPoint<double> q = lift_general(Matrix::Identity(2, 2), Vector::Zero(2));
  Vector expect_g(6);
  expect_g << 1, 0, 0, 1, 0, 0;
  CHECK((q.coords - expect_g).norm() == 0.0);

  testkit::Gen g(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = g.integer(1, 6);
    const Sym a(g.sym(d)), b(g.sym(d));
    const Vector x = g.vec(d), y = g.vec(d);
    const LiftedPoint<double> la = lift_affine(a, x), lb = lift_affine(b, y);
    CHECK(la.coords.size() == d * (d + 3) / 2);
    CHECK(std::abs(dot(la, lb) - (frob(a.matrix(), b.matrix()) + x.dot(y))) <= 1e-12 * (1 + la.coords.norm() * lb.coords.norm()));
    const auto [ra, rx] = unlift_affine(la);
    CHECK((ra.matrix() - a.matrix()).norm() <= 4 * std::numeric_limits<double>::epsilon() * a.matrix().norm());  // off-diagonals pass through sqrt 2
    CHECK((rx - x).norm() == 0.0);

    const Matrix m = g.mat(d, d), n = g.mat(d, d);
    const LiftedPoint<double> gm = lift_general(m, x), gn = lift_general(n, y);
    CHECK(gm.coords.size() == d * (d + 1));
    CHECK(std::abs(dot(gm, gn) - (frob(m, n) + x.dot(y))) <= 1e-12 * (1 + gm.coords.norm() * gn.coords.norm()));
    const auto [rm, ry] = unlift_general(gm);
    CHECK((rm - m).norm() == 0.0);
    CHECK((ry - x).norm() == 0.0);
  }
}

TEST_CASE("polar decomposition examples") {
  const PolarFactors<double> id = polar_decompose(Matrix::Identity(3, 3));
  CHECK((id.A.matrix() - Matrix::Identity(3, 3)).norm() <= 1e-14);
  CHECK((id.R - Matrix::Identity(3, 3)).norm() <= 1e-14);

  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  const PolarFactors<double> pr = polar_decompose(rot);
  CHECK((pr.A.matrix() - Matrix::Identity(2, 2)).norm() <= 1e-14);
  CHECK((pr.R - rot).norm() <= 1e-14);

  Matrix sing(2, 2);
  sing << 1, 2, 2, 4;
  CHECK_THROWS_AS(polar_decompose(sing), Error);
}

TEST_CASE("polar decomposition reconstructs random matrices") {
  testkit::Gen g(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index d = g.integer(1, 6);
    Matrix m = g.well_conditioned(d);
    if (trial % 2) m.col(0) = -m.col(0);  // both determinant signs
    const PolarFactors<double> p = polar_decompose(m);
    const Index n = d;
    CHECK((p.A.matrix() * p.R - m).norm() <= 1e-10 * m.norm());
    CHECK((p.R * p.R.transpose() - Matrix::Identity(n, n)).norm() <= 1e-10);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(p.A.matrix()).eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("Minkowski determinant inequality on random positive definite pairs") {
  testkit::Gen g(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index d = g.integer(1, 6);
    const Matrix a = g.spd(d), b = g.spd(d);
    const double p = 1.0 / double(d);
    CHECK(std::pow((a + b).determinant(), p) >= std::pow(a.determinant(), p) + std::pow(b.determinant(), p) - 1e-10);
  }
}

TEST_CASE("matrix square root") {
  testkit::Gen g(6);
  const Matrix s = g.spd(4);
  const Matrix r = sqrtm_psd(s);
  CHECK((r * r - s).norm() <= 1e-12 * s.norm());
  CHECK((r - r.transpose()).norm() <= 1e-14);
}
