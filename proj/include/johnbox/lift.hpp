#ifndef JOHNBOX_LIFT_HPP
#define JOHNBOX_LIFT_HPP

// Identification of d x d matrices with points of a Euclidean space.
//
// Symmetric matrices are mapped isometrically into E^{d(d+1)/2}: diagonal
// entries are copied and off-diagonal entries are scaled by sqrt(2), walking
// the upper triangle row by row. With this convention the Euclidean inner
// product of two lifted points equals the Frobenius product sum_ij a_ij b_ij
// of the matrices, so cones and separating hyperplanes in lifted space are
// exactly the matrix ones.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "johnbox/error.hpp"

namespace johnbox {

using Eigen::Index;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class LiftKind { Sym, SymAffine, GenAffine };

inline Index sym_dim(Index d) { return d * (d + 1) / 2; }

inline Index lifted_dim(LiftKind kind, Index d) {
  switch (kind) {
    case LiftKind::Sym: return d * (d + 1) / 2;
    case LiftKind::SymAffine: return d * (d + 3) / 2;
    case LiftKind::GenAffine: return d * (d + 1);
  }
  return 0;
}

/// Symmetric matrix. Construction symmetrizes inputs that are symmetric up to
/// `tol` (relative to the largest entry) and rejects anything worse.
template <typename Scalar>
class SymMatrix {
 public:
  using MatrixType = Eigen::MatrixX<Scalar>;

  SymMatrix() = default;

  template <typename Derived>
  explicit SymMatrix(const Eigen::MatrixBase<Derived>& m, Scalar tol = Scalar(1e-9)) {
    require(m.rows() == m.cols() && m.rows() >= 1, ErrorKind::Dimension,
            "symmetric matrix must be square and non-empty");
    const Scalar scale = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
    const Scalar asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    require(asym <= tol * scale, ErrorKind::Asymmetric,
            "matrix is not symmetric (max |a_ij - a_ji| = " + std::to_string(double(asym)) + ")");
    m_ = (m + m.transpose()) / Scalar(2);
  }

  static SymMatrix identity(Index d) { return SymMatrix(MatrixType::Identity(d, d)); }

  Index dim() const { return m_.rows(); }
  const MatrixType& matrix() const { return m_; }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }

 private:
  MatrixType m_;
};

using Sym = SymMatrix<double>;

template <typename Scalar>
struct LiftedPoint {
  LiftKind kind = LiftKind::Sym;
  Index dim = 0;  // d of the underlying matrices
  Eigen::VectorX<Scalar> coords;

  Index ambient_dim() const { return coords.size(); }
};

/// u v^T
template <typename DerivedU, typename DerivedV>
auto outer(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedU::Scalar;
  require(u.size() == v.size(), ErrorKind::Dimension, "outer: dimension mismatch");
  return Eigen::MatrixX<Scalar>(u * v.transpose());
}

/// Frobenius product sum_ij a_ij b_ij.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar frob(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::Dimension,
          "frob: dimension mismatch");
  return a.cwiseProduct(b).sum();
}

/// Isometric coordinates of a symmetric matrix; only the upper triangle is read.
template <typename Derived>
Eigen::VectorX<typename Derived::Scalar> svec_coords(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const Index d = a.rows();
  const Scalar root2 = std::sqrt(Scalar(2));
  Eigen::VectorX<Scalar> out(sym_dim(d));
  Index k = 0;
  for (Index i = 0; i < d; ++i) {
    out(k++) = a(i, i);
    for (Index j = i + 1; j < d; ++j) out(k++) = root2 * a(i, j);
  }
  return out;
}

template <typename Derived>
Eigen::MatrixX<typename Derived::Scalar> smat_coords(const Eigen::MatrixBase<Derived>& p, Index d) {
  using Scalar = typename Derived::Scalar;
  require(p.size() == sym_dim(d), ErrorKind::Dimension, "smat: coordinate length mismatch");
  const Scalar inv_root2 = Scalar(1) / std::sqrt(Scalar(2));
  Eigen::MatrixX<Scalar> a(d, d);
  Index k = 0;
  for (Index i = 0; i < d; ++i) {
    a(i, i) = p(k++);
    for (Index j = i + 1; j < d; ++j) a(i, j) = a(j, i) = inv_root2 * p(k++);
  }
  return a;
}

template <typename Scalar>
LiftedPoint<Scalar> svec(const SymMatrix<Scalar>& a) {
  return {LiftKind::Sym, a.dim(), svec_coords(a.matrix())};
}

template <typename Scalar>
SymMatrix<Scalar> smat(const LiftedPoint<Scalar>& p) {
  require(p.kind == LiftKind::Sym, ErrorKind::Dimension, "smat: lifted point is not of kind sym");
  return SymMatrix<Scalar>(smat_coords(p.coords, p.dim));
}

/// (A, a) -> (svec(A), a) in E^{d(d+3)/2}.
template <typename Scalar, typename Derived>
LiftedPoint<Scalar> lift_affine(const SymMatrix<Scalar>& a, const Eigen::MatrixBase<Derived>& center) {
  const Index d = a.dim();
  require(center.size() == d, ErrorKind::Dimension, "lift_affine: dimension mismatch");
  Eigen::VectorX<Scalar> coords(lifted_dim(LiftKind::SymAffine, d));
  coords << svec_coords(a.matrix()), center;
  return {LiftKind::SymAffine, d, std::move(coords)};
}

template <typename Scalar>
std::pair<SymMatrix<Scalar>, Eigen::VectorX<Scalar>> unlift_affine(const LiftedPoint<Scalar>& p) {
  require(p.kind == LiftKind::SymAffine, ErrorKind::Dimension, "unlift_affine: kind mismatch");
  const Index m = sym_dim(p.dim);
  return {SymMatrix<Scalar>(smat_coords(p.coords.head(m), p.dim)), p.coords.tail(p.dim)};
}

/// (M, a) -> (m_11, ..., m_1d, m_21, ..., m_dd, a) in E^{d(d+1)}. No scaling
/// is needed since every entry appears once.
template <typename DerivedM, typename DerivedA>
LiftedPoint<typename DerivedM::Scalar> lift_general(const Eigen::MatrixBase<DerivedM>& m,
                                                    const Eigen::MatrixBase<DerivedA>& center) {
  using Scalar = typename DerivedM::Scalar;
  const Index d = m.rows();
  require(m.cols() == d && center.size() == d, ErrorKind::Dimension, "lift_general: dimension mismatch");
  Eigen::VectorX<Scalar> coords(lifted_dim(LiftKind::GenAffine, d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) coords(i * d + j) = m(i, j);
  coords.tail(d) = center;
  return {LiftKind::GenAffine, d, std::move(coords)};
}

template <typename Scalar>
std::pair<Eigen::MatrixX<Scalar>, Eigen::VectorX<Scalar>> unlift_general(const LiftedPoint<Scalar>& p) {
  require(p.kind == LiftKind::GenAffine, ErrorKind::Dimension, "unlift_general: kind mismatch");
  const Index d = p.dim;
  Eigen::MatrixX<Scalar> m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = p.coords(i * d + j);
  return {m, p.coords.tail(d)};
}

template <typename Scalar>
Scalar dot(const LiftedPoint<Scalar>& p, const LiftedPoint<Scalar>& q) {
  require(p.kind == q.kind && p.dim == q.dim, ErrorKind::Dimension, "dot: lifted kinds differ");
  return p.coords.dot(q.coords);
}

/// Square root of a symmetric positive semidefinite matrix by eigendecomposition.
template <typename Derived>
Eigen::MatrixX<typename Derived::Scalar> sqrtm_psd(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixX<Scalar>> eig(s);
  const Eigen::VectorX<Scalar> roots = eig.eigenvalues().cwiseMax(Scalar(0)).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

template <typename Scalar>
struct PolarFactors {
  SymMatrix<Scalar> A;        // (M M^T)^{1/2}, positive definite
  Eigen::MatrixX<Scalar> R;   // orthogonal, M = A R
};

/// M = A R with A symmetric positive definite and R orthogonal.
template <typename Derived>
PolarFactors<typename Derived::Scalar> polar_decompose(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::MatrixX<Scalar>;
  const Index d = m.rows();
  require(m.cols() == d && d >= 1, ErrorKind::Dimension, "polar_decompose: matrix must be square");
  // Compare |det M| with the determinant of the scaled identity of equal norm.
  const Scalar scale = std::pow(m.norm() / std::sqrt(Scalar(d)), Scalar(d));
  const Scalar det = Mat(m).determinant();
  require(scale > Scalar(0) && std::abs(det) > Scalar(1e-12) * scale, ErrorKind::Singular,
          "polar_decompose: matrix is singular");

  Eigen::SelfAdjointEigenSolver<Mat> eig(Mat(m * m.transpose()));
  const auto& q = eig.eigenvectors();
  const Eigen::VectorX<Scalar> roots = eig.eigenvalues().cwiseSqrt();
  Mat a = q * roots.asDiagonal() * q.transpose();
  Mat a_inv = q * roots.cwiseInverse().asDiagonal() * q.transpose();
  return {SymMatrix<Scalar>(Mat((a + a.transpose()) / Scalar(2))), a_inv * m};
}

}  // namespace johnbox

#endif  // JOHNBOX_LIFT_HPP
