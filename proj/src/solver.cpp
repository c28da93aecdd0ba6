#include "johnbox/solver.hpp"

#include <cmath>
#include <optional>

#include "barrier.hpp"

namespace johnbox {

EllipsoidParam::EllipsoidParam(Sym shape, Vector center) : A(std::move(shape)), a(std::move(center)) {
  require(a.size() == A.dim(), ErrorKind::Dimension, "ellipsoid: center and shape dimensions differ");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A.matrix(), Eigen::EigenvaluesOnly);
  require(eig.eigenvalues().minCoeff() > 0.0, ErrorKind::Singular, "ellipsoid: shape matrix is not positive definite");
}

double EllipsoidParam::log_det() const {
  Eigen::LLT<Matrix> llt(A.matrix());
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

void SolverConfig::validate() const {
  require(tol_kkt > 0 && max_newton_iters > 0 && barrier_mu0 > 0 && min_mu > 0, ErrorKind::Precondition,
          "solver config: tolerances and budgets must be positive");
  require(barrier_shrink > 0 && barrier_shrink < 1, ErrorKind::Precondition, "solver config: barrier_shrink must lie in (0,1)");
  require(line_search_beta > 0 && line_search_beta < 1, ErrorKind::Precondition,
          "solver config: line_search_beta must lie in (0,1)");
}

namespace {

// Barrier problem in x = (svec(A), a) coordinates, or svec(A) alone when the
// center is pinned to the origin.
class MvieProblem {
 public:
  MvieProblem(const HPolytope& body, bool general)
      : body_(body), general_(general), d_(body.dim()), ns_(sym_dim(body.dim())) {
    // Frobenius-orthonormal basis of symmetric matrices matching svec order.
    std::vector<Matrix> basis;
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    for (Index i = 0; i < d_; ++i) {
      Matrix e = Matrix::Zero(d_, d_);
      e(i, i) = 1.0;
      basis.push_back(e);
      for (Index j = i + 1; j < d_; ++j) {
        Matrix f = Matrix::Zero(d_, d_);
        f(i, j) = f(j, i) = inv_root2;
        basis.push_back(f);
      }
    }
    basis_ = std::move(basis);
    // J_i maps svec(dA) to dA v_i.
    for (Index i = 0; i < body.num_facets(); ++i) {
      Matrix j(d_, ns_);
      const Vector v = body.normal(i);
      for (Index k = 0; k < ns_; ++k) j.col(k) = basis_[k] * v;
      jac_.push_back(std::move(j));
    }
  }

  Index size() const { return general_ ? ns_ + d_ : ns_; }

  Matrix shape(const Vector& x) const { return smat_coords(x.head(ns_), d_); }
  Vector center(const Vector& x) const { return general_ ? Vector(x.tail(d_)) : Vector::Zero(d_); }

  std::optional<double> value(const Vector& x, double mu) const {
    const Matrix a = shape(x);
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    if (!std::isfinite(logdet)) return std::nullopt;
    const Vector s = slacks(a, center(x));
    if (s.minCoeff() <= 0.0) return std::nullopt;
    return -logdet - mu * s.array().log().sum();
  }

  double objective(const Vector& x) const {
    Eigen::LLT<Matrix> llt(shape(x));
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  }

  void derivatives(const Vector& x, double mu, Vector& g, Matrix& h) const {
    const Index n = size();
    const Matrix a = shape(x);
    const Vector c = center(x);
    const Matrix a_inv = Eigen::LLT<Matrix>(a).solve(Matrix::Identity(d_, d_));
    g = Vector::Zero(n);
    h = Matrix::Zero(n, n);

    g.head(ns_) = -svec_coords(a_inv);
    for (Index k = 0; k < ns_; ++k) h.col(k).head(ns_) = svec_coords(Matrix(a_inv * basis_[k] * a_inv));

    Vector q(n);
    for (Index i = 0; i < body_.num_facets(); ++i) {
      const Vector v = body_.normal(i);
      const Vector w = a * v;
      const double r = w.norm();
      const Vector w_hat = w / r;
      const double s = body_.offset(i) - c.dot(v) - r;
      const Matrix& j = jac_[i];
      q.head(ns_) = j.transpose() * w_hat;
      if (general_) q.tail(d_) = v;
      g += (mu / s) * q;
      h.noalias() += (mu / (s * s)) * q * q.transpose();
      const Matrix proj = Matrix::Identity(d_, d_) - w_hat * w_hat.transpose();
      h.topLeftCorner(ns_, ns_).noalias() += (mu / (s * r)) * j.transpose() * proj * j;
    }
  }

  Vector newton_step(const Vector& g, const Matrix& h) const {
    const Matrix reg = h + 1e-12 * Matrix::Identity(h.rows(), h.cols());
    return reg.ldlt().solve(-g);
  }

 private:
  Vector slacks(const Matrix& a, const Vector& c) const {
    const Matrix w = a * body_.normals().transpose();
    return body_.offsets() - body_.normals() * c - w.colwise().norm().transpose();
  }

  const HPolytope& body_;
  bool general_;
  Index d_, ns_;
  std::vector<Matrix> basis_;
  std::vector<Matrix> jac_;
};

}  // namespace

MvieResult mvie(const HPolytope& body, SolveMode mode, const SolverConfig& cfg) {
  cfg.validate();
  require(body.num_facets() > 0, ErrorKind::Dimension, "mvie: empty polytope description");
  require(body.origin_interior(), ErrorKind::Infeasible,
          "mvie: the origin must be interior (all offsets positive); translate by an interior point first");
  const bool general = mode == SolveMode::General;
  if (!general)
    require(body.is_centrally_symmetric(1e-9), ErrorKind::Asymmetric,
            "mvie: symmetric mode needs facets in +- pairs with equal offsets");

  const Index d = body.dim();
  MvieProblem problem(body, general);
  Vector x = Vector::Zero(problem.size());
  x.head(sym_dim(d)) = svec_coords(Matrix(0.5 * body.offsets().minCoeff() * Matrix::Identity(d, d)));

  detail::BarrierOptions bopt;
  bopt.relative_centering = true;
  const detail::BarrierOutcome run = detail::barrier_solve(problem, x, cfg, bopt);
  SolveReport report = run.report;

  MvieResult result;
  result.ellipsoid = EllipsoidParam(Sym(problem.shape(x)), problem.center(x));
  const Vector s = constraint_slacks(body, result.ellipsoid);
  report.max_constraint_violation = std::max(0.0, -s.minCoeff());
  report.converged = report.converged && report.max_constraint_violation <= cfg.tol_kkt;
  result.report = report;
  require(report.converged, ErrorKind::NotConverged,
          "mvie: no convergence within " + std::to_string(cfg.max_newton_iters) + " Newton iterations (final mu " +
              std::to_string(report.final_mu) + ")");
  return result;
}

Vector constraint_slacks(const HPolytope& body, const EllipsoidParam& e) {
  require(e.dim() == body.dim(), ErrorKind::Dimension, "constraint_slacks: dimension mismatch");
  const Matrix w = e.A.matrix() * body.normals().transpose();
  return body.offsets() - body.normals() * e.a - w.colwise().norm().transpose();
}

HPolytope john_position(const HPolytope& body, const EllipsoidParam& e) {
  require(e.dim() == body.dim(), ErrorKind::Dimension, "john_position: dimension mismatch");
  // facet (v, h) -> (A v / ||A v||, (h - a.v) / ||A v||)
  const Matrix w = (e.A.matrix() * body.normals().transpose()).transpose();
  return HPolytope::unchecked(w, body.offsets() - body.normals() * e.a);
}

std::vector<Contact> contact_points(const HPolytope& body, const EllipsoidParam& e, double tol) {
  const Vector s = constraint_slacks(body, e);
  std::vector<Contact> out;
  for (Index i = 0; i < body.num_facets(); ++i) {
    if (s(i) > tol) continue;
    const Vector u = (e.A.matrix() * body.normal(i)).normalized();
    const bool duplicate =
        std::any_of(out.begin(), out.end(), [&](const Contact& c) { return (c.u - u).norm() <= 1e-8; });
    if (!duplicate) out.push_back({u, i});
  }
  return out;
}

}  // namespace johnbox
