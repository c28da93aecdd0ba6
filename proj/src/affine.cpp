#include "johnbox/affine.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "barrier.hpp"

namespace johnbox {

AffineMap::AffineMap(Matrix m, Vector shift) : M(std::move(m)), a(std::move(shift)) {
  require(M.rows() == M.cols() && a.size() == M.rows(), ErrorKind::Dimension, "affine map: dimension mismatch");
  require(std::abs(M.determinant()) > 1e-12, ErrorKind::Singular, "affine map: |det M| must exceed 1e-12");
}

double AffineMap::log_abs_det() const { return std::log(std::abs(M.determinant())); }

namespace {

// x = (m_11, ..., m_1d, ..., m_dd, a); each constraint is s = h - c.x.
class AffineProblem {
 public:
  AffineProblem(const VPolytope& inner, const HPolytope& container) : d_(inner.dim()) {
    const Index nf = container.num_facets(), nv = inner.num_vertices();
    rows_.resize(nf * nv, size());
    rhs_.resize(nf * nv);
    for (Index i = 0; i < nf; ++i) {
      const Vector n = container.normal(i);
      for (Index j = 0; j < nv; ++j) {
        const Index r = i * nv + j;
        rows_.row(r) = lift_general(outer(n, inner.vertex(j)), n).coords.transpose();
        rhs_(r) = container.offset(i);
      }
    }
  }

  Index size() const { return d_ * (d_ + 1); }

  Matrix linear(const Vector& x) const { return unlift_general(LiftedPoint<double>{LiftKind::GenAffine, d_, x}).first; }

  std::optional<double> value(const Vector& x, double mu) const {
    const double det = linear(x).determinant();
    if (!(det > 0.0)) return std::nullopt;
    const Vector s = rhs_ - rows_ * x;
    if (s.minCoeff() <= 0.0) return std::nullopt;
    return -std::log(det) - mu * s.array().log().sum();
  }

  double objective(const Vector& x) const {
    const double det = linear(x).determinant();
    return det > 0.0 ? std::log(det) : -std::numeric_limits<double>::infinity();
  }

  // The Hessian of -log det M, tr(M^-1 D M^-1 D), is indefinite: skew parts of
  // M^-1 D carry negative curvature. It is replaced by ||M^-1 D||_F^2, which
  // agrees on the symmetric part and flips the sign on the skew part.
  void derivatives(const Vector& x, double mu, Vector& g, Matrix& h) const {
    const Index n = size();
    const Matrix m_inv = linear(x).inverse();
    const Matrix w = m_inv.transpose() * m_inv;
    g = Vector::Zero(n);
    h = Matrix::Zero(n, n);
    for (Index p = 0; p < d_; ++p)
      for (Index q = 0; q < d_; ++q) {
        g(p * d_ + q) = -m_inv(q, p);
        for (Index r = 0; r < d_; ++r) h(p * d_ + q, r * d_ + q) = w(p, r);
      }
    const Vector inv_s = (rhs_ - rows_ * x).cwiseInverse();
    g += mu * rows_.transpose() * inv_s;
    h.noalias() += mu * rows_.transpose() * inv_s.cwiseAbs2().asDiagonal() * rows_;
  }

  Vector newton_step(const Vector& g, const Matrix& h) const {
    const Matrix reg = h + 1e-12 * std::max(1.0, h.diagonal().maxCoeff()) * Matrix::Identity(h.rows(), h.cols());
    return -reg.ldlt().solve(g);
  }

  Vector pack(const AffineMap& map) const { return lift_general(map.M, map.a).coords; }
  AffineMap unpack(const Vector& x) const {
    auto [m, a] = unlift_general(LiftedPoint<double>{LiftKind::GenAffine, d_, x});
    return {m, a};
  }

 private:
  Index d_;
  Matrix rows_;
  Vector rhs_;
};

Matrix random_rotation(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Matrix g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace

AffineResult max_affine_image(const VPolytope& inner, const HPolytope& container, const SolverConfig& cfg,
                              const AffineOptions& opt) {
  cfg.validate();
  const Index d = inner.dim();
  require(container.dim() == d, ErrorKind::Dimension, "max_affine_image: dimension mismatch");
  require(inner.full_dimensional(), ErrorKind::Precondition, "max_affine_image: inner body is not full-dimensional");
  require(opt.starts >= 1 || opt.start, ErrorKind::Precondition, "max_affine_image: need at least one start");

  const Ball ball = chebyshev_ball(container);
  const Vector c_in = inner.centroid();
  const Matrix centered = inner.vertices().colwise() - c_in;
  AffineProblem problem(inner, container);

  std::vector<AffineMap> starts;
  if (opt.start) {
    const AffineMap& s = *opt.start;
    require(s.dim() == d, ErrorKind::Dimension, "max_affine_image: start dimension mismatch");
    require(s.M.determinant() > 0.0, ErrorKind::Precondition, "max_affine_image: start must have det M > 0");
    // Blend toward the collapsed image at the Chebyshev center, which is strictly feasible.
    const double blend = 1e-3;
    starts.emplace_back((1.0 - blend) * s.M, (1.0 - blend) * s.a + blend * ball.center);
  } else {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < opt.starts; ++k) {
      Matrix dir = Matrix::Identity(d, d);
      if (k > 0) {
        Vector scales(d);
        for (Index i = 0; i < d; ++i) scales(i) = std::exp(0.3 * gauss(rng));
        dir = random_rotation(d, rng) * scales.asDiagonal();
      }
      const double reach = (dir * centered).colwise().norm().maxCoeff();
      const double eps = 0.5 * ball.radius / std::max(reach, 1e-300);
      const Matrix m = eps * dir;
      starts.emplace_back(m, ball.center - m * c_in);
    }
  }

  detail::BarrierOptions bopt;
  bopt.monotone_objective = true;
  AffineResult best;
  double best_value = -std::numeric_limits<double>::infinity();
  bool have_best = false;
  for (const AffineMap& start : starts) {
    Vector x = problem.pack(start);
    require(problem.value(x, 1.0).has_value(), ErrorKind::Infeasible, "max_affine_image: start is not strictly feasible");
    detail::BarrierOutcome run = detail::barrier_solve(problem, x, cfg, bopt);
    const AffineMap found = problem.unpack(x);
    const Matrix image = (found.M * inner.vertices()).colwise() + found.a;
    const Matrix slack = (-(container.normals() * image)).colwise() + container.offsets();
    run.report.max_constraint_violation = std::max(0.0, -slack.minCoeff());
    if (opt.keep_stationary_points) {
      best.stationary.push_back(found);
      best.stationary_values.push_back(run.report.objective);
      best.stationary_converged.push_back(run.report.converged);
    }
    const bool better = !have_best || (run.report.converged && !best.report.converged) ||
                        (run.report.converged == best.report.converged && run.report.objective > best_value);
    if (better) {
      best.map = found;
      best.report = run.report;
      best.history = std::move(run.history);
      best_value = run.report.objective;
      have_best = true;
    }
  }
  require(best.report.converged, ErrorKind::NotConverged,
          "max_affine_image: no start converged within " + std::to_string(cfg.max_newton_iters) + " Newton iterations");
  best.polar = polar_decompose(best.map.M);
  return best;
}

ContactSet contact_pairs(const VPolytope& inner, const HPolytope& container, const AffineMap& map, double tol) {
  const Index d = inner.dim();
  require(container.dim() == d && map.dim() == d, ErrorKind::Dimension, "contact_pairs: dimension mismatch");
  ContactSet out;
  out.dim = d;
  out.kind = ContactKind::Theorem3;
  for (Index j = 0; j < inner.num_vertices(); ++j) {
    const Vector u = map.apply(inner.vertex(j));
    const BoundaryQuery q = classify(container, u, tol);
    require(q.location != Location::Exterior, ErrorKind::NotContained,
            "contact_pairs: image vertex " + std::to_string(j) + " lies outside the container");
    for (Index i : q.active_facets) {
      out.u.push_back(u);
      out.v.push_back(container.normal(i));
    }
  }
  return out;
}

}  // namespace johnbox
