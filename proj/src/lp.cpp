#include "johnbox/lp.hpp"

#include <limits>
#include <vector>

namespace johnbox::lp {
namespace {

constexpr double kPivotTol = 1e-11;

// Tableau with the objective row stored last; column `cols - 1` is the rhs.
struct Tableau {
  Matrix t;
  std::vector<Index> basis;

  Index rows() const { return t.rows() - 1; }
  Index vars() const { return t.cols() - 1; }

  void pivot(Index r, Index c) {
    t.row(r) /= t(r, c);
    for (Index i = 0; i < t.rows(); ++i) {
      if (i == r) continue;
      const double f = t(i, c);
      if (f != 0.0) t.row(i) -= f * t.row(r);
    }
    basis[r] = c;
  }

  // Bland's rule over the columns allowed by `eligible`. Returns false on an
  // unbounded ray.
  template <typename Eligible>
  bool run(Eligible eligible, double tol) {
    const Index max_iter = 50 * (t.rows() + t.cols()) + 1000;
    for (Index iter = 0; iter < max_iter; ++iter) {
      Index enter = -1;
      for (Index j = 0; j < vars(); ++j) {
        if (eligible(j) && t(rows(), j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < rows(); ++i)
        if (t(i, enter) > kPivotTol) best = std::min(best, t(i, vars()) / t(i, enter));
      if (best == std::numeric_limits<double>::infinity()) return false;
      Index leave = -1;
      for (Index i = 0; i < rows(); ++i) {
        if (t(i, enter) > kPivotTol && t(i, vars()) / t(i, enter) <= best + 1e-13 &&
            (leave < 0 || basis[i] < basis[leave]))
          leave = i;
      }
      pivot(leave, enter);
    }
    throw Error(ErrorKind::NotConverged, "simplex: iteration limit reached");
  }
};

struct Phase1 {
  Tableau tab;
  Index n = 0;
  double infeasibility = 0.0;
};

Phase1 phase_one(const Matrix& a, const Vector& b, double tol) {
  require(a.rows() == b.size(), ErrorKind::Dimension, "lp: row count mismatch");
  const Index m = a.rows(), n = a.cols();
  Phase1 p;
  p.n = n;
  Tableau& tab = p.tab;
  tab.t = Matrix::Zero(m + 1, n + m + 1);
  tab.basis.resize(m);
  for (Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = sign * a.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, n + m) = sign * b(i);
    tab.basis[i] = n + i;
  }
  // Objective: minimize the sum of artificials, expressed in nonbasic terms.
  for (Index i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (Index i = 0; i < m; ++i) tab.t(m, n + i) = 0.0;
  tab.run([](Index) { return true; }, tol);
  p.infeasibility = -tab.t(m, n + m);

  // Drive artificials out of the basis where possible; rows that cannot be
  // pivoted are redundant and are dropped.
  std::vector<Index> keep;
  for (Index i = 0; i < m; ++i) {
    if (tab.basis[i] >= n) {
      Index col = -1;
      for (Index j = 0; j < n; ++j) {
        if (std::abs(tab.t(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) tab.pivot(i, col);
    }
  }
  for (Index i = 0; i < m; ++i)
    if (tab.basis[i] < n) keep.push_back(i);
  if (static_cast<Index>(keep.size()) != m) {
    Matrix t(static_cast<Index>(keep.size()) + 1, tab.t.cols());
    std::vector<Index> basis;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      t.row(static_cast<Index>(k)) = tab.t.row(keep[k]);
      basis.push_back(tab.basis[keep[k]]);
    }
    t.row(t.rows() - 1) = tab.t.row(m);
    tab.t = std::move(t);
    tab.basis = std::move(basis);
  }
  return p;
}

Vector extract(const Tableau& tab, Index n) {
  Vector x = Vector::Zero(n);
  for (Index i = 0; i < tab.rows(); ++i)
    if (tab.basis[i] < n) x(tab.basis[i]) = tab.t(i, tab.vars());
  return x;
}

}  // namespace

Result find_nonnegative(const Matrix& a, const Vector& b, double tol) {
  Phase1 p = phase_one(a, b, tol);
  Result r;
  r.infeasibility = p.infeasibility;
  r.x = extract(p.tab, p.n);
  r.status = p.infeasibility <= tol * (1.0 + b.lpNorm<1>()) ? Status::Optimal : Status::Infeasible;
  return r;
}

Result solve_standard(const Matrix& a, const Vector& b, const Vector& c, double tol) {
  require(c.size() == a.cols(), ErrorKind::Dimension, "lp: cost length mismatch");
  Phase1 p = phase_one(a, b, tol);
  Result r;
  r.infeasibility = p.infeasibility;
  if (p.infeasibility > tol * (1.0 + b.lpNorm<1>())) {
    r.status = Status::Infeasible;
    return r;
  }
  const Index n = p.n;
  Tableau& tab = p.tab;
  const Index obj = tab.rows();
  tab.t.row(obj).setZero();
  tab.t.row(obj).head(n) = c.transpose();
  for (Index i = 0; i < tab.rows(); ++i) {
    const double f = tab.t(obj, tab.basis[i]);
    if (f != 0.0) tab.t.row(obj) -= f * tab.t.row(i);
  }
  const bool bounded = tab.run([n](Index j) { return j < n; }, tol);
  r.x = extract(tab, n);
  if (!bounded) {
    r.status = Status::Unbounded;
    return r;
  }
  r.status = Status::Optimal;
  r.objective = c.dot(r.x);
  return r;
}

Result maximize(const Vector& c, const Matrix& g, const Vector& h, double tol) {
  require(g.cols() == c.size() && g.rows() == h.size(), ErrorKind::Dimension, "lp: dimension mismatch");
  const Index m = g.rows(), d = g.cols();
  Matrix a(m, 2 * d + m);
  a << g, -g, Matrix::Identity(m, m);
  Vector cost = Vector::Zero(2 * d + m);
  cost.head(d) = -c;
  cost.segment(d, d) = c;
  Result r = solve_standard(a, h, cost, tol);
  if (r.status == Status::Optimal) {
    r.x = (r.x.head(d) - r.x.segment(d, d)).eval();
    r.objective = c.dot(r.x);
  }
  return r;
}

}  // namespace johnbox::lp
