#include "johnbox/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace johnbox {

int theorem_number(ContactKind kind) {
  switch (kind) {
    case ContactKind::Theorem1: return 1;
    case ContactKind::Theorem2: return 2;
    case ContactKind::Theorem3: return 3;
  }
  return 0;
}

ContactKind contact_kind(int theorem) {
  switch (theorem) {
    case 1: return ContactKind::Theorem1;
    case 2: return ContactKind::Theorem2;
    case 3: return ContactKind::Theorem3;
    default: throw Error(ErrorKind::Parse, "theorem must be 1, 2 or 3, got " + std::to_string(theorem));
  }
}

void ContactSet::validate(double tol) const {
  require(dim >= 1, ErrorKind::Dimension, "contact set: dimension must be positive");
  const bool paired = kind == ContactKind::Theorem3;
  require(!paired || v.size() == u.size(), ErrorKind::Dimension, "contact set: theorem-3 contacts need one normal per point");
  require(lambda.empty() || lambda.size() == u.size(), ErrorKind::Dimension, "contact set: weight count mismatch");
  for (std::size_t k = 0; k < u.size(); ++k) {
    require(u[k].size() == dim, ErrorKind::Dimension, "contact set: point dimension mismatch");
    if (paired) {
      require(v[k].size() == dim, ErrorKind::Dimension, "contact set: normal dimension mismatch");
      require(std::abs(v[k].norm() - 1.0) <= tol, ErrorKind::Precondition, "contact set: normal v_k is not unit");
    } else {
      require(std::abs(u[k].norm() - 1.0) <= tol, ErrorKind::Precondition, "contact set: contact u_k is not unit");
    }
    if (!lambda.empty()) require(lambda[k] > 0.0, ErrorKind::Precondition, "contact set: weights must be positive");
  }
}

Matrix lifted_generators(const ContactSet& c) {
  const Index d = c.dim, n = c.size();
  Matrix g;
  switch (c.kind) {
    case ContactKind::Theorem1:
      g.resize(sym_dim(d), n);
      for (Index k = 0; k < n; ++k) g.col(k) = svec_coords(outer(c.u[k], c.u[k]));
      break;
    case ContactKind::Theorem2:
      g.resize(lifted_dim(LiftKind::SymAffine, d), n);
      for (Index k = 0; k < n; ++k) g.col(k) << svec_coords(outer(c.u[k], c.u[k])), c.u[k];
      break;
    case ContactKind::Theorem3:
      g.resize(lifted_dim(LiftKind::GenAffine, d), n);
      for (Index k = 0; k < n; ++k) g.col(k) = lift_general(outer(c.u[k], c.v[k]), c.v[k]).coords;
      break;
  }
  return g;
}

Vector lifted_target(ContactKind kind, Index d) {
  const Matrix eye = Matrix::Identity(d, d);
  switch (kind) {
    case ContactKind::Theorem1: return svec_coords(eye);
    case ContactKind::Theorem2: return lift_affine(Sym(eye), Vector::Zero(d)).coords;
    case ContactKind::Theorem3: return lift_general(eye, Vector::Zero(d)).coords;
  }
  return {};
}

NnlsResult nnls(const Matrix& g, const Vector& t) {
  require(g.rows() == t.size(), ErrorKind::Dimension, "nnls: dimension mismatch");
  const Index n = g.cols();
  NnlsResult res;
  res.x = Vector::Zero(n);
  if (n == 0) {
    res.residual = t.norm();
    return res;
  }
  const double tol = 1e-13 * std::max(1.0, g.norm()) * std::max(1.0, t.norm());
  std::vector<char> passive(n, 0), skip(n, 0);
  Vector& x = res.x;
  Vector w = g.transpose() * (t - g * x);
  const int max_iter = static_cast<int>(3 * n + 50);

  auto solve_passive = [&](Vector& z) {
    std::vector<Index> idx;
    for (Index k = 0; k < n; ++k)
      if (passive[k]) idx.push_back(k);
    Matrix sub(g.rows(), static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Index>(k)) = g.col(idx[k]);
    const Vector zp = sub.colPivHouseholderQr().solve(t);
    z = Vector::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Index>(k));
  };

  while (res.iterations < max_iter) {
    Index enter = -1;
    double best = tol;
    for (Index k = 0; k < n; ++k) {
      if (!passive[k] && !skip[k] && w(k) > best) {
        best = w(k);
        enter = k;
      }
    }
    if (enter < 0) break;
    passive[enter] = 1;

    Vector z;
    bool first = true;
    for (;;) {
      ++res.iterations;
      solve_passive(z);
      if (first && z(enter) <= 0.0) {
        // Numerically dependent column; leave it out for this sweep.
        passive[enter] = 0;
        skip[enter] = 1;
        z = x;
        break;
      }
      first = false;
      bool all_positive = true;
      double alpha = 1.0;
      for (Index k = 0; k < n; ++k) {
        if (passive[k] && z(k) <= 0.0) {
          all_positive = false;
          alpha = std::min(alpha, x(k) / (x(k) - z(k)));
        }
      }
      if (all_positive || res.iterations >= max_iter) break;
      x += alpha * (z - x);
      for (Index k = 0; k < n; ++k) {
        if (passive[k] && x(k) <= 1e-15) {
          passive[k] = 0;
          x(k) = 0.0;
        }
      }
    }
    x = z.cwiseMax(0.0);
    w = g.transpose() * (t - g * x);
    if (!skip[enter]) std::fill(skip.begin(), skip.end(), 0);
  }
  res.residual = (g * x - t).norm();
  return res;
}

namespace {

std::vector<Index> positive_support(const Vector& w) {
  std::vector<Index> s;
  for (Index k = 0; k < w.size(); ++k)
    if (w(k) > 0.0) s.push_back(k);
  return s;
}

}  // namespace

Bounds check_bounds(const ContactSet& c) {
  const Index d = c.dim;
  Bounds b;
  switch (c.kind) {
    case ContactKind::Theorem1:
      b.n_min = d;
      b.n_max = d * (d + 1) / 2;
      break;
    case ContactKind::Theorem2:
      b.n_min = d + 1;
      b.n_max = d * (d + 3) / 2;
      break;
    case ContactKind::Theorem3:
      b.n_min = d + 1;
      b.n_max = d * (d + 1);
      break;
  }
  const std::vector<Vector>& span_set = c.kind == ContactKind::Theorem3 ? c.v : c.u;
  std::vector<Index> counted;
  for (Index k = 0; k < c.size(); ++k)
    if (!c.has_weights() || c.lambda[k] > 0.0) counted.push_back(k);
  b.n_actual = static_cast<Index>(counted.size());
  b.n_min_ok = b.n_actual >= b.n_min;
  b.n_max_ok = b.n_actual <= b.n_max;
  if (!counted.empty()) {
    Matrix m(d, b.n_actual);
    for (Index k = 0; k < b.n_actual; ++k) m.col(k) = span_set[counted[k]];
    const Vector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
    b.span_ok = s.size() >= d && s(d - 1) > 1e-8;
  }
  return b;
}

DecompositionResult john_weights(const ContactSet& contacts) {
  require(contacts.size() > 0, ErrorKind::Precondition, "john_weights: no contacts");
  contacts.validate();
  const Matrix g = lifted_generators(contacts);
  const Vector t = lifted_target(contacts.kind, contacts.dim);
  const NnlsResult fit = nnls(g, t);

  DecompositionResult out;
  out.weights = fit.x;
  out.residual = (g * fit.x - t).norm();
  out.support = positive_support(fit.x);
  out.bounds = check_bounds(subset(contacts, out.support, fit.x(out.support)));
  return out;
}

Reduction caratheodory_reduce(const Matrix& generators, const Vector& lambda, const Vector& target) {
  const Index m = generators.rows(), n = generators.cols();
  require(lambda.size() == n && target.size() == m, ErrorKind::Dimension, "caratheodory_reduce: dimension mismatch");
  require((lambda.array() > 0.0).all(), ErrorKind::Precondition, "caratheodory_reduce: weights must be positive");
  const double gap = (generators * lambda - target).norm();
  require(gap <= 1e-8 * std::max(target.norm(), 1e-300), ErrorKind::Precondition,
          "caratheodory_reduce: weights do not reproduce the target (residual " + std::to_string(gap) + ")");

  std::vector<Index> active(static_cast<std::size_t>(n));
  std::iota(active.begin(), active.end(), Index(0));
  Vector w = lambda;

  while (!active.empty()) {
    const Index k = static_cast<Index>(active.size());
    Matrix sub(m, k);
    for (Index j = 0; j < k; ++j) sub.col(j) = generators.col(active[j]);
    Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    const bool dependent = k > m || s(k - 1) <= 1e-12 * std::max(s(0), 1e-300);
    if (!dependent) break;

    Vector z = svd.matrixV().col(k - 1);
    Index big;
    z.cwiseAbs().maxCoeff(&big);
    if (z(big) < 0.0) z = -z;

    Index drop = -1;
    double theta = 0.0;
    for (Index j = 0; j < k; ++j) {
      if (z(j) <= 1e-14) continue;
      const double ratio = w(active[j]) / z(j);
      if (drop < 0 || ratio < theta) {
        theta = ratio;
        drop = j;
      }
    }
    for (Index j = 0; j < k; ++j) w(active[j]) -= theta * z(j);
    w(active[drop]) = 0.0;
    std::vector<Index> next;
    for (Index idx : active)
      if (w(idx) > 0.0) next.push_back(idx);
    active = std::move(next);
  }

  Reduction out;
  out.indices = active;
  out.weights = w(active);
  return out;
}

Reduction caratheodory_reduce(const std::vector<LiftedPoint<double>>& generators, const Vector& lambda,
                              const LiftedPoint<double>& target) {
  Matrix g(target.ambient_dim(), static_cast<Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) {
    require(generators[k].kind == target.kind && generators[k].ambient_dim() == target.ambient_dim(),
            ErrorKind::Dimension, "caratheodory_reduce: generator kind mismatch");
    g.col(static_cast<Index>(k)) = generators[k].coords;
  }
  return caratheodory_reduce(g, lambda, target.coords);
}

ContactSet subset(const ContactSet& contacts, const std::vector<Index>& indices, const Vector& weights) {
  require(weights.size() == static_cast<Index>(indices.size()), ErrorKind::Dimension, "subset: weight count mismatch");
  ContactSet out;
  out.dim = contacts.dim;
  out.kind = contacts.kind;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.u.push_back(contacts.u[indices[k]]);
    if (contacts.kind == ContactKind::Theorem3) out.v.push_back(contacts.v[indices[k]]);
    out.lambda.push_back(weights(static_cast<Index>(k)));
  }
  return out;
}

ContactSet decompose_and_reduce(const ContactSet& contacts, DecompositionResult* weights_out) {
  const DecompositionResult fit = john_weights(contacts);
  if (weights_out) *weights_out = fit;
  const ContactSet support = subset(contacts, fit.support, fit.weights(fit.support));
  if (support.size() == 0) return support;
  const Matrix g = lifted_generators(support);
  const Vector lam = Eigen::Map<const Vector>(support.lambda.data(), support.size());
  const Reduction red = caratheodory_reduce(g, lam, g * lam);
  return subset(support, red.indices, red.weights);
}

}  // namespace johnbox
