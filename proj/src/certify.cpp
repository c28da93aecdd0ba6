#include "johnbox/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "johnbox/lp.hpp"

namespace johnbox {

namespace {

const char* const kNecessaryOnly = "necessary-condition check only; does not certify maximality";

Vector weights_of(const ContactSet& c) {
  require(c.has_weights(), ErrorKind::Precondition, "certificate: contacts carry no weights");
  require(static_cast<Index>(c.lambda.size()) == c.size(), ErrorKind::Dimension, "certificate: weight count mismatch");
  return Eigen::Map<const Vector>(c.lambda.data(), c.size());
}

void require_inscribed(const HPolytope& body, double tol, const char* who) {
  require(body.offsets().minCoeff() >= 1.0 - tol, ErrorKind::Precondition,
          std::string(who) + ": the unit ball is not inscribed (min offset " +
              std::to_string(body.offsets().minCoeff()) + ")");
}

void add_failure(Verdict& v, bool ok, const char* name) {
  if (!ok) v.failures.emplace_back(name);
}

// Shared part of theorems 1 and 2; `body` is already in John position.
Certificate check_ball(const HPolytope& body, Certificate cert, double tol, bool general) {
  const ContactSet& c = cert.contacts;
  require(c.dim == body.dim(), ErrorKind::Dimension, "certificate: dimension mismatch with the body");
  const Vector lam = weights_of(c);

  Residuals r = decomposition_residuals(c);
  Verdict v;
  v.on_boundary = true;
  for (Index k = 0; k < c.size(); ++k) {
    const BoundaryQuery q = classify(body, c.u[k], tol);
    r.boundary = std::max(r.boundary, std::abs(q.max_violation));
    v.on_boundary = v.on_boundary && q.location == Location::Boundary;
  }
  v.unit_norm = r.unit_norm <= tol;
  v.positive_weights = c.size() > 0 && (lam.array() > 0.0).all();
  v.identity = r.identity <= tol;
  v.center = !general || r.center <= tol;
  cert.bounds = check_bounds(c);
  v.bounds = cert.bounds.n_min_ok && cert.bounds.n_max_ok;
  v.in_inner = v.normal_cone = true;
  v.valid = v.unit_norm && v.on_boundary && v.positive_weights && v.identity && v.center && v.bounds;

  add_failure(v, v.unit_norm, "unit_norm");
  add_failure(v, v.on_boundary, "boundary");
  add_failure(v, v.positive_weights, "weights");
  add_failure(v, v.identity, "identity");
  add_failure(v, v.center, "center");
  add_failure(v, v.bounds, "bounds");
  if (v.valid)
    v.conclusion = cert.ellipsoid ? "the certified ellipsoid is the unique maximum-volume ellipsoid in C"
                                  : "the unit ball is the unique maximum-volume ellipsoid in C";
  else
    v.conclusion = "certificate rejected";

  cert.residuals = r;
  cert.verdict = std::move(v);
  return cert;
}

HPolytope positioned(const HPolytope& body, const Certificate& cert) {
  return cert.ellipsoid ? john_position(body, *cert.ellipsoid) : body;
}

}  // namespace

Residuals decomposition_residuals(const ContactSet& c) {
  const Vector lam = weights_of(c);
  const Index d = c.dim;
  const bool paired = c.kind == ContactKind::Theorem3;
  Matrix s = Matrix::Zero(d, d);
  Vector center = Vector::Zero(d);
  Residuals r;
  for (Index k = 0; k < c.size(); ++k) {
    const Vector& u = c.u[k];
    const Vector& w = paired ? c.v[k] : u;
    s += lam(k) * u * w.transpose();
    center += lam(k) * w;
    r.unit_norm = std::max(r.unit_norm, std::abs(w.norm() - 1.0));
  }
  r.identity = (s - Matrix::Identity(d, d)).norm();
  if (c.kind != ContactKind::Theorem1) r.center = center.norm();
  if (!paired) r.trace = std::abs(lam.sum() - static_cast<double>(d));
  r.min_lambda = c.size() ? lam.minCoeff() : 0.0;
  return r;
}

Certificate check_theorem1(const HPolytope& body, Certificate cert, double tol) {
  require(cert.contacts.kind == ContactKind::Theorem1, ErrorKind::Precondition, "check_theorem1: not a theorem-1 certificate");
  const HPolytope c = positioned(body, cert);
  require(c.is_centrally_symmetric(tol), ErrorKind::Asymmetric, "check_theorem1: body is not centrally symmetric");
  require_inscribed(c, tol, "check_theorem1");
  return check_ball(c, std::move(cert), tol, false);
}

Certificate check_theorem2(const HPolytope& body, Certificate cert, double tol) {
  require(cert.contacts.kind == ContactKind::Theorem2, ErrorKind::Precondition, "check_theorem2: not a theorem-2 certificate");
  const HPolytope c = positioned(body, cert);
  require_inscribed(c, tol, "check_theorem2");
  return check_ball(c, std::move(cert), tol, true);
}

Certificate check_theorem3(const HPolytope& body, Certificate cert, double tol) {
  const ContactSet& c = cert.contacts;
  require(c.kind == ContactKind::Theorem3, ErrorKind::Precondition, "check_theorem3: not a theorem-3 certificate");
  require(cert.inner.has_value(), ErrorKind::Precondition, "check_theorem3: certificate has no inner body");
  require(c.dim == body.dim() && cert.inner->dim() == body.dim(), ErrorKind::Dimension, "check_theorem3: dimension mismatch");
  const Vector lam = weights_of(c);

  const VPolytope image = cert.map ? affine_image(*cert.inner, cert.map->M, cert.map->a) : *cert.inner;
  const Matrix viol = (body.normals() * image.vertices()).colwise() - body.offsets();
  require(viol.maxCoeff() <= tol, ErrorKind::NotContained,
          "check_theorem3: the inner body is not contained in C (violation " + std::to_string(viol.maxCoeff()) + ")");

  Residuals r = decomposition_residuals(c);
  Verdict v;
  v.on_boundary = v.in_inner = v.normal_cone = true;
  for (Index k = 0; k < c.size(); ++k) {
    const BoundaryQuery q = classify(body, c.u[k], tol);
    r.boundary = std::max(r.boundary, std::abs(q.max_violation));
    const bool on = q.location == Location::Boundary;
    v.on_boundary = v.on_boundary && on;
    v.in_inner = v.in_inner && contains(image, c.u[k], tol);
    if (on) {
      std::vector<Vector> gens;
      for (Index i : q.active_facets) gens.push_back(body.normal(i));
      v.normal_cone = v.normal_cone && in_cone(gens, c.v[k], normal_cone_tol);
    } else {
      v.normal_cone = false;
    }
  }
  v.unit_norm = r.unit_norm <= tol;
  v.positive_weights = c.size() > 0 && (lam.array() > 0.0).all();
  v.identity = r.identity <= tol;
  v.center = r.center <= tol;
  cert.bounds = check_bounds(c);
  v.bounds = cert.bounds.n_min_ok && cert.bounds.n_max_ok;
  v.valid = v.unit_norm && v.on_boundary && v.in_inner && v.normal_cone && v.positive_weights && v.identity &&
            v.center && v.bounds;

  add_failure(v, v.unit_norm, "unit_norm");
  add_failure(v, v.on_boundary, "boundary");
  add_failure(v, v.in_inner, "inner");
  add_failure(v, v.normal_cone, "normal_cone");
  add_failure(v, v.positive_weights, "weights");
  add_failure(v, v.identity, "identity");
  add_failure(v, v.center, "center");
  add_failure(v, v.bounds, "bounds");
  v.conclusion = v.valid ? std::string("conditions hold; ") + kNecessaryOnly
                         : std::string("conditions fail; ") + kNecessaryOnly;

  cert.residuals = r;
  cert.verdict = std::move(v);
  return cert;
}

Certificate check(const HPolytope& body, Certificate cert, double tol) {
  switch (cert.contacts.kind) {
    case ContactKind::Theorem1: return check_theorem1(body, std::move(cert), tol);
    case ContactKind::Theorem2: return check_theorem2(body, std::move(cert), tol);
    case ContactKind::Theorem3: return check_theorem3(body, std::move(cert), tol);
  }
  return cert;
}

namespace {

double binomial(Index n, Index k) {
  double r = 1.0;
  for (Index i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double max_vertex_norm(const HPolytope& body) {
  const Index d = body.dim(), m = body.num_facets();
  const double feas = 1e-9 * std::max(1.0, body.max_offset());
  std::vector<Index> idx(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) idx[i] = i;
  Matrix n(d, d);
  Vector h(d);
  double best = 0.0;
  for (;;) {
    for (Index i = 0; i < d; ++i) {
      n.row(i) = body.normals().row(idx[i]);
      h(i) = body.offset(idx[i]);
    }
    Eigen::FullPivLU<Matrix> lu(n);
    if (lu.isInvertible()) {
      const Vector x = lu.solve(h);
      if ((body.normals() * x - body.offsets()).maxCoeff() <= feas) best = std::max(best, x.norm());
    }
    // next d-subset in lexicographic order
    Index i = d - 1;
    while (i >= 0 && idx[i] == m - d + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (Index j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

// ||x|| is convex, so x -> argmax (x/||x||).y over C never decreases it.
double ascent_norm(const HPolytope& body, int directions) {
  const Index d = body.dim();
  std::mt19937_64 rng(0x6a6f686e);
  std::normal_distribution<double> gauss;
  double best = 0.0;
  for (int k = 0; k < directions + 2 * static_cast<int>(d); ++k) {
    Vector w(d);
    if (k < 2 * d) {
      w.setZero();
      w(k / 2) = k % 2 ? -1.0 : 1.0;
    } else {
      for (Index i = 0; i < d; ++i) w(i) = gauss(rng);
    }
    double last = -1.0;
    for (int it = 0; it < 100; ++it) {
      const lp::Result r = lp::maximize(w, body.normals(), body.offsets());
      if (r.status != lp::Status::Optimal) break;
      const double nx = r.x.norm();
      if (nx <= last * (1.0 + 1e-12)) break;
      last = nx;
      w = r.x / nx;
    }
    best = std::max(best, last);
  }
  return best;
}

}  // namespace

double containment_ratio(const HPolytope& body, double tol, double max_subsets) {
  require_inscribed(body, tol, "containment_ratio");
  if (binomial(body.num_facets(), body.dim()) <= max_subsets) return max_vertex_norm(body);
  return ascent_norm(body, 2000);
}

}  // namespace johnbox
