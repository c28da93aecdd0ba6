#include "johnbox/io.hpp"

#include <fstream>
#include <sstream>

namespace johnbox::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::Parse, "malformed JSON: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) malformed(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) malformed(std::string(what) + " must be a number");
  return j.get<double>();
}

Index dim_field(const Json& j) {
  const Json& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<long long>() < 1) malformed("\"dim\" must be a positive integer");
  return static_cast<Index>(d.get<long long>());
}

Json bounds_to_json(const Bounds& b) {
  return {{"n", b.n_actual},      {"n_min", b.n_min},       {"n_max", b.n_max},
          {"n_min_ok", b.n_min_ok}, {"n_max_ok", b.n_max_ok}, {"span_ok", b.span_ok}};
}

Json residuals_to_json(const Residuals& r) {
  return {{"identity", r.identity}, {"center", r.center}, {"unit_norm", r.unit_norm},
          {"boundary", r.boundary}, {"trace", r.trace},   {"min_lambda", r.min_lambda}};
}

Json verdict_to_json(const Verdict& v, ContactKind kind) {
  Json checks = {{"unit_norm", v.unit_norm},
                 {"on_boundary", v.on_boundary},
                 {"positive_weights", v.positive_weights},
                 {"identity", v.identity},
                 {"bounds", v.bounds}};
  if (kind != ContactKind::Theorem1) checks["center"] = v.center;
  if (kind == ContactKind::Theorem3) {
    checks["in_inner"] = v.in_inner;
    checks["normal_cone"] = v.normal_cone;
  }
  return {{"valid", v.valid}, {"checks", checks}, {"failures", v.failures}, {"conclusion", v.conclusion}};
}

}  // namespace

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) malformed("expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number(j[i], "vector entry");
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) malformed("expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) malformed("matrix rows must be nonempty arrays");
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = vector_from_json(j[i]);
    if (static_cast<std::size_t>(row.size()) != cols) malformed("ragged matrix");
    m.row(static_cast<Index>(i)) = row.transpose();
  }
  return m;
}

Json to_json(const HPolytope& body) {
  Json facets = Json::array();
  for (Index i = 0; i < body.num_facets(); ++i)
    facets.push_back({{"normal", vector_to_json(body.normal(i))}, {"offset", body.offset(i)}});
  return {{"type", "hpolytope"}, {"dim", body.dim()}, {"facets", facets}};
}

Json to_json(const VPolytope& body) {
  return {{"type", "vpolytope"}, {"dim", body.dim()}, {"vertices", matrix_to_json(body.vertices().transpose())}};
}

Json to_json(const LoadReport& r) {
  return {{"facets", r.facets},
          {"rescaled", r.rescaled},
          {"max_norm_deviation", r.max_norm_deviation},
          {"duplicates_removed", r.duplicates_removed}};
}

Json to_json(const EllipsoidParam& e) { return {{"A", matrix_to_json(e.A.matrix())}, {"a", vector_to_json(e.a)}}; }

Json to_json(const AffineMap& map) { return {{"M", matrix_to_json(map.M)}, {"a", vector_to_json(map.a)}}; }

Json to_json(const SolveReport& r) {
  return {{"iterations", r.iterations},
          {"final_mu", r.final_mu},
          {"objective", r.objective},
          {"max_constraint_violation", r.max_constraint_violation},
          {"converged", r.converged}};
}

Json to_json(const Certificate& cert) {
  const ContactSet& c = cert.contacts;
  Json out = {{"theorem", cert.theorem()}};
  if (cert.ellipsoid) out["ellipsoid"] = to_json(*cert.ellipsoid);
  if (cert.map) out["map"] = to_json(*cert.map);
  if (cert.inner) out["inner"] = to_json(*cert.inner);
  Json contacts = Json::array();
  for (Index k = 0; k < c.size(); ++k) {
    Json e = {{"u", vector_to_json(c.u[k])}};
    if (c.kind == ContactKind::Theorem3) e["v"] = vector_to_json(c.v[k]);
    if (c.has_weights()) e["lambda"] = c.lambda[k];
    contacts.push_back(std::move(e));
  }
  out["contacts"] = std::move(contacts);
  out["residuals"] = residuals_to_json(cert.residuals);
  out["bounds"] = bounds_to_json(cert.bounds);
  if (cert.verdict) out["verdict"] = verdict_to_json(*cert.verdict, c.kind);
  if (cert.report) out["report"] = to_json(*cert.report);
  return out;
}

std::string body_type(const Json& j) {
  const Json& t = field(j, "type");
  if (!t.is_string()) malformed("\"type\" must be a string");
  const std::string s = t.get<std::string>();
  if (s != "hpolytope" && s != "vpolytope") malformed("unknown body type \"" + s + "\"");
  return s;
}

HPolytope hpolytope_from_json(const Json& j, LoadReport* report) {
  if (body_type(j) != "hpolytope") malformed("expected an hpolytope");
  const Index d = dim_field(j);
  const Json& facets = field(j, "facets");
  if (!facets.is_array()) malformed("\"facets\" must be an array");
  Matrix n(static_cast<Index>(facets.size()), d);
  Vector h(static_cast<Index>(facets.size()));
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const Vector row = vector_from_json(field(facets[i], "normal"));
    if (row.size() != d) malformed("facet " + std::to_string(i) + " normal has the wrong dimension");
    n.row(static_cast<Index>(i)) = row.transpose();
    h(static_cast<Index>(i)) = number(field(facets[i], "offset"), "offset");
  }
  return HPolytope(n, h, report);
}

VPolytope vpolytope_from_json(const Json& j) {
  if (body_type(j) != "vpolytope") malformed("expected a vpolytope");
  const Index d = dim_field(j);
  const Matrix rows = matrix_from_json(field(j, "vertices"));
  if (rows.cols() != d) malformed("vertex dimension differs from \"dim\"");
  return VPolytope(rows.transpose());
}

EllipsoidParam ellipsoid_from_json(const Json& j) {
  Matrix a = matrix_from_json(field(j, "A"));
  return EllipsoidParam(Sym(a), vector_from_json(field(j, "a")));
}

AffineMap affine_map_from_json(const Json& j) {
  return AffineMap(matrix_from_json(field(j, "M")), vector_from_json(field(j, "a")));
}

SolveReport solve_report_from_json(const Json& j) {
  SolveReport r;
  const Json& it = field(j, "iterations");
  if (!it.is_number_integer()) malformed("\"iterations\" must be an integer");
  r.iterations = it.get<int>();
  r.final_mu = number(field(j, "final_mu"), "final_mu");
  r.objective = number(field(j, "objective"), "objective");
  r.max_constraint_violation = number(field(j, "max_constraint_violation"), "max_constraint_violation");
  const Json& conv = field(j, "converged");
  if (!conv.is_boolean()) malformed("\"converged\" must be a boolean");
  r.converged = conv.get<bool>();
  return r;
}

Certificate certificate_from_json(const Json& j) {
  const Json& t = field(j, "theorem");
  if (!t.is_number_integer()) malformed("\"theorem\" must be 1, 2 or 3");
  Certificate cert;
  cert.contacts.kind = contact_kind(t.get<int>());
  if (j.contains("ellipsoid")) cert.ellipsoid = ellipsoid_from_json(j["ellipsoid"]);
  if (j.contains("map")) cert.map = affine_map_from_json(j["map"]);
  if (j.contains("inner")) cert.inner = vpolytope_from_json(j["inner"]);
  if (j.contains("report")) cert.report = solve_report_from_json(j["report"]);

  const Json& contacts = field(j, "contacts");
  if (!contacts.is_array()) malformed("\"contacts\" must be an array");
  const bool paired = cert.contacts.kind == ContactKind::Theorem3;
  bool weighted = true;
  for (const Json& e : contacts) weighted = weighted && e.is_object() && e.contains("lambda");
  for (const Json& e : contacts) {
    cert.contacts.u.push_back(vector_from_json(field(e, "u")));
    if (paired) cert.contacts.v.push_back(vector_from_json(field(e, "v")));
    if (weighted) cert.contacts.lambda.push_back(number(e["lambda"], "lambda"));
  }
  if (!cert.contacts.u.empty()) {
    cert.contacts.dim = cert.contacts.u.front().size();
  } else if (cert.ellipsoid) {
    cert.contacts.dim = cert.ellipsoid->dim();
  } else if (cert.map) {
    cert.contacts.dim = cert.map->dim();
  } else {
    malformed("certificate has neither contacts nor geometry to fix the dimension");
  }
  for (Index k = 0; k < cert.contacts.size(); ++k) {
    if (cert.contacts.u[k].size() != cert.contacts.dim || (paired && cert.contacts.v[k].size() != cert.contacts.dim))
      malformed("contact " + std::to_string(k) + " has the wrong dimension");
  }
  return cert;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace johnbox::io
