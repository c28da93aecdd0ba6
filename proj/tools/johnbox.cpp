// johnbox: maximum-volume ellipsoids, John decompositions and their checks.
//
//   johnbox solve BODY [--mode symmetric|general|auto] [--tol T] [--max-iter N] [--out F]
//   johnbox certify BODY CERT [--theorem 1|2|3] [--tol T]
//   johnbox reduce CERT [--body BODY] [--tol T]
//   johnbox position BODY [--mode ...] [--tol T]
//   johnbox affine INNER CONTAINER [--seed S] [--starts K] [--tol T] [--max-iter N]
//   johnbox gen NAME DIM [SEED]
//
// JSON goes to stdout (or --out), diagnostics to stderr. JOHNBOX_LOG selects
// the stderr verbosity: quiet, error, info (default) or debug.
//
// Exit codes: 0 ok, 2 solver did not converge, 3 certificate rejected,
// 64 bad usage or malformed JSON, 65 input violates a precondition.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "johnbox/affine.hpp"
#include "johnbox/certify.hpp"
#include "johnbox/decomposition.hpp"
#include "johnbox/io.hpp"
#include "johnbox/solver.hpp"

namespace {

using namespace johnbox;

constexpr int kOk = 0;
constexpr int kNotConverged = 2;
constexpr int kRejected = 3;
constexpr int kUsage = 64;
constexpr int kDataError = 65;

enum class Level { Quiet, Error, Info, Debug };

Level log_level() {
  const char* env = std::getenv("JOHNBOX_LOG");
  if (!env) return Level::Info;
  const std::string s = env;
  if (s == "quiet" || s == "off" || s == "0") return Level::Quiet;
  if (s == "error" || s == "1") return Level::Error;
  if (s == "debug" || s == "3") return Level::Debug;
  return Level::Info;
}

template <typename... Args>
void log(Level level, const Args&... args) {
  if (level > log_level() || log_level() == Level::Quiet) return;
  std::ostringstream line;
  line << "johnbox: ";
  (line << ... << args);
  std::cerr << line.str() << '\n';
}

struct Options {
  std::string body, cert, inner, container, out, mode = "auto", gen_name;
  double tol = default_certify_tol;
  std::optional<int> max_iter, theorem;
  std::uint64_t seed = 0;
  int starts = 8;
  Index gen_dim = 0;
};

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  if (o.max_iter) cfg.max_newton_iters = *o.max_iter;
  return cfg;
}

void emit(const io::Json& j, const Options& o) {
  if (o.out.empty())
    std::cout << j.dump(2) << '\n';
  else
    io::write_file(o.out, j);
}

HPolytope load_container(const std::string& path) {
  LoadReport rep;
  HPolytope body = io::hpolytope_from_json(io::read_file(path), &rep);
  log(Level::Debug, path, ": ", rep.facets, " facets, ", rep.rescaled, " rescaled (max deviation ",
      rep.max_norm_deviation, ")");
  if (rep.rescaled > 0) log(Level::Info, path, ": normalized ", rep.rescaled, " facet normals");
  return body;
}

SolveMode pick_mode(const std::string& mode, const HPolytope& body) {
  if (mode == "symmetric") return SolveMode::Symmetric;
  if (mode == "general") return SolveMode::General;
  return body.is_centrally_symmetric() ? SolveMode::Symmetric : SolveMode::General;
}

// MVIE in the body's own coordinates. A general-mode body whose interior
// misses the origin is solved after moving its Chebyshev center there.
struct Positioned {
  MvieResult solve;       // in the shifted frame
  EllipsoidParam original;
  HPolytope shifted;
  SolveMode mode;
};

Positioned solve_body(const HPolytope& body, const Options& o) {
  const SolveMode mode = pick_mode(o.mode, body);
  Vector shift = Vector::Zero(body.dim());
  if (mode == SolveMode::General && !body.origin_interior()) {
    shift = chebyshev_ball(body).center;
    log(Level::Info, "origin is not interior; solving about the Chebyshev center");
  }
  HPolytope shifted = body.translated(shift);
  MvieResult res = mvie(shifted, mode, solver_config(o));
  log(Level::Info, mode == SolveMode::Symmetric ? "symmetric" : "general", " solve: ", res.report.iterations,
      " Newton steps, log det A = ", res.report.objective);
  EllipsoidParam original(res.ellipsoid.A, res.ellipsoid.a + shift);
  return {std::move(res), std::move(original), std::move(shifted), mode};
}

void log_verdict(const Certificate& cert) {
  const Residuals& r = cert.residuals;
  log(Level::Info, "theorem ", cert.theorem(), ": n = ", cert.bounds.n_actual, " in [", cert.bounds.n_min, ", ",
      cert.bounds.n_max, "]");
  log(Level::Info, "  identity residual  ", r.identity);
  log(Level::Info, "  center residual    ", r.center);
  log(Level::Info, "  unit-norm residual ", r.unit_norm);
  log(Level::Info, "  boundary residual  ", r.boundary);
  if (cert.contacts.kind != ContactKind::Theorem3) log(Level::Info, "  trace residual     ", r.trace);
  if (!cert.verdict) return;
  std::string failed;
  for (const std::string& f : cert.verdict->failures) failed += (failed.empty() ? "" : ", ") + f;
  if (cert.verdict->valid)
    log(Level::Info, "valid: ", cert.verdict->conclusion);
  else
    log(Level::Error, "rejected (", failed, "): ", cert.verdict->conclusion);
}

int verdict_code(const Certificate& cert) { return cert.verdict && cert.verdict->valid ? kOk : kRejected; }

int cmd_solve(const Options& o) {
  const HPolytope body = load_container(o.body);
  const Positioned p = solve_body(body, o);
  if (!p.solve.report.converged) throw Error(ErrorKind::NotConverged, "solver did not converge");

  const std::vector<Contact> touch = contact_points(p.shifted, p.solve.ellipsoid, default_contact_tol(p.shifted));
  ContactSet contacts;
  contacts.dim = body.dim();
  contacts.kind = p.mode == SolveMode::Symmetric ? ContactKind::Theorem1 : ContactKind::Theorem2;
  for (const Contact& c : touch) contacts.u.push_back(c.u);

  DecompositionResult fit;
  Certificate cert;
  cert.contacts = decompose_and_reduce(contacts, &fit);
  log(Level::Info, touch.size(), " contacts, weight residual ", fit.residual, ", reduced to ", cert.contacts.size());
  cert.ellipsoid = p.original;
  cert.report = p.solve.report;
  cert = check(body, std::move(cert), o.tol);
  log_verdict(cert);
  emit(io::to_json(cert), o);
  return verdict_code(cert);
}

int cmd_certify(const Options& o) {
  const HPolytope body = load_container(o.body);
  Certificate cert = io::certificate_from_json(io::read_file(o.cert));
  if (o.theorem) {
    const ContactKind kind = contact_kind(*o.theorem);
    if (kind == ContactKind::Theorem3 && cert.contacts.v.size() != cert.contacts.u.size())
      throw Error(ErrorKind::Parse, "theorem 3 needs a normal v for every contact");
    if (kind != ContactKind::Theorem3) cert.contacts.v.clear();
    cert.contacts.kind = kind;
  }
  cert = check(body, std::move(cert), o.tol);
  log_verdict(cert);
  emit(io::to_json(cert), o);
  return verdict_code(cert);
}

int cmd_reduce(const Options& o) {
  Certificate cert = io::certificate_from_json(io::read_file(o.cert));
  const ContactSet& c = cert.contacts;
  require(c.has_weights(), ErrorKind::Precondition, "reduce: certificate has no weights");
  std::vector<Index> positive;
  for (Index k = 0; k < c.size(); ++k)
    if (c.lambda[k] > 0.0) positive.push_back(k);
  Vector lam(static_cast<Index>(positive.size()));
  for (std::size_t k = 0; k < positive.size(); ++k) lam(static_cast<Index>(k)) = c.lambda[positive[k]];
  const ContactSet support = subset(c, positive, lam);
  const Matrix g = lifted_generators(support);
  const Reduction red = caratheodory_reduce(g, lam, g * lam);
  log(Level::Info, "reduced ", c.size(), " contacts to ", red.indices.size());
  cert.contacts = subset(support, red.indices, red.weights);
  cert.verdict.reset();
  cert.residuals = decomposition_residuals(cert.contacts);
  cert.bounds = check_bounds(cert.contacts);
  int code = kOk;
  if (!o.body.empty()) {
    cert = check(load_container(o.body), std::move(cert), o.tol);
    code = verdict_code(cert);
  }
  log_verdict(cert);
  emit(io::to_json(cert), o);
  return code;
}

int cmd_position(const Options& o) {
  const HPolytope body = load_container(o.body);
  const Positioned p = solve_body(body, o);
  if (!p.solve.report.converged) throw Error(ErrorKind::NotConverged, "solver did not converge");
  const HPolytope john = john_position(p.shifted, p.solve.ellipsoid);
  const double rho = containment_ratio(john, o.tol);
  const bool symmetric = john.is_centrally_symmetric(o.tol);
  const double root_d = std::sqrt(static_cast<double>(body.dim()));
  io::Json out = io::to_json(john);
  out["ellipsoid"] = io::to_json(p.original);
  out["containment_ratio"] = rho;
  out["sqrt_d"] = root_d;
  out["symmetric"] = symmetric;
  if (symmetric) {
    out["ratio_within_sqrt_d"] = rho <= root_d + o.tol;
    log(Level::Info, "containment ratio ", rho, symmetric && rho <= root_d + o.tol ? " <= " : " > ", "sqrt(d) = ", root_d);
  } else {
    log(Level::Info, "containment ratio ", rho);
  }
  emit(out, o);
  return kOk;
}

int cmd_affine(const Options& o) {
  const io::Json inner_json = io::read_file(o.inner);
  if (io::body_type(inner_json) != "vpolytope") throw Error(ErrorKind::Parse, "affine: the inner body must be a vpolytope");
  const VPolytope inner = io::vpolytope_from_json(inner_json);
  const HPolytope container = load_container(o.container);

  AffineOptions opt;
  opt.seed = o.seed;
  opt.starts = o.starts;
  const AffineResult res = max_affine_image(inner, container, solver_config(o), opt);
  log(Level::Info, "affine image: log |det M| = ", res.report.objective, " after ", res.report.iterations, " Newton steps");

  const double ctol = 1e-6 * std::max(1.0, container.max_offset());
  const ContactSet pairs = contact_pairs(inner, container, res.map, ctol);
  Certificate cert;
  if (pairs.size() > 0) {
    DecompositionResult fit;
    cert.contacts = decompose_and_reduce(pairs, &fit);
    log(Level::Info, pairs.size(), " contact pairs, weight residual ", fit.residual, ", reduced to ", cert.contacts.size());
  } else {
    cert.contacts = pairs;
  }
  cert.contacts.dim = container.dim();
  cert.contacts.kind = ContactKind::Theorem3;
  cert.map = res.map;
  cert.inner = inner;
  cert.report = res.report;
  cert = check_theorem3(container, std::move(cert), o.tol);
  log_verdict(cert);
  io::Json out = io::to_json(cert);
  out["polar"] = {{"A", io::matrix_to_json(res.polar.A.matrix())}, {"R", io::matrix_to_json(res.polar.R)}};
  emit(out, o);
  return verdict_code(cert);
}

int cmd_gen(const Options& o) {
  emit(io::to_json(make_standard(parse_standard_body(o.gen_name), o.gen_dim, o.seed)), o);
  return kOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotConverged: return kNotConverged;
    case ErrorKind::Parse:
    case ErrorKind::Dimension: return kUsage;
    default: return kDataError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-volume inscribed ellipsoids and John decompositions"};
  app.require_subcommand(1);
  Options o;

  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "certification tolerance")->check(CLI::PositiveNumber);
  };
  auto add_iter = [&](CLI::App* sub) {
    sub->add_option("--max-iter", o.max_iter, "total Newton step budget")->check(CLI::PositiveNumber);
  };
  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", o.mode, "symmetric, general or auto")
        ->check(CLI::IsMember({"symmetric", "general", "auto"}));
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "write JSON here instead of stdout"); };

  CLI::App* solve = app.add_subcommand("solve", "maximum-volume ellipsoid with a checked certificate");
  solve->add_option("body", o.body)->required()->check(CLI::ExistingFile);
  add_mode(solve);
  add_tol(solve);
  add_iter(solve);
  add_out(solve);

  CLI::App* certify = app.add_subcommand("certify", "check a certificate against a body");
  certify->add_option("body", o.body)->required()->check(CLI::ExistingFile);
  certify->add_option("cert", o.cert)->required()->check(CLI::ExistingFile);
  certify->add_option("--theorem", o.theorem, "override the certificate's theorem")->check(CLI::Range(1, 3));
  add_tol(certify);
  add_out(certify);

  CLI::App* reduce = app.add_subcommand("reduce", "Caratheodory-reduce a weighted certificate");
  reduce->add_option("cert", o.cert)->required()->check(CLI::ExistingFile);
  reduce->add_option("--body", o.body, "re-check the reduced certificate against this body")->check(CLI::ExistingFile);
  add_tol(reduce);
  add_out(reduce);

  CLI::App* position = app.add_subcommand("position", "body in John position and its containment ratio");
  position->add_option("body", o.body)->required()->check(CLI::ExistingFile);
  add_mode(position);
  add_tol(position);
  add_iter(position);
  add_out(position);

  CLI::App* affine = app.add_subcommand("affine", "largest affine image of INNER inside CONTAINER");
  affine->add_option("inner", o.inner)->required()->check(CLI::ExistingFile);
  affine->add_option("container", o.container)->required()->check(CLI::ExistingFile);
  affine->add_option("--seed", o.seed);
  affine->add_option("--starts", o.starts)->check(CLI::PositiveNumber);
  add_tol(affine);
  add_iter(affine);
  add_out(affine);

  CLI::App* gen = app.add_subcommand("gen", "standard body: cube, cross_polytope, simplex, random_symmetric");
  gen->add_option("name", o.gen_name)->required();
  gen->add_option("dim", o.gen_dim)->required()->check(CLI::PositiveNumber);
  gen->add_option("seed,--seed", o.seed, "random_symmetric seed");
  add_out(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*certify) return cmd_certify(o);
    if (*reduce) return cmd_reduce(o);
    if (*position) return cmd_position(o);
    if (*affine) return cmd_affine(o);
    if (*gen) return cmd_gen(o);
  } catch (const Error& e) {
    log(Level::Error, e.what());
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    log(Level::Error, "malformed JSON: ", e.what());
    return kUsage;
  }
  return kUsage;
}
