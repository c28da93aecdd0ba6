#include <doctest.h>

#include "johnbox/io.hpp"
#include "support.hpp"

using namespace johnbox;

namespace {

// parse -> serialize -> parse -> serialize must be a fixed point
template <typename Read>
void round_trip(const io::Json& j, Read read) {
  const io::Json once = io::to_json(read(j));
  const io::Json twice = io::to_json(read(io::parse(once.dump())));
  CHECK(once.dump() == twice.dump());
}

}  // namespace

TEST_CASE("body JSON round trips") {
  testkit::Gen g(70);
  for (int trial = 0; trial < 20; ++trial) {
    const HPolytope c = testkit::symmetric_polytope(g, g.integer(2, 5), 3);
    round_trip(io::to_json(c), [](const io::Json& j) { return io::hpolytope_from_json(j); });
    Matrix pts = g.mat(3, 6);
    round_trip(io::to_json(VPolytope(pts)), [](const io::Json& j) { return io::vpolytope_from_json(j); });
  }
}

TEST_CASE("raw normals are normalized and reported") {
  const io::Json j = io::parse(R"({"type":"hpolytope","dim":1,"facets":[{"normal":[2],"offset":4},{"normal":[-1],"offset":1}]})");
  LoadReport rep;
  const HPolytope c = io::hpolytope_from_json(j, &rep);
  CHECK(rep.rescaled == 1);
  CHECK(c.offset(0) == doctest::Approx(2.0));
}

TEST_CASE("malformed input raises parse errors") {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Singular;  // not thrown
  };
  CHECK(kind_of([] { io::parse("{\"type\":"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { io::hpolytope_from_json(io::parse(R"({"type":"cube"})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { io::hpolytope_from_json(io::parse(R"({"type":"hpolytope","dim":2})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] {
          io::hpolytope_from_json(io::parse(R"({"type":"hpolytope","dim":2,"facets":[{"normal":[1],"offset":1}]})"));
        }) == ErrorKind::Parse);
  CHECK(kind_of([] { io::matrix_from_json(io::parse("[[1,2],[3]]")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { io::certificate_from_json(io::parse(R"({"theorem":4,"contacts":[]})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { io::read_file("/nonexistent/body.json"); }) == ErrorKind::Parse);
}

TEST_CASE("ellipsoid, map and report round trips") {
  testkit::Gen g(71);
  const EllipsoidParam e(Sym(g.spd(3)), g.vec(3));
  round_trip(io::to_json(e), io::ellipsoid_from_json);
  const AffineMap m(g.well_conditioned(3), g.vec(3));
  round_trip(io::to_json(m), io::affine_map_from_json);
  SolveReport r;
  r.iterations = 17;
  r.final_mu = 1e-10;
  r.objective = -0.1234567890123456789;
  r.converged = true;
  round_trip(io::to_json(r), io::solve_report_from_json);
}

TEST_CASE("certificate round trip keeps contacts, weights and geometry") {
  Certificate c;
  c.contacts.dim = 2;
  c.contacts.kind = ContactKind::Theorem3;
  c.contacts.u = {Vector::Unit(2, 0), -Vector::Unit(2, 0)};
  c.contacts.v = {Vector::Unit(2, 0), -Vector::Unit(2, 0)};
  c.contacts.lambda = {0.5, 0.5};
  c.map = AffineMap::identity(2);
  c.inner = cube_vertices(2);
  const io::Json j = io::to_json(c);
  CHECK(j["theorem"] == 3);
  CHECK(j["contacts"][0].contains("v"));
  const Certificate back = io::certificate_from_json(io::parse(j.dump()));
  CHECK(back.contacts.kind == ContactKind::Theorem3);
  CHECK(back.contacts.lambda == c.contacts.lambda);
  CHECK(back.inner->num_vertices() == 4);
  CHECK(io::to_json(back).dump() == j.dump());
}
