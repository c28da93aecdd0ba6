#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "johnbox/io.hpp"

#ifndef JOHNBOX_CLI
#error "JOHNBOX_CLI must name the johnbox executable"
#endif

namespace fs = std::filesystem;
using johnbox::io::Json;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("johnbox-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }
};

const Scratch& scratch() {
  static const Scratch s;
  return s;
}

// Runs the CLI with stdout captured into `out`; returns the exit status.
int run(const std::string& args, const std::string& out = "") {
  std::string cmd = "JOHNBOX_LOG=quiet '" + std::string(JOHNBOX_CLI) + "' " + args;
  cmd += out.empty() ? " > /dev/null" : " > '" + scratch().path(out) + "'";
  cmd += " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json load(const std::string& name) { return johnbox::io::read_file(scratch().path(name)); }

std::string at(const std::string& name) { return "'" + scratch().path(name) + "'"; }

}  // namespace

TEST_CASE("gen writes standard bodies") {
  REQUIRE(run("gen cross_polytope 3 7", "cross3.json") == 0);
  CHECK(load("cross3.json")["facets"].size() == 8);
  CHECK(run("gen cube 2", "cube2.json") == 0);
  CHECK(run("gen simplex 2", "simplex2.json") == 0);
  CHECK(run("gen dodecahedron 3") != 0);
}

TEST_CASE("solve on the square gives the unit ball and a valid certificate") {
  REQUIRE(run("gen cube 2", "cube2.json") == 0);
  REQUIRE(run("solve " + at("cube2.json") + " --mode symmetric", "cube2.cert.json") == 0);
  const Json cert = load("cube2.cert.json");
  CHECK(cert["theorem"] == 1);
  CHECK(cert["verdict"]["valid"] == true);
  const auto a = johnbox::io::matrix_from_json(cert["ellipsoid"]["A"]);
  CHECK((a - johnbox::Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("solve on the triangle-simplex in general mode gives weights 2/3") {
  REQUIRE(run("gen simplex 2", "simplex2.json") == 0);
  REQUIRE(run("solve " + at("simplex2.json") + " --mode general", "simplex2.cert.json") == 0);
  const Json cert = load("simplex2.cert.json");
  REQUIRE(cert["contacts"].size() == 3);
  for (const Json& c : cert["contacts"]) CHECK(c["lambda"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(run("solve " + at("simplex2.json") + " --mode symmetric") == 65);
}

TEST_CASE("certify accepts valid and rejects tampered certificates") {
  REQUIRE(run("gen cube 2", "cube2.json") == 0);
  REQUIRE(run("solve " + at("cube2.json") + " --mode symmetric", "c.json") == 0);
  CHECK(run("certify " + at("cube2.json") + " " + at("c.json")) == 0);

  Json bad = load("c.json");
  bad["contacts"][0]["lambda"] = 1.5;
  scratch().write("bad.json", bad.dump());
  REQUIRE(run("certify " + at("cube2.json") + " " + at("bad.json"), "bad.out.json") == 3);
  const Json verdict = load("bad.out.json")["verdict"];
  CHECK(verdict["checks"]["identity"] == false);
  CHECK(verdict["failures"][0] == "identity");
}

TEST_CASE("certify with theorem 3 on a non-contained inner body exits 65") {
  REQUIRE(run("gen cube 2", "cube2.json") == 0);
  scratch().write("t3.json", R"({"theorem":3,"inner":{"type":"vpolytope","dim":2,"vertices":[[2,0],[-2,0],[0,1],[0,-1]]},
    "contacts":[{"u":[1,0],"v":[1,0],"lambda":0.5},{"u":[-1,0],"v":[-1,0],"lambda":0.5},
                {"u":[0,1],"v":[0,1],"lambda":0.5},{"u":[0,-1],"v":[0,-1],"lambda":0.5}]})");
  CHECK(run("certify " + at("cube2.json") + " " + at("t3.json")) == 65);
}

TEST_CASE("malformed input and usage errors exit 64") {
  scratch().write("broken.json", "{\"type\": \"hpolytope\", ");
  CHECK(run("solve " + at("broken.json")) == 64);
  CHECK(run("solve " + at("missing.json")) == 64);
  CHECK(run("frobnicate") == 64);
  CHECK(run("solve " + at("broken.json") + " --tol -1") == 64);
}

TEST_CASE("unbounded body exits 65") {
  scratch().write("strip.json", R"({"type":"hpolytope","dim":2,"facets":[{"normal":[1,0],"offset":1},
    {"normal":[-1,0],"offset":1},{"normal":[0,1],"offset":1}]})");
  CHECK(run("solve " + at("strip.json")) == 65);
}

TEST_CASE("an exhausted iteration budget exits 2") {
  REQUIRE(run("gen random_symmetric 4 3", "rs4.json") == 0);
  CHECK(run("solve " + at("rs4.json") + " --max-iter 2") == 2);
}

TEST_CASE("reduce on the +-e_i certificate") {
  scratch().write("pm.json", R"({"theorem":1,"contacts":[{"u":[1,0,0],"lambda":0.5},{"u":[-1,0,0],"lambda":0.5},
    {"u":[0,1,0],"lambda":0.5},{"u":[0,-1,0],"lambda":0.5},{"u":[0,0,1],"lambda":0.5},{"u":[0,0,-1],"lambda":0.5}]})");
  REQUIRE(run("gen cube 3", "cube3.json") == 0);
  REQUIRE(run("reduce " + at("pm.json") + " --body " + at("cube3.json"), "pm.red.json") == 0);
  const Json red = load("pm.red.json");
  CHECK(red["contacts"].size() <= 6);
  CHECK(red["bounds"]["n_max_ok"] == true);
  CHECK(red["verdict"]["valid"] == true);
  CHECK(run("reduce " + at("pm.json"), "pm.red2.json") == 0);
  CHECK(load("pm.red2.json")["residuals"]["identity"].get<double>() <= 1e-12);
}

TEST_CASE("position on the doubled square returns the square and ratio sqrt 2") {
  scratch().write("sq2.json", R"({"type":"hpolytope","dim":2,"facets":[{"normal":[1,0],"offset":2},
    {"normal":[-1,0],"offset":2},{"normal":[0,1],"offset":2},{"normal":[0,-1],"offset":2}]})");
  REQUIRE(run("position " + at("sq2.json"), "sq2.pos.json") == 0);
  const Json p = load("sq2.pos.json");
  for (const Json& f : p["facets"]) CHECK(f["offset"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p["containment_ratio"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(p["ratio_within_sqrt_d"] == true);
}

TEST_CASE("solve, position, solve is idempotent") {
  REQUIRE(run("gen random_symmetric 3 11", "rs3.json") == 0);
  REQUIRE(run("position " + at("rs3.json") + " --out " + at("rs3.pos.json")) == 0);
  REQUIRE(run("solve " + at("rs3.pos.json"), "rs3.pos.cert.json") == 0);
  const auto a = johnbox::io::matrix_from_json(load("rs3.pos.cert.json")["ellipsoid"]["A"]);
  CHECK((a - johnbox::Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("solve handles a body whose interior misses the origin") {
  scratch().write("box.json", R"({"type":"hpolytope","dim":2,"facets":[{"normal":[1,0],"offset":3},
    {"normal":[-1,0],"offset":-1},{"normal":[0,1],"offset":5},{"normal":[0,-1],"offset":-3}]})");
  REQUIRE(run("solve " + at("box.json") + " --mode general", "box.cert.json") == 0);
  const auto a = johnbox::io::vector_from_json(load("box.cert.json")["ellipsoid"]["a"]);
  CHECK(a(0) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(a(1) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("affine on the square and triangle") {
  scratch().write("sq.json", R"({"type":"vpolytope","dim":2,"vertices":[[0,0],[1,0],[0,1],[1,1]]})");
  scratch().write("tri.json", R"({"type":"hpolytope","dim":2,"facets":[{"normal":[0,-1],"offset":0},
    {"normal":[-1,0],"offset":0},{"normal":[1,1],"offset":1}]})");
  REQUIRE(run("affine " + at("sq.json") + " " + at("tri.json") + " --seed 3", "aff.json") == 0);
  const Json out = load("aff.json");
  CHECK(out["theorem"] == 3);
  const auto m = johnbox::io::matrix_from_json(out["map"]["M"]);
  CHECK(std::abs(m.determinant()) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(out["verdict"]["conclusion"].get<std::string>().find("does not certify maximality") != std::string::npos);
  CHECK(run("affine " + at("tri.json") + " " + at("tri.json")) == 64);
}

TEST_CASE("CLI output round trips through the JSON readers") {
  REQUIRE(run("gen random_symmetric 3 5", "rt.json") == 0);
  REQUIRE(run("solve " + at("rt.json"), "rt.cert.json") == 0);
  const Json first = load("rt.cert.json");
  const johnbox::Certificate c = johnbox::io::certificate_from_json(first);
  const Json again = johnbox::io::to_json(c);
  CHECK(again["contacts"].dump() == first["contacts"].dump());
  CHECK(again["ellipsoid"].dump() == first["ellipsoid"].dump());
  CHECK(again["report"].dump() == first["report"].dump());
}
