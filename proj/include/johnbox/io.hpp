#ifndef JOHNBOX_IO_HPP
#define JOHNBOX_IO_HPP

// JSON encodings. Matrices are row-major nested arrays.
//
//   body        {"type":"hpolytope","dim":d,"facets":[{"normal":[...],"offset":h},...]}
//               {"type":"vpolytope","dim":d,"vertices":[[...],...]}
//   ellipsoid   {"A":[[...]],"a":[...]}
//   map         {"M":[[...]],"a":[...]}
//   certificate {"theorem":t,"ellipsoid"|"map":...,"inner":body?,"contacts":[{"u":[...],"v":[...]?,"lambda":x}],
//                "residuals":{...},"bounds":{...},"verdict":{...}?,"report":{...}?}
//
// Every reader throws Error(Parse) on malformed input.

#include <string>

#include <json.hpp>

#include "johnbox/affine.hpp"
#include "johnbox/body.hpp"
#include "johnbox/certify.hpp"
#include "johnbox/solver.hpp"

namespace johnbox::io {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json to_json(const HPolytope& body);
Json to_json(const VPolytope& body);
Json to_json(const LoadReport& report);
Json to_json(const EllipsoidParam& e);
Json to_json(const AffineMap& map);
Json to_json(const SolveReport& report);
Json to_json(const Certificate& cert);

/// "hpolytope" or "vpolytope".
std::string body_type(const Json& j);
HPolytope hpolytope_from_json(const Json& j, LoadReport* report = nullptr);
VPolytope vpolytope_from_json(const Json& j);
EllipsoidParam ellipsoid_from_json(const Json& j);
AffineMap affine_map_from_json(const Json& j);
SolveReport solve_report_from_json(const Json& j);

/// Restores the contacts, the geometry fields and the report. Residuals,
/// bounds and verdict are not read back; they are recomputed by checking.
Certificate certificate_from_json(const Json& j);

Json parse(const std::string& text);
Json read_file(const std::string& path);
void write_file(const std::string& path, const Json& j);

}  // namespace johnbox::io

#endif  // JOHNBOX_IO_HPP
