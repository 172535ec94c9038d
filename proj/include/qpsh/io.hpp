#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qpsh/convex_body.hpp"
#include "qpsh/hmatrix.hpp"
#include "qpsh/polynomial.hpp"

namespace qpsh::io {

using Json = nlohmann::json;

// File formats (all JSON):
//
//   quaternion   [t, x, y, z]  (a bare number is a real quaternion)
//   matrix       {"n": 2, "entries": [[q, q], [q, q]]}
//   polynomial   {"nvars": 4, "terms": [{"exp": [2, 0, 0, 0], "coef": 1.0}, ...]}
//                or {"builtin": "norm_sq", "n": 2}
//   body         {"type": "box", "lo": [...], "hi": [...]}
//                {"type": "ball", "center": [...], "radius": r}
//                {"type": "polytope", "vertices": [[...], ...]}
//                {"type": "point", "p": [...]}, {"type": "segment", "a": [...], "b": [...]}
//                {"type": "sum", "a": body, "b": body}
//                {"type": "scaled", "body": body, "factor": s}
//                {"type": "translated", "body": body, "v": [...]}
//
// Malformed input raises ParseError; well-formed input that violates a
// mathematical precondition (non-hyperhermitian matrix, ...) raises
// PreconditionError.

Json read_file(const std::string& path);

Quaternion quaternion_from_json(const Json& j);
Json to_json(const Quaternion& q);

QMatrix qmatrix_from_json(const Json& j);
HMatrix hmatrix_from_json(const Json& j);
Json to_json(const QMatrix& m);
Json to_json(const HMatrix& m);

/// Built-in names: "norm_sq" (sum |q_r|^2), "neg_norm_sq", "linear" (sum of
/// all coordinates), "quartic" ((sum |q_r|^2)^2).
RealPolynomial polynomial_from_json(const Json& j);
Json to_json(const RealPolynomial& p);

ConvexBody body_from_json(const Json& j);

std::vector<double> vector_from_json(const Json& j);

/// Fixed 17-significant-digit rendering used in all CSV output.
std::string fmt(double v);

}  // namespace qpsh::io
