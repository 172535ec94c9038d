#include "qpsh/io.hpp"

#include <cstdio>
#include <fstream>

#include "qpsh/errors.hpp"

namespace qpsh::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j) {
  if (!j.is_number()) throw ParseError("expected a number, got " + j.dump());
  return j.get<double>();
}

int integer(const Json& j) {
  if (!j.is_number_integer()) throw ParseError("expected an integer, got " + j.dump());
  return j.get<int>();
}

}  // namespace

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Quaternion quaternion_from_json(const Json& j) {
  if (j.is_number()) return Quaternion(j.get<double>());
  if (!j.is_array() || j.size() != 4) throw ParseError("quaternion must be [t, x, y, z]");
  return {number(j[0]), number(j[1]), number(j[2]), number(j[3])};
}

Json to_json(const Quaternion& q) { return Json::array({q.t, q.x, q.y, q.z}); }

QMatrix qmatrix_from_json(const Json& j) {
  const Json& rows = field(j, "entries");
  const int n = j.contains("n") ? integer(j.at("n")) : static_cast<int>(rows.size());
  if (n < 1 || !rows.is_array() || static_cast<int>(rows.size()) != n)
    throw ParseError("matrix: 'entries' must have n rows");
  QMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
      throw ParseError("matrix: every row must have n entries");
    for (int k = 0; k < n; ++k) m(i, k) = quaternion_from_json(rows[i][k]);
  }
  return m;
}

HMatrix hmatrix_from_json(const Json& j) { return HMatrix::from_matrix(qmatrix_from_json(j)); }

Json to_json(const QMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.size(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(row);
  }
  return {{"n", m.size()}, {"entries", rows}};
}

Json to_json(const HMatrix& m) { return to_json(m.matrix()); }

RealPolynomial polynomial_from_json(const Json& j) {
  if (j.is_object() && j.contains("builtin")) {
    const std::string name = field(j, "builtin").get<std::string>();
    const int n = j.contains("n") ? integer(j.at("n")) : 1;
    if (n < 1) throw ParseError("polynomial: n must be positive");
    RealPolynomial sq(4 * n);
    for (int v = 0; v < 4 * n; ++v) {
      RealPolynomial::Exponent e(4 * n, 0);
      e[v] = 2;
      sq.add_term(e, 1.0);
    }
    if (name == "norm_sq") return sq;
    if (name == "neg_norm_sq") return -sq;
    if (name == "quartic") return sq * sq;
    if (name == "linear") {
      RealPolynomial l(4 * n);
      for (int v = 0; v < 4 * n; ++v) l += RealPolynomial::variable(4 * n, v);
      return l;
    }
    throw ParseError("unknown builtin polynomial '" + name + "'");
  }
  const int nv = integer(field(j, "nvars"));
  if (nv < 1) throw ParseError("polynomial: nvars must be positive");
  RealPolynomial p(nv);
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) throw ParseError("polynomial: 'terms' must be an array");
  for (const auto& t : terms) {
    const Json& e = field(t, "exp");
    if (!e.is_array() || static_cast<int>(e.size()) != nv) throw ParseError("polynomial: exponent length != nvars");
    RealPolynomial::Exponent ex(nv);
    for (int v = 0; v < nv; ++v) {
      const int k = integer(e[v]);
      if (k < 0 || k > 255) throw ParseError("polynomial: exponent out of range");
      ex[v] = static_cast<std::uint8_t>(k);
    }
    p.add_term(ex, number(field(t, "coef")));
  }
  return p;
}

Json to_json(const RealPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json ex = Json::array();
    for (auto k : e) ex.push_back(static_cast<int>(k));
    terms.push_back({{"exp", ex}, {"coef", c}});
  }
  return {{"nvars", p.nvars()}, {"terms", terms}};
}

std::vector<double> vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(number(x));
  return v;
}

ConvexBody body_from_json(const Json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "box") return ConvexBody::box(vector_from_json(field(j, "lo")), vector_from_json(field(j, "hi")));
  if (type == "ball") return ConvexBody::ball(vector_from_json(field(j, "center")), number(field(j, "radius")));
  if (type == "point") return ConvexBody::point(vector_from_json(field(j, "p")));
  if (type == "segment") return ConvexBody::segment(vector_from_json(field(j, "a")), vector_from_json(field(j, "b")));
  if (type == "polytope") {
    std::vector<std::vector<double>> verts;
    for (const auto& v : field(j, "vertices")) verts.push_back(vector_from_json(v));
    return ConvexBody::polytope(std::move(verts));
  }
  if (type == "sum") return ConvexBody::minkowski_sum(body_from_json(field(j, "a")), body_from_json(field(j, "b")));
  if (type == "scaled") return ConvexBody::scaled(body_from_json(field(j, "body")), number(field(j, "factor")));
  if (type == "translated")
    return ConvexBody::translated(body_from_json(field(j, "body")), vector_from_json(field(j, "v")));
  throw ParseError("unknown body type '" + type + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace qpsh::io
