#include "qpsh/convex_body.hpp"

#include <algorithm>
#include <cmath>

#include "qpsh/errors.hpp"
#include "qpsh/halton.hpp"

namespace qpsh {

struct ConvexBody::Node {
  Kind kind;
  int dim;
  std::vector<std::vector<double>> vertices;  // polytope
  std::vector<double> a, b;                   // ball center / box lo, hi / offset
  double scalar = 0.0;                        // radius / factor
  std::shared_ptr<const Node> left, right;
};

namespace {

double dot(std::span<const double> y, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) s += y[c] * x[c];
  return s;
}

void require_dim(int expected, std::size_t got, const char* what) {
  if (static_cast<int>(got) != expected) throw PreconditionError(std::string(what) + ": dimension mismatch");
}

}  // namespace

ConvexBody ConvexBody::polytope(std::vector<std::vector<double>> vertices) {
  if (vertices.empty() || vertices[0].empty()) throw PreconditionError("polytope: need at least one vertex");
  const int d = static_cast<int>(vertices[0].size());
  for (const auto& v : vertices) require_dim(d, v.size(), "polytope");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kPolytope;
  n->dim = d;
  n->vertices = std::move(vertices);
  return ConvexBody(n);
}

ConvexBody ConvexBody::point(std::vector<double> p) { return polytope({std::move(p)}); }

ConvexBody ConvexBody::segment(std::vector<double> a, std::vector<double> b) {
  return polytope({std::move(a), std::move(b)});
}

ConvexBody ConvexBody::ball(std::vector<double> center, double radius) {
  if (center.empty() || !(radius >= 0.0)) throw PreconditionError("ball: bad center or radius");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kBall;
  n->dim = static_cast<int>(center.size());
  n->a = std::move(center);
  n->scalar = radius;
  return ConvexBody(n);
}

ConvexBody ConvexBody::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty()) throw PreconditionError("box: empty");
  require_dim(static_cast<int>(lo.size()), hi.size(), "box");
  for (std::size_t c = 0; c < lo.size(); ++c)
    if (lo[c] > hi[c]) throw PreconditionError("box: lo > hi");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kBox;
  n->dim = static_cast<int>(lo.size());
  n->a = std::move(lo);
  n->b = std::move(hi);
  return ConvexBody(n);
}

ConvexBody ConvexBody::minkowski_sum(const ConvexBody& a, const ConvexBody& b) {
  require_dim(a.dim(), static_cast<std::size_t>(b.dim()), "minkowski_sum");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kSum;
  n->dim = a.dim();
  n->left = a.node_;
  n->right = b.node_;
  return ConvexBody(n);
}

ConvexBody ConvexBody::scaled(const ConvexBody& k, double factor) {
  if (!(factor >= 0.0)) throw PreconditionError("scaled: factor must be >= 0");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kScaled;
  n->dim = k.dim();
  n->scalar = factor;
  n->left = k.node_;
  return ConvexBody(n);
}

ConvexBody ConvexBody::translated(const ConvexBody& k, std::vector<double> v) {
  require_dim(k.dim(), v.size(), "translated");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kTranslated;
  n->dim = k.dim();
  n->a = std::move(v);
  n->left = k.node_;
  return ConvexBody(n);
}

ConvexBody ConvexBody::max_body(const ConvexBody& a, const ConvexBody& b) {
  require_dim(a.dim(), static_cast<std::size_t>(b.dim()), "max_body");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kMax;
  n->dim = a.dim();
  n->left = a.node_;
  n->right = b.node_;
  return ConvexBody(n);
}

ConvexBody ConvexBody::min_body(const ConvexBody& a, const ConvexBody& b) {
  require_dim(a.dim(), static_cast<std::size_t>(b.dim()), "min_body");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kMin;
  n->dim = a.dim();
  n->left = a.node_;
  n->right = b.node_;
  return ConvexBody(n);
}

int ConvexBody::dim() const { return node_->dim; }
ConvexBody::Kind ConvexBody::kind() const { return node_->kind; }

double ConvexBody::support(std::span<const double> y) const {
  require_dim(dim(), y.size(), "support");
  return eval(*node_, y);
}

double ConvexBody::eval(const Node& n, std::span<const double> y) {
  switch (n.kind) {
    case Kind::kPolytope: {
      double m = -INFINITY;
      for (const auto& v : n.vertices) m = std::max(m, dot(y, v));
      return m;
    }
    case Kind::kBall: {
      double r2 = 0.0;
      for (int c = 0; c < n.dim; ++c) r2 += y[c] * y[c];
      return dot(y, n.a) + n.scalar * std::sqrt(r2);
    }
    case Kind::kBox: {
      double s = 0.0;
      for (int c = 0; c < n.dim; ++c) s += std::max(n.a[c] * y[c], n.b[c] * y[c]);
      return s;
    }
    case Kind::kSum:
      return eval(*n.left, y) + eval(*n.right, y);
    case Kind::kScaled:
      return n.scalar * eval(*n.left, y);
    case Kind::kTranslated:
      return eval(*n.left, y) + dot(y, n.a);
    case Kind::kMax:
      return std::max(eval(*n.left, y), eval(*n.right, y));
    case Kind::kMin:
      return std::min(eval(*n.left, y), eval(*n.right, y));
  }
  return 0.0;
}

std::vector<std::vector<double>> sphere_directions(int dim, int count) {
  const Halton seq(dim);
  std::vector<std::vector<double>> out;
  for (std::uint64_t i = 1; static_cast<int>(out.size()) < count; ++i) {
    std::vector<double> p = seq.point(i);
    double r2 = 0.0;
    for (auto& v : p) {
      v = 2.0 * v - 1.0;
      r2 += v * v;
    }
    if (r2 < 1e-6) continue;
    const double r = std::sqrt(r2);
    for (auto& v : p) v /= r;
    out.push_back(std::move(p));
  }
  return out;
}

double hausdorff_distance(const ConvexBody& a, const ConvexBody& b,
                          std::span<const std::vector<double>> directions) {
  double m = 0.0;
  for (const auto& y : directions) m = std::max(m, std::fabs(a.support(y) - b.support(y)));
  return m;
}

}  // namespace qpsh
