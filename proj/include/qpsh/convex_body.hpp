#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qpsh {

/// Convex compact body in R^dim (dim = 4n, the dual space of H^n) given by
/// its support function h_K(y) = sup_{x in K} <y, x>. Immutable; copies share
/// structure.
class ConvexBody {
 public:
  enum class Kind { kPolytope, kBall, kBox, kSum, kScaled, kTranslated, kMax, kMin };

  static ConvexBody polytope(std::vector<std::vector<double>> vertices);
  static ConvexBody point(std::vector<double> p);
  static ConvexBody segment(std::vector<double> a, std::vector<double> b);
  static ConvexBody ball(std::vector<double> center, double radius);
  /// Axis-parallel box prod [lo_c, hi_c] (the Minkowski sum of its edge segments).
  static ConvexBody box(std::vector<double> lo, std::vector<double> hi);
  static ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b);
  static ConvexBody scaled(const ConvexBody& k, double factor);
  static ConvexBody translated(const ConvexBody& k, std::vector<double> v);
  /// Support function max(h_a, h_b): the convex hull of the union.
  static ConvexBody max_body(const ConvexBody& a, const ConvexBody& b);
  /// Support function min(h_a, h_b): the intersection, valid when the union
  /// of a and b is convex (the caller's responsibility).
  static ConvexBody min_body(const ConvexBody& a, const ConvexBody& b);

  int dim() const;
  Kind kind() const;
  double support(std::span<const double> y) const;

 private:
  struct Node;
  explicit ConvexBody(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static double eval(const Node& n, std::span<const double> y);
  std::shared_ptr<const Node> node_;
};

/// Quasi-uniform unit directions in R^dim (normalized Halton points of the
/// cube, skipping near-zero ones).
std::vector<std::vector<double>> sphere_directions(int dim, int count);

/// max over directions of |h_1(y) - h_2(y)|; a lower bound for the Hausdorff
/// distance.
double hausdorff_distance(const ConvexBody& a, const ConvexBody& b,
                          std::span<const std::vector<double>> directions);

}  // namespace qpsh
