#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "qpsh/quaternion.hpp"

namespace qpsh {

using Index4 = std::array<int, 4>;
using Point4 = std::array<double, 4>;

/// Uniform cubic lattice in R^4 = H: `count` nodes per axis starting at `lo`
/// with spacing `h`.
struct GridSpec {
  double lo = -1.0;
  double h = 0.125;
  int count = 17;

  /// Grid with `cells` cells per axis covering [lo, hi]^4.
  static GridSpec cube(double lo, double hi, int cells);

  std::size_t node_count() const;
  double coord(int i) const { return lo + h * i; }
  bool operator==(const GridSpec&) const = default;
};

/// Real- or quaternion-valued samples on a 4D grid (the n = 1 grid backend).
///
/// Finite differences leave a band of nodes next to the box faces without a
/// value; `band()` is its width in cells and grows by one with every centered
/// difference.
class GridField {
 public:
  GridField() = default;
  GridField(GridSpec spec, int components, int band = 0);

  static GridField sample(const GridSpec& spec, const std::function<double(const Point4&)>& fn);

  const GridSpec& spec() const { return spec_; }
  int components() const { return components_; }
  int band() const { return band_; }

  bool valid(const Index4& idx) const;
  std::size_t linear(const Index4& idx) const;
  Point4 coords(const Index4& idx) const;
  /// Node index of a point lying on the lattice (within 1e-9 h); throws
  /// otherwise.
  Index4 node_of(const Point4& p) const;

  double& at(const Index4& idx, int c = 0) { return data_[c][linear(idx)]; }
  double at(const Index4& idx, int c = 0) const { return data_[c][linear(idx)]; }
  std::vector<double>& component(int c) { return data_[c]; }
  const std::vector<double>& component(int c) const { return data_[c]; }

  Quaternion value(const Index4& idx) const;

  /// Calls fn(idx) for every node outside the invalid band, in lexicographic
  /// order.
  void for_each_valid(const std::function<void(const Index4&)>& fn) const;

 private:
  GridSpec spec_;
  int components_ = 1;
  int band_ = 0;
  std::vector<std::vector<double>> data_;
};

/// Centered first difference along `axis` for component c.
double grid_first_difference(const GridField& f, const Index4& idx, int axis, int c = 0);
/// Centered second difference; mixed partials use nested centered differences.
double grid_second_difference(const GridField& f, const Index4& idx, int a, int b, int c = 0);

}  // namespace qpsh
