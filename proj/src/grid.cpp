#include "qpsh/grid.hpp"

#include <cmath>

#include "qpsh/errors.hpp"

namespace qpsh {

GridSpec GridSpec::cube(double lo, double hi, int cells) {
  if (cells < 2 || !(hi > lo)) throw PreconditionError("GridSpec::cube: degenerate box");
  return GridSpec{lo, (hi - lo) / cells, cells + 1};
}

std::size_t GridSpec::node_count() const {
  const auto c = static_cast<std::size_t>(count);
  return c * c * c * c;
}

GridField::GridField(GridSpec spec, int components, int band)
    : spec_(spec), components_(components), band_(band) {
  if (components != 1 && components != 4)
    throw PreconditionError("GridField: components must be 1 or 4");
  data_.assign(components, std::vector<double>(spec.node_count(), 0.0));
}

GridField GridField::sample(const GridSpec& spec, const std::function<double(const Point4&)>& fn) {
  GridField g(spec, 1);
  const int n = spec.count;
  Index4 idx{};
  for (idx[0] = 0; idx[0] < n; ++idx[0])
    for (idx[1] = 0; idx[1] < n; ++idx[1])
      for (idx[2] = 0; idx[2] < n; ++idx[2])
        for (idx[3] = 0; idx[3] < n; ++idx[3]) g.at(idx) = fn(g.coords(idx));
  return g;
}

bool GridField::valid(const Index4& idx) const {
  for (int a = 0; a < 4; ++a)
    if (idx[a] < band_ || idx[a] >= spec_.count - band_) return false;
  return true;
}

std::size_t GridField::linear(const Index4& idx) const {
  const auto n = static_cast<std::size_t>(spec_.count);
  return ((static_cast<std::size_t>(idx[0]) * n + idx[1]) * n + idx[2]) * n + idx[3];
}

Point4 GridField::coords(const Index4& idx) const {
  return {spec_.coord(idx[0]), spec_.coord(idx[1]), spec_.coord(idx[2]), spec_.coord(idx[3])};
}

Index4 GridField::node_of(const Point4& p) const {
  Index4 idx{};
  for (int a = 0; a < 4; ++a) {
    const double s = (p[a] - spec_.lo) / spec_.h;
    const double r = std::round(s);
    if (std::fabs(s - r) > 1e-9 || r < 0 || r >= spec_.count)
      throw PreconditionError("grid field evaluated off the lattice");
    idx[a] = static_cast<int>(r);
  }
  return idx;
}

Quaternion GridField::value(const Index4& idx) const {
  if (!valid(idx)) throw PreconditionError("grid node lies in the invalid boundary band");
  const std::size_t k = linear(idx);
  if (components_ == 1) return Quaternion(data_[0][k]);
  return {data_[0][k], data_[1][k], data_[2][k], data_[3][k]};
}

void GridField::for_each_valid(const std::function<void(const Index4&)>& fn) const {
  const int lo = band_;
  const int hi = spec_.count - band_;
  Index4 idx{};
  for (idx[0] = lo; idx[0] < hi; ++idx[0])
    for (idx[1] = lo; idx[1] < hi; ++idx[1])
      for (idx[2] = lo; idx[2] < hi; ++idx[2])
        for (idx[3] = lo; idx[3] < hi; ++idx[3]) fn(idx);
}

double grid_first_difference(const GridField& f, const Index4& idx, int axis, int c) {
  Index4 p = idx, m = idx;
  ++p[axis];
  --m[axis];
  return (f.at(p, c) - f.at(m, c)) / (2.0 * f.spec().h);
}

double grid_second_difference(const GridField& f, const Index4& idx, int a, int b, int c) {
  const double h = f.spec().h;
  if (a == b) {
    Index4 p = idx, m = idx;
    ++p[a];
    --m[a];
    return (f.at(p, c) - 2.0 * f.at(idx, c) + f.at(m, c)) / (h * h);
  }
  Index4 pp = idx, pm = idx, mp = idx, mm = idx;
  ++pp[a], ++pp[b];
  ++pm[a], --pm[b];
  --mp[a], ++mp[b];
  --mm[a], --mm[b];
  return (f.at(pp, c) - f.at(pm, c) - f.at(mp, c) + f.at(mm, c)) / (4.0 * h * h);
}

}  // namespace qpsh
