#include "qpsh/weight.hpp"

#include <cmath>

#include "qpsh/errors.hpp"
#include "qpsh/halton.hpp"

namespace qpsh {

namespace {

double bump1(double s) {
  const double u = 1.0 - s * s;
  return u > 0.0 ? u * u * u : 0.0;
}

}  // namespace

double Weight::box_volume() const {
  double v = 1.0;
  for (int c = 0; c < dim; ++c) v *= hi[c] - lo[c];
  return v;
}

Weight tensor_bump(std::vector<double> center, double radius, std::string id) {
  if (!(radius > 0.0)) throw PreconditionError("tensor_bump: radius must be positive");
  Weight w;
  w.id = std::move(id);
  w.dim = static_cast<int>(center.size());
  for (double c : center) {
    w.lo.push_back(c - radius);
    w.hi.push_back(c + radius);
  }
  w.fn = [center = std::move(center), radius](std::span<const double> y) {
    double v = 1.0;
    for (std::size_t c = 0; c < center.size() && v != 0.0; ++c) v *= bump1((y[c] - center[c]) / radius);
    return v;
  };
  return w;
}

Weight annulus_bump(int dim, double inner, double outer, std::string id) {
  if (!(inner >= 0.0 && outer > inner)) throw PreconditionError("annulus_bump: need 0 <= inner < outer");
  Weight w;
  w.id = std::move(id);
  w.dim = dim;
  w.lo.assign(dim, -outer);
  w.hi.assign(dim, outer);
  const double mid = 0.5 * (inner + outer), half = 0.5 * (outer - inner);
  w.fn = [mid, half](std::span<const double> y) {
    double r2 = 0.0;
    for (double v : y) r2 += v * v;
    return bump1((std::sqrt(r2) - mid) / half);
  };
  return w;
}

Weight zero_weight(int dim, double half_width) {
  Weight w;
  w.id = "zero";
  w.dim = dim;
  w.lo.assign(dim, -half_width);
  w.hi.assign(dim, half_width);
  w.fn = [](std::span<const double>) { return 0.0; };
  return w;
}

double qmc_integrate(const Weight& w, const std::function<double(std::span<const double>)>& integrand,
                     int samples) {
  if (samples < 1) throw PreconditionError("qmc_integrate: need at least one sample");
  const Halton seq(w.dim);
  std::vector<double> u(w.dim), y(w.dim);
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    seq.point(static_cast<std::uint64_t>(s) + 1, u.data());
    for (int c = 0; c < w.dim; ++c) y[c] = w.lo[c] + (w.hi[c] - w.lo[c]) * u[c];
    const double psi = w(y);
    if (psi != 0.0) sum += psi * integrand(y);
  }
  return sum / samples * w.box_volume();
}

}  // namespace qpsh
