#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qpsh {

/// Continuous compactly supported scalar test function on R^dim, together
/// with a box containing its support.
struct Weight {
  std::string id;
  int dim = 0;
  std::function<double(std::span<const double>)> fn;
  std::vector<double> lo, hi;

  double operator()(std::span<const double> y) const { return fn(y); }
  double box_volume() const;
};

/// prod_c (1 - s_c^2)^3 with s_c = (y_c - center_c) / radius, zero for |s_c| >= 1.
Weight tensor_bump(std::vector<double> center, double radius, std::string id = "bump");

/// (1 - s^2)^3 with s = (|y| - m) / w, m and w the midpoint and half-width of
/// [inner, outer]; supported in the annulus inner <= |y| <= outer.
Weight annulus_bump(int dim, double inner, double outer, std::string id = "annulus");

Weight zero_weight(int dim, double half_width = 1.0);

/// Plain quasi-Monte-Carlo estimate of the integral of weight * integrand
/// over the weight's support box with `samples` unscrambled Halton points.
double qmc_integrate(const Weight& w, const std::function<double(std::span<const double>)>& integrand,
                     int samples);

}  // namespace qpsh
