#pragma once

#include <vector>

#include "qpsh/polynomial.hpp"
#include "qpsh/sampling.hpp"

namespace qpsh::testing {

inline RealPolynomial weighted_norm_sq(const std::vector<double>& weights) {
  const int n = static_cast<int>(weights.size());
  RealPolynomial p(4 * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < 4; ++c) {
      RealPolynomial::Exponent e(4 * n, 0);
      e[4 * r + c] = 2;
      p.add_term(e, weights[r]);
    }
  return p;
}

inline RealPolynomial norm_sq(int n) { return weighted_norm_sq(std::vector<double>(n, 1.0)); }

inline RealPolynomial linear_form(Rng& rng, int nvars, int range = 2) {
  RealPolynomial l(nvars);
  for (int v = 0; v < nvars; ++v) l += RealPolynomial::variable(nvars, v, rng.integer(-range, range));
  return l;
}

inline RealPolynomial strictly_psh_poly(Rng& rng, int n) { return random_strictly_psh(rng, n); }

inline RealPolynomial random_real_poly(Rng& rng, int nvars, int degree, int terms, int range = 3) {
  return random_real_polynomial(rng, nvars, degree, terms, range);
}

inline std::vector<std::vector<double>> points(Rng& rng, int dim, int count, double radius = 1.0) {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < count; ++i) pts.push_back(random_point(rng, dim, radius));
  return pts;
}

}  // namespace qpsh::testing
