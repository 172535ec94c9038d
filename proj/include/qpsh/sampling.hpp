#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qpsh/hmatrix.hpp"
#include "qpsh/polynomial.hpp"
#include "qpsh/quaternion.hpp"

namespace qpsh {

/// Seeded generator with platform-independent conversions (the standard
/// distributions are implementation defined, which would break byte-identical
/// output across toolchains).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);
  double normal();
  Quaternion quaternion(double lo, double hi);
  Quaternion integer_quaternion(int lo, int hi);
  Quaternion unit_quaternion();

 private:
  std::mt19937_64 engine_;
};

HMatrix random_integer_hyperhermitian(Rng& rng, int n, int lo, int hi);
HMatrix random_hyperhermitian(Rng& rng, int n, double scale = 1.0);
/// B* B + shift Id with B uniform in [-1, 1] componentwise.
HMatrix random_positive_definite(Rng& rng, int n, double shift = 0.25);
QMatrix random_qmatrix(Rng& rng, int n, double scale = 1.0);
QMatrix random_integer_qmatrix(Rng& rng, int n, int lo, int hi);
std::vector<double> random_point(Rng& rng, int dim, double radius = 1.0);

/// Polynomial with `terms` random monomials of total degree <= `degree` and
/// small integer coefficients in [-range, range]; quaternionic unless `real`.
QPolynomial random_polynomial(Rng& rng, int nvars, int degree, int terms, bool real,
                              int range = 3);

/// Real version of random_polynomial.
RealPolynomial random_real_polynomial(Rng& rng, int nvars, int degree, int terms, int range = 3);

/// sum_r a_r |q_r|^2 (a_r in {1, 2, 3}) plus squares and a fourth power of
/// integer linear forms: strictly convex, hence strictly psh.
RealPolynomial random_strictly_psh(Rng& rng, int n);

}  // namespace qpsh
