#include "qpsh/sampling.hpp"

#include <cmath>
#include <numbers>

namespace qpsh {

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

double Rng::normal() {
  // Box-Muller; u1 in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Quaternion Rng::quaternion(double lo, double hi) {
  return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
}

Quaternion Rng::integer_quaternion(int lo, int hi) {
  return {static_cast<double>(integer(lo, hi)), static_cast<double>(integer(lo, hi)),
          static_cast<double>(integer(lo, hi)), static_cast<double>(integer(lo, hi))};
}

Quaternion Rng::unit_quaternion() {
  Quaternion q;
  do {
    q = {normal(), normal(), normal(), normal()};
  } while (norm_sq(q) < 1e-12);
  return q / abs(q);
}

HMatrix random_integer_hyperhermitian(Rng& rng, int n, int lo, int hi) {
  HMatrix a = HMatrix::zero(n);
  for (int i = 0; i < n; ++i) {
    a.set(i, i, Quaternion(rng.integer(lo, hi)));
    for (int j = i + 1; j < n; ++j) a.set(i, j, rng.integer_quaternion(lo, hi));
  }
  return a;
}

HMatrix random_hyperhermitian(Rng& rng, int n, double scale) {
  HMatrix a = HMatrix::zero(n);
  for (int i = 0; i < n; ++i) {
    a.set(i, i, Quaternion(rng.uniform(-scale, scale)));
    for (int j = i + 1; j < n; ++j) a.set(i, j, rng.quaternion(-scale, scale));
  }
  return a;
}

HMatrix random_positive_definite(Rng& rng, int n, double shift) {
  const QMatrix b = random_qmatrix(rng, n, 1.0);
  QMatrix m = b.adjoint() * b;
  for (int i = 0; i < n; ++i) m(i, i) += Quaternion(shift);
  return HMatrix::from_matrix(m, 1e-9);
}

QMatrix random_qmatrix(Rng& rng, int n, double scale) {
  QMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.quaternion(-scale, scale);
  return m;
}

QMatrix random_integer_qmatrix(Rng& rng, int n, int lo, int hi) {
  QMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.integer_quaternion(lo, hi);
  return m;
}

std::vector<double> random_point(Rng& rng, int dim, double radius) {
  std::vector<double> p(dim);
  for (auto& v : p) v = rng.uniform(-radius, radius);
  return p;
}

QPolynomial random_polynomial(Rng& rng, int nvars, int degree, int terms, bool real, int range) {
  QPolynomial p(nvars);
  for (int t = 0; t < terms; ++t) {
    QPolynomial::Exponent e(nvars, 0);
    const int deg = rng.integer(0, degree);
    for (int k = 0; k < deg; ++k) ++e[rng.integer(0, nvars - 1)];
    Quaternion c = real ? Quaternion(rng.integer(-range, range)) : rng.integer_quaternion(-range, range);
    p.add_term(e, c);
  }
  return p;
}

RealPolynomial random_real_polynomial(Rng& rng, int nvars, int degree, int terms, int range) {
  RealPolynomial p(nvars);
  for (int t = 0; t < terms; ++t) {
    RealPolynomial::Exponent e(nvars, 0);
    const int deg = rng.integer(0, degree);
    for (int k = 0; k < deg; ++k) ++e[rng.integer(0, nvars - 1)];
    p.add_term(e, rng.integer(-range, range));
  }
  return p;
}

namespace {

RealPolynomial integer_linear_form(Rng& rng, int nvars, int range) {
  RealPolynomial l(nvars);
  for (int v = 0; v < nvars; ++v) l += RealPolynomial::variable(nvars, v, rng.integer(-range, range));
  return l;
}

}  // namespace

RealPolynomial random_strictly_psh(Rng& rng, int n) {
  const int nv = 4 * n;
  RealPolynomial p(nv);
  for (int r = 0; r < n; ++r) {
    const double a = rng.integer(1, 3);
    for (int c = 0; c < 4; ++c) {
      RealPolynomial::Exponent e(nv, 0);
      e[4 * r + c] = 2;
      p.add_term(e, a);
    }
  }
  for (int s = 0; s < 2; ++s) {
    const RealPolynomial l = integer_linear_form(rng, nv, 2);
    p += l * l;
  }
  const RealPolynomial l = integer_linear_form(rng, nv, 1);
  p += 0.25 * ((l * l) * (l * l));
  return p;
}

}  // namespace qpsh
