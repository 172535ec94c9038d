#include <doctest.h>

#include <cmath>
#include <vector>

#include "qpsh/dirac.hpp"
#include "qpsh/errors.hpp"
#include "qpsh/sampling.hpp"

using namespace qpsh;

namespace {

QPolynomial q_identity() {
  // F(q) = t + x i + y j + z k
  QPolynomial p(4);
  for (int a = 0; a < 4; ++a) p += QPolynomial::variable(4, a, Quaternion::unit(a));
  return p;
}

RealPolynomial norm_sq_poly(int n) {
  RealPolynomial p(4 * n);
  for (int v = 0; v < 4 * n; ++v) {
    RealPolynomial::Exponent e(4 * n, 0);
    e[v] = 2;
    p.add_term(e, 1.0);
  }
  return p;
}

std::vector<std::vector<double>> sample_points(Rng& rng, int dim, int count) {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < count; ++i) pts.push_back(random_point(rng, dim));
  return pts;
}

double sup_over(const std::vector<std::vector<double>>& pts, const QPolynomial& a, const QPolynomial& b) {
  double m = 0.0;
  for (const auto& p : pts) m = std::max(m, max_abs_diff(a(p), b(p)));
  return m;
}

}  // namespace

TEST_CASE("dbar and d examples") {
  const ScalarField id = ScalarField::polynomial(q_identity());
  const std::vector<double> pt{0.3, -1.0, 2.0, 0.5};
  CHECK(dbar(id, 0).value(pt) == Quaternion(-2.0));
  CHECK(dbar_at(id, 0, pt) == Quaternion(-2.0));

  const ScalarField sq = ScalarField::polynomial(norm_sq_poly(1));
  const Quaternion q{pt[0], pt[1], pt[2], pt[3]};
  CHECK(max_abs_diff(dbar(sq, 0).value(pt), 2.0 * q) < 1e-15);
  CHECK(max_abs_diff(d(sq, 0).value(pt), 2.0 * conj(q)) < 1e-15);

  const ScalarField c = ScalarField::polynomial(QPolynomial::constant(4, Quaternion(1, 2, 3, 4)));
  CHECK(dbar(c, 0).value(pt) == Quaternion());
  CHECK(d(c, 0).value(pt) == Quaternion());
  CHECK_THROWS_AS(dbar(c, 1), PreconditionError);

  // callable backend only supports the pointwise form
  const ScalarField cb = ScalarField::callable(1, [](std::span<const Jet2> x) { return x[0] * x[0] + x[3]; });
  CHECK(max_abs_diff(dbar_at(cb, 0, pt), Quaternion(2 * pt[0], 0, 0, 1)) < 1e-15);
  CHECK(max_abs_diff(d_at(cb, 0, pt), Quaternion(2 * pt[0], 0, 0, -1)) < 1e-15);
  CHECK_THROWS_AS(dbar(cb, 0), PreconditionError);
}

TEST_CASE("d F = conj(dbar F) for real F") {
  Rng rng(101);
  for (int s = 0; s < 20; ++s) {
    const ScalarField f = ScalarField::polynomial(random_polynomial(rng, 8, 4, 10, true));
    const auto pts = sample_points(rng, 8, 5);
    for (int i = 0; i < 2; ++i)
      for (const auto& p : pts)
        CHECK(max_abs_diff(d(f, i).value(p), conj(dbar(f, i).value(p))) <= 1e-12);
  }
}

TEST_CASE("Dirac operators commute") {
  Rng rng(7);
  for (int s = 0; s < 50; ++s) {
    const QPolynomial p = random_polynomial(rng, 8, 4, 12, false);
    const ScalarField f = ScalarField::polynomial(p);
    const auto pts = sample_points(rng, 8, 6);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const QPolynomial a = *d(dbar(f, j), i).as_polynomial();
        const QPolynomial b = *dbar(d(f, i), j).as_polynomial();
        const double scale = std::max(1.0, a.max_abs_coeff());
        CHECK(sup_over(pts, a, b) <= 1e-10 * scale);
      }
  }
}

TEST_CASE("hessian examples") {
  const std::vector<double> pt8{0.1, 0.2, -0.3, 0.4, 1.0, -1.0, 0.5, 2.0};
  const HMatrix h = hessian(ScalarField::polynomial(norm_sq_poly(2)), pt8);
  CHECK(max_abs_diff(h.matrix(), 8.0 * QMatrix::identity(2)) == 0.0);

  const RealPolynomial lin = RealPolynomial::variable(8, 3, 2.0) + RealPolynomial::variable(8, 6, -1.0);
  CHECK(hessian(ScalarField::polynomial(lin), pt8).max_abs() == 0.0);

  RealPolynomial t2(4);
  t2.add_term({2, 0, 0, 0}, 1.0);
  const std::vector<double> pt4{0.4, 0.1, 0.2, 0.3};
  CHECK(hessian(ScalarField::polynomial(t2), pt4)(0, 0) == Quaternion(2.0));

  // the same through forward-mode differentiation
  const ScalarField cb = ScalarField::callable(2, [](std::span<const Jet2> x) {
    Jet2 s(0.0);
    for (const auto& v : x) s = s + v * v;
    return s;
  });
  CHECK(max_abs_diff(hessian(cb, pt8).matrix(), 8.0 * QMatrix::identity(2)) < 1e-14);

  const ScalarField qf = ScalarField::polynomial(q_identity());
  CHECK_THROWS_AS(hessian(qf, pt4), PreconditionError);
}

TEST_CASE("n = 1 hessian is the Laplacian") {
  Rng rng(13);
  for (int s = 0; s < 20; ++s) {
    const RealPolynomial p = component(random_polynomial(rng, 4, 4, 8, true), 0);
    const auto x = random_point(rng, 4);
    double lap = 0.0;
    for (int a = 0; a < 4; ++a) lap += p.derivative(a).derivative(a)(x);
    CHECK(hessian(ScalarField::polynomial(p), x)(0, 0).t == doctest::Approx(lap).epsilon(1e-12));
  }
}

TEST_CASE("hessian is hyperhermitian and both operator orders agree") {
  Rng rng(17);
  for (int s = 0; s < 30; ++s) {
    const ScalarField f = ScalarField::polynomial(random_polynomial(rng, 8, 4, 12, true));
    const auto x = random_point(rng, 8);
    const QMatrix raw = quaternionic_hessian_matrix(f.second_order(x).hessian);
    const double scale = std::max(1.0, raw.max_abs());
    CHECK(max_abs_diff(raw, raw.adjoint()) <= 1e-10 * scale);
    const QMatrix ops = hessian_by_operators(f, x, true);
    CHECK(max_abs_diff(ops, raw) <= 1e-10 * scale);
    CHECK(max_abs_diff(hessian_by_operators(f, x, false), raw) <= 1e-10 * scale);
    // the transposed ordering d_i(dbar_j f) is the entrywise conjugate
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const Quaternion other = dbar(d(f, i), j).value(x);
        CHECK(max_abs_diff(other, conj(raw(i, j))) <= 1e-10 * scale);
      }
  }
}

TEST_CASE("b* H b is the Laplacian along a right quaternionic line") {
  Rng rng(19);
  for (int s = 0; s < 20; ++s) {
    const ScalarField f = ScalarField::polynomial(random_polynomial(rng, 8, 3, 15, true));
    const auto x = random_point(rng, 8);
    const std::vector<Quaternion> b{rng.quaternion(-1, 1), rng.quaternion(-1, 1)};
    Eigen::MatrixXd m(8, 4);
    for (int c = 0; c < 4; ++c)
      for (int i = 0; i < 2; ++i) {
        const Quaternion v = b[i] * Quaternion::unit(c);
        for (int a = 0; a < 4; ++a) m(4 * i + a, c) = v[a];
      }
    const double lap = (m.transpose() * f.second_order(x).hessian * m).trace();
    const HMatrix h = hessian(f, x);
    Quaternion form;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) form += conj(b[i]) * h(i, j) * b[j];
    CHECK(form.t == doctest::Approx(lap).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("grid hessian converges at second order") {
  // quartic with non-vanishing fourth derivatives at the probe point
  RealPolynomial p(4);
  p.add_term({4, 0, 0, 0}, 1.0);
  p.add_term({2, 2, 0, 0}, 0.5);
  p.add_term({0, 1, 3, 0}, -1.0);
  p.add_term({0, 0, 1, 3}, 2.0);
  const ScalarField f = ScalarField::polynomial(p);
  const std::vector<double> probe{0.5, 0.25, -0.25, 0.5};
  const double exact = hessian(f, probe)(0, 0).t;

  std::vector<double> errors;
  for (int cells : {8, 16, 32}) {
    // the probe is a node of every grid
    const GridSpec spec = GridSpec::cube(-1.0, 1.0, cells);
    const GridField g = GridField::sample(spec, [&](const Point4& x) { return p(x); });
    const ScalarField gf = ScalarField::grid(g);
    const double approx = hessian(gf, probe)(0, 0).t;
    const GridField lap = hessian_grid(g);
    CHECK(lap.at(g.node_of({probe[0], probe[1], probe[2], probe[3]})) == doctest::Approx(approx));
    errors.push_back(std::fabs(approx - exact));
  }
  for (std::size_t r = 1; r < errors.size(); ++r) {
    const double order = std::log2(errors[r - 1] / errors[r]);
    CHECK(order >= 1.9);
  }
}

TEST_CASE("grid Dirac operator matches the polynomial one") {
  RealPolynomial p(4);
  p.add_term({2, 0, 0, 0}, 1.0);
  p.add_term({0, 1, 1, 0}, 3.0);
  p.add_term({0, 0, 0, 1}, -2.0);
  const GridField g = GridField::sample(GridSpec::cube(-1.0, 1.0, 8), [&](const Point4& x) { return p(x); });
  const ScalarField gf = ScalarField::grid(g);
  const ScalarField pf = ScalarField::polynomial(p);
  const std::vector<double> node{0.25, -0.5, 0.5, 0.0};
  // quadratic: centered differences are exact
  CHECK(max_abs_diff(dbar_at(gf, 0, node), dbar_at(pf, 0, node)) < 1e-12);
  CHECK(max_abs_diff(d(gf, 0).value(node), d(pf, 0).value(node)) < 1e-12);
  const std::vector<double> edge{-1.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(dbar_at(gf, 0, edge), PreconditionError);
}

TEST_CASE("transformation law") {
  Rng rng(29);
  const std::vector<std::vector<double>> pts1 = sample_points(rng, 4, 5);
  const ScalarField sq1 = ScalarField::polynomial(norm_sq_poly(1));
  CHECK(check_transformation(sq1, QMatrix::identity(1), pts1) == 0.0);
  QMatrix c(1);
  c(0, 0) = Quaternion(1.5);
  CHECK(check_transformation(sq1, c, pts1) < 1e-13);

  for (int s = 0; s < 20; ++s) {
    const ScalarField f = ScalarField::polynomial(random_polynomial(rng, 8, 2, 20, true));
    const QMatrix a = random_qmatrix(rng, 2);
    const auto pts = sample_points(rng, 8, 4);
    CHECK(check_transformation(f, a, pts) <= 1e-9);
  }
  for (int s = 0; s < 20; ++s) {
    const ScalarField f = ScalarField::polynomial(random_polynomial(rng, 8, 4, 12, true));
    const QMatrix a = random_qmatrix(rng, 2);
    const auto pts = sample_points(rng, 8, 4);
    const double dev = check_transformation(f, a, pts);
    const double dev_unit = check_transformation_unit(f, a, rng.unit_quaternion(), pts);
    CHECK(dev <= 1e-8 * 100.0);
    CHECK(dev_unit <= 1e-8 * 100.0);
  }
}

TEST_CASE("transformation law through forward-mode differentiation") {
  Rng rng(31);
  const ScalarField f = ScalarField::callable(2, [](std::span<const Jet2> x) {
    return exp(0.3 * x[0] - 0.2 * x[5]) + sin(x[1] * x[6]) + x[2] * x[2] * x[7];
  });
  for (int s = 0; s < 10; ++s) {
    const QMatrix a = random_qmatrix(rng, 2, 0.5);
    const auto pts = sample_points(rng, 8, 3);
    CHECK(check_transformation(f, a, pts) <= 1e-10);
    CHECK(check_transformation_unit(f, a, rng.unit_quaternion(), pts) <= 1e-10);
  }
}
