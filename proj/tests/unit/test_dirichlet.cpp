#include <doctest.h>

#include <cmath>
#include <vector>

#include "../support/fixtures.hpp"
#include "qpsh/dirichlet.hpp"
#include "qpsh/errors.hpp"

using namespace qpsh;
using namespace qpsh::testing;

namespace {

double r2(const Point4& q) { return q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]; }

ScalarField constant_field(double c) { return ScalarField::polynomial(RealPolynomial::constant(4, c)); }

}  // namespace

TEST_CASE("harmonic boundary data") {
  const auto t = [](const Point4& q) { return q[0]; };
  const auto g = solve_n1(constant_field(0.0), t, 1.0 / 8);
  CHECK(solution_error(g, t).sup < 1e-9);
  CHECK(g.relative_residual <= 1e-12);

  const auto one = [](const Point4&) { return 1.0; };
  const auto g1 = solve_n1(constant_field(0.0), one, 1.0 / 8);
  CHECK(solution_error(g1, one).sup < 1e-9);

  // t^2 - x^2 + yz is harmonic
  const auto hq = [](const Point4& q) { return q[0] * q[0] - q[1] * q[1] + q[2] * q[3]; };
  const auto g2 = solve_n1(constant_field(0.0), hq, 1.0 / 8);
  CHECK(solution_error(g2, hq).sup < 1e-9);
}

TEST_CASE("paraboloid is recovered") {
  const auto one = [](const Point4&) { return 1.0; };
  for (double h : {1.0 / 4, 1.0 / 8}) {
    const auto g = solve_n1(constant_field(8.0), one, h);
    CHECK(solution_error(g, r2).sup < 1e-9);
    CHECK(g.max_principle_holds);
    CHECK(g.min_discrete_laplacian > 8.0 - 1e-6);
  }
}

TEST_CASE("quartic converges at second order") {
  // lap |q|^4 = 24 |q|^2 in R^4
  RealPolynomial f(4);
  f += 24.0 * norm_sq(1);
  const auto exact = [](const Point4& q) { return r2(q) * r2(q); };
  std::vector<double> errs;
  const std::vector<double> hs{1.0 / 4, 1.0 / 8, 1.0 / 12};
  for (double h : hs) {
    const auto g = solve_n1(ScalarField::polynomial(f), exact, h);
    errs.push_back(solution_error(g, exact).sup);
    CHECK(g.max_principle_holds);
  }
  for (std::size_t i = 1; i < hs.size(); ++i) {
    const double order = std::log(errs[i - 1] / errs[i]) / std::log(hs[i - 1] / hs[i]);
    CHECK(order > 1.7);
  }
}

TEST_CASE("structure of the ball grid") {
  const auto g = solve_n1(constant_field(0.0), [](const Point4&) { return 0.0; }, 1.0 / 4);
  CHECK(g.count == 9);
  for (const auto& idx : g.interior) CHECK(r2(g.coords(idx)) < 1.0);
  int inside = 0;
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b)
      for (int c = 0; c < 9; ++c)
        for (int d = 0; d < 9; ++d) inside += r2(g.coords({a, b, c, d})) < 1.0 - 1e-12;
  CHECK(inside == static_cast<int>(g.interior.size()));
  CHECK(g.values.size() == inside);
}

TEST_CASE("initial iterates converge to the same solution") {
  const auto phi = [](const Point4& q) { return std::exp(q[0]) * std::cos(q[1]) + q[2]; };
  const auto f = constant_field(3.0);
  const auto g0 = solve_n1(f, phi, 1.0 / 8);
  DirichletOptions opts;
  Rng rng(4);
  Eigen::VectorXd init(g0.values.size());
  for (auto& v : init) v = rng.uniform(-10, 10);
  opts.initial = init;
  const auto g1 = solve_n1(f, phi, 1.0 / 8, opts);
  CHECK((g0.values - g1.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("preconditions") {
  const auto zero = [](const Point4&) { return 0.0; };
  CHECK_THROWS_AS(solve_n1(constant_field(-1.0), zero, 1.0 / 4), PreconditionError);
  CHECK_THROWS_AS(solve_n1(constant_field(0.0), zero, 0.3), PreconditionError);
  DirichletOptions opts;
  opts.max_iterations = 1;
  CHECK_THROWS_AS(solve_n1(constant_field(8.0), [](const Point4& q) { return std::sin(3 * q[0]); }, 1.0 / 8, opts),
                  NumericalError);
}

TEST_CASE("manufactured residual") {
  Rng rng(5);
  const auto pts = points(rng, 8, 20);
  CHECK(manufactured_residual(ScalarField::polynomial(norm_sq(2)), ScalarField::polynomial(RealPolynomial::constant(8, 64.0)), pts) <= 1e-9);
  CHECK(manufactured_residual(ScalarField::polynomial(weighted_norm_sq({1.0, 2.0})),
                              ScalarField::polynomial(RealPolynomial::constant(8, 128.0)), pts) <= 1e-9);
  RealPolynomial lin(8);
  for (int v = 0; v < 8; ++v) lin += RealPolynomial::variable(8, v, v - 3.0);
  CHECK(manufactured_residual(ScalarField::polynomial(lin), ScalarField::polynomial(RealPolynomial(8)), pts) == 0.0);
  // a wrong expectation is detected
  CHECK(manufactured_residual(ScalarField::polynomial(norm_sq(2)), ScalarField::polynomial(RealPolynomial::constant(8, 60.0)), pts) ==
        doctest::Approx(4.0));
}
