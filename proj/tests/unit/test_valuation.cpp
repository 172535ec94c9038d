#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "../support/fixtures.hpp"
#include "qpsh/convex_body.hpp"
#include "qpsh/dirac.hpp"
#include "qpsh/errors.hpp"
#include "qpsh/halton.hpp"
#include "qpsh/valuation.hpp"
#include "qpsh/weight.hpp"

using namespace qpsh;
using namespace qpsh::testing;

namespace {

ConvexBody cube(int dim, double r = 1.0) {
  return ConvexBody::box(std::vector<double>(dim, -r), std::vector<double>(dim, r));
}

// integral over [0.5, 2] of rho^p psi0(rho) by composite Simpson
double radial_moment(int p) {
  const int m = 20000;
  const double a = 0.5, b = 2.0, h = (b - a) / m;
  auto f = [&](double r) {
    const double s = (r - 1.25) / 0.75;
    return std::pow(r, p) * std::pow(1.0 - s * s, 3);
  };
  double sum = f(a) + f(b);
  for (int i = 1; i < m; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

ValuationSpec small_spec(int n, int k, int samples) {
  ValuationSpec s;
  s.n = n;
  s.k = k;
  s.v = n == k ? WeightField::none(n) : WeightField::constant_identity(n, n - k);
  s.samples = samples;
  return s;
}

}  // namespace

TEST_CASE("halton points") {
  const Halton h(3);
  const auto p1 = h.point(1), p2 = h.point(2), p3 = h.point(3);
  CHECK(p1[0] == 0.5);
  CHECK(p1[1] == doctest::Approx(1.0 / 3));
  CHECK(p1[2] == doctest::Approx(1.0 / 5));
  CHECK(p2[0] == 0.25);
  CHECK(p2[1] == doctest::Approx(2.0 / 3));
  CHECK(p3[0] == 0.75);
  CHECK(p3[1] == doctest::Approx(1.0 / 9));

  const Halton s1(6, 11), s2(6, 11), s3(6, 12);
  CHECK(s1.point(17) == s2.point(17));
  CHECK(s1.point(17) != s3.point(17));
  std::vector<double> mean(6, 0.0);
  const int m = 1 << 12;
  for (int i = 0; i < m; ++i) {
    const auto p = s1.point(i);
    for (int c = 0; c < 6; ++c) {
      CHECK(p[c] >= 0.0);
      CHECK(p[c] < 1.0);
      mean[c] += p[c] / m;
    }
  }
  for (double v : mean) CHECK(v == doctest::Approx(0.5).epsilon(2e-3));
  CHECK_THROWS_AS(Halton(Halton::kMaxDim + 1), PreconditionError);
}

TEST_CASE("weights") {
  const auto b = tensor_bump({0.0, 0.0}, 0.5);
  const std::vector<double> origin{0.0, 0.0}, edge{0.5, 0.0}, half{0.25, 0.25};
  CHECK(b(origin) == 1.0);
  CHECK(b(edge) == 0.0);
  CHECK(b(half) == doctest::Approx(std::pow(0.75, 6)));
  const double vol = qmc_integrate(b, [](std::span<const double>) { return 1.0; }, 1 << 14);
  CHECK(vol == doctest::Approx(std::pow(0.5 * 32.0 / 35.0, 2)).epsilon(1e-3));

  const auto a = annulus_bump(4, 0.5, 2.0);
  const std::vector<double> inside{0.3, 0.0, 0.0, 0.0}, mid{1.25, 0.0, 0.0, 0.0}, out{0.0, 2.5, 0.0, 0.0};
  CHECK(a(inside) == 0.0);
  CHECK(a(mid) == 1.0);
  CHECK(a(out) == 0.0);
  // 2 pi^2 integral rho^3 psi
  const double shell = qmc_integrate(a, [](std::span<const double>) { return 1.0; }, 1 << 16);
  CHECK(shell == doctest::Approx(2 * std::numbers::pi * std::numbers::pi * radial_moment(3)).epsilon(1e-2));
}

TEST_CASE("support function examples") {
  Rng rng(1);
  for (int n : {1, 2}) {
    const int d = 4 * n;
    const auto ball = ConvexBody::ball(std::vector<double>(d, 0.0), 1.0);
    const auto c = cube(d);
    for (int s = 0; s < 20; ++s) {
      auto y = random_point(rng, d);
      double norm = 0.0, l1 = 0.0;
      for (double v : y) norm += v * v, l1 += std::fabs(v);
      norm = std::sqrt(norm);
      CHECK(ball.support(y) == doctest::Approx(norm));
      CHECK(c.support(y) == doctest::Approx(l1));

      const auto v = random_point(rng, d);
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += y[i] * v[i];
      CHECK(ConvexBody::translated(c, v).support(y) == doctest::Approx(l1 + dot));
      CHECK(ConvexBody::scaled(c, 2.5).support(y) == doctest::Approx(2.5 * l1));
      CHECK(ConvexBody::minkowski_sum(c, ball).support(y) == doctest::Approx(l1 + norm));
      CHECK(ConvexBody::point(v).support(y) == doctest::Approx(dot));

      const auto other = ConvexBody::translated(ball, v);
      CHECK(ConvexBody::max_body(c, other).support(y) == std::max(c.support(y), other.support(y)));
      CHECK(ConvexBody::min_body(c, other).support(y) == std::min(c.support(y), other.support(y)));

      // positive homogeneity and convexity
      auto z = random_point(rng, d);
      std::vector<double> ty(d), mid(d);
      for (int i = 0; i < d; ++i) ty[i] = 3.0 * y[i], mid[i] = 0.5 * (y[i] + z[i]);
      CHECK(other.support(ty) == doctest::Approx(3.0 * other.support(y)));
      CHECK(other.support(mid) <= 0.5 * (other.support(y) + other.support(z)) + 1e-12);
    }
  }
  const std::vector<std::vector<double>> verts{{0, 0}, {1, 0}, {0, 1}};
  const auto tri = ConvexBody::polytope(verts);
  const std::vector<double> y{1.0, 2.0};
  CHECK(tri.support(y) == 2.0);
  CHECK_THROWS_AS(ConvexBody::scaled(tri, -1.0), PreconditionError);
}

TEST_CASE("hausdorff distance") {
  const auto dirs = sphere_directions(4, 256);
  for (const auto& u : dirs) {
    double n = 0.0;
    for (double v : u) n += v * v;
    CHECK(n == doctest::Approx(1.0));
  }
  const auto b1 = ConvexBody::ball({0, 0, 0, 0}, 1.0), b2 = ConvexBody::ball({0, 0, 0, 0}, 2.0);
  CHECK(hausdorff_distance(b1, b1, dirs) == 0.0);
  CHECK(hausdorff_distance(b1, b2, dirs) == doctest::Approx(1.0));
  const std::vector<double> v{0.3, -0.4, 0.0, 0.0};
  const double dh = hausdorff_distance(cube(4), ConvexBody::translated(cube(4), v), dirs);
  CHECK(dh <= 0.5 + 1e-12);
  CHECK(dh > 0.45);
}

TEST_CASE("kernel rule") {
  for (int n : {1, 2}) {
    const auto rule = KernelRule::build(n, 0.1, 512);
    CHECK(rule.size() == 512);
    double mass = 0.0;
    for (int m = 0; m < rule.size(); ++m) {
      double r2 = 0.0;
      for (double v : rule.nodes[m]) r2 += v * v;
      CHECK(r2 < 0.01);
      CHECK(rule.nodes[m][0] == -rule.nodes[m ^ 1][0]);
      mass += rule.weights[m] * rule.rho(rule.nodes[m]);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(0.1));
  }
  CHECK_THROWS_AS(KernelRule::build(1, 0.0, 512), PreconditionError);
}

TEST_CASE("mollified hessians") {
  Rng rng(2);
  const auto rule = KernelRule::build(1, 0.1, 512);
  // linear support function: zero Hessian
  const auto pt = ConvexBody::point({0.2, -1.0, 0.5, 3.0});
  const std::vector<double> y{1.0, 0.5, -0.3, 0.2};
  CHECK(mollified_hessian(pt, rule, y).max_abs() < 1e-12);

  // |y| has Laplacian 3 / |y| in R^4
  const auto ball = ConvexBody::ball({0, 0, 0, 0}, 1.0);
  for (int s = 0; s < 5; ++s) {
    auto p = random_point(rng, 4, 1.5);
    double r = 0.0;
    for (double v : p) r += v * v;
    r = std::sqrt(r);
    if (r < 0.6) continue;
    CHECK(mollified_hessian(ball, rule, p)(0, 0).t == doctest::Approx(3.0 / r).epsilon(0.05));
  }

  // the callable evaluator has the same Hessian at its anchor
  const auto body = ConvexBody::minkowski_sum(cube(4), ball);
  const auto field = smoothed_support_field(body, rule, y);
  CHECK(max_abs_diff(hessian(field, y).matrix(), mollified_hessian(body, rule, y).matrix()) < 1e-9);
}

TEST_CASE("valuation matches analytic values at n = 1") {
  ValuationSpec spec = small_spec(1, 1, 1 << 14);
  const double pi = std::numbers::pi;
  // ball: lap |y| = 3 / |y|; cube: lap sum |y_c| = 2 sum delta(y_c)
  const double ball_exact = 2 * pi * pi * 3.0 * radial_moment(2);
  const double cube_exact = 4 * 2.0 * 4 * pi * radial_moment(2);
  const auto rb = valuation(ConvexBody::ball({0, 0, 0, 0}, 1.0), spec);
  const auto rc = valuation(cube(4), spec);
  CHECK(rb.value == doctest::Approx(ball_exact).epsilon(5e-3));
  CHECK(std::fabs(rc.value - cube_exact) < 4 * rc.standard_error + 1e-3 * cube_exact);
  CHECK(rb.replicates.size() == 8);
  CHECK(rb.samples == spec.samples);
  CHECK(rb.delta == spec.delta);
}

TEST_CASE("valuation properties") {
  for (int n : {1, 2})
    for (int k = 1; k <= n; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      const int d = 4 * n;
      const ValuationSpec spec = small_spec(n, k, n == 1 ? 1 << 12 : 1 << 10);
      const auto rule = KernelRule::build(n, spec.delta, spec.kernel_nodes);
      Rng rng(10 + n + k);
      const auto body = ConvexBody::minkowski_sum(
          ConvexBody::box(std::vector<double>(d, -0.5), std::vector<double>(d, 1.0)),
          ConvexBody::ball(random_point(rng, d, 0.2), 0.3));


      const auto shifted = ConvexBody::translated(body, random_point(rng, d, 2.0));
      const auto ia = valuation_integrand(body, spec, rule, 0);
      const auto ib = valuation_integrand(shifted, spec, rule, 0);
      double dev = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < ia.size(); ++i) {
        dev = std::max(dev, std::fabs(ia[i] - ib[i]));
        scale = std::max(scale, std::fabs(ia[i]));
      }
      CHECK(dev <= 1e-12 * std::max(1.0, scale));

      const auto base = valuation(body, spec, rule);
      // antithetic kernel pairs cancel a linear support function up to rounding
      CHECK(std::fabs(valuation(ConvexBody::point(random_point(rng, d)), spec, rule).value) <=
            1e-10 * std::fabs(base.value));
      for (double lam : {0.5, 2.0}) {
        const auto scaled = valuation(ConvexBody::scaled(body, lam), spec, rule);
        const double pooled = std::hypot(scaled.standard_error, std::pow(lam, k) * base.standard_error);
        CHECK(std::fabs(scaled.value - std::pow(lam, k) * base.value) <= 2 * pooled);
      }

      const auto inner = ConvexBody::scaled(body, 0.5);
      const auto nested = valuation_identity_residual(inner, body, spec);
      CHECK(nested.residual == 0.0);
      CHECK(valuation_identity_residual(body, body, spec).residual == 0.0);
    }
}

TEST_CASE("continuity under shrinking Minkowski perturbations") {
  const ValuationSpec spec = small_spec(1, 1, 1 << 12);
  const auto rule = KernelRule::build(1, spec.delta, spec.kernel_nodes);
  const auto k = cube(4, 0.8);
  const double base = valuation(k, spec, rule).value;
  const auto ball = ConvexBody::ball({0, 0, 0, 0}, 1.0);
  const auto dirs = sphere_directions(4, 128);
  double prev = 1e300;
  for (int nn : {1, 2, 4, 8}) {
    const auto kn = ConvexBody::minkowski_sum(k, ConvexBody::scaled(ball, 1.0 / nn));
    CHECK(hausdorff_distance(k, kn, dirs) <= 1.0 / nn + 1e-12);
    const double diff = std::fabs(valuation(kn, spec, rule).value - base);
    CHECK(diff < prev);
    prev = diff;
  }
}

TEST_CASE("box pair sharing a facet") {
  ValuationSpec spec = small_spec(1, 1, 1 << 12);
  const auto k1 = ConvexBody::box({-1, -1, -1, -1}, {0, 1, 1, 1});
  const auto k2 = ConvexBody::box({0, -1, -1, -1}, {1, 1, 1, 1});
  const auto r = valuation_identity_residual(k1, k2, spec);
  CHECK(r.residual <= 1e-10 * std::fabs(r.phi_max));
  // union and intersection bodies are realized by max / min of supports
  Rng rng(3);
  for (int s = 0; s < 10; ++s) {
    const auto y = random_point(rng, 4);
    CHECK(ConvexBody::max_body(k1, k2).support(y) == doctest::Approx(cube(4).support(y)));
  }
}

TEST_CASE("spec validation") {
  ValuationSpec s;
  s.delta = 0.5;
  CHECK_THROWS_AS(s.validate(), PreconditionError);
  ValuationSpec t;
  t.n = 2;
  t.k = 1;
  t.v = WeightField::none(2);
  CHECK_THROWS_AS(t.validate(), PreconditionError);
  t.v = WeightField::constant_identity(2, 1);
  CHECK_NOTHROW(t.validate());
  ValuationSpec u;
  u.k = 2;
  CHECK_THROWS_AS(u.validate(), PreconditionError);
}
