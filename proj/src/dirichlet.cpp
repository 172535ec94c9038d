#include "qpsh/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "qpsh/errors.hpp"
#include "qpsh/psh.hpp"

namespace qpsh {

namespace {

double norm_sq4(const Point4& p) { return p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]; }

bool inside(const Point4& p) { return norm_sq4(p) < 1.0 - 1e-12; }

// Distance s > 0 from p along +/- e_axis to the unit sphere.
double sphere_crossing(const Point4& p, int axis, int sign) {
  const double r2 = norm_sq4(p) - p[axis] * p[axis];
  const double reach = std::sqrt(std::max(0.0, 1.0 - r2));
  return sign > 0 ? reach - p[axis] : p[axis] + reach;
}

struct Arm {
  double length;
  int neighbour;  // slot of the neighbour, or -1 for a sphere crossing
  double boundary_value;
};

}  // namespace

Point4 BallGrid::coords(const Index4& idx) const {
  return {-1.0 + h * idx[0], -1.0 + h * idx[1], -1.0 + h * idx[2], -1.0 + h * idx[3]};
}

std::size_t BallGrid::linear(const Index4& idx) const {
  const auto n = static_cast<std::size_t>(count);
  return ((static_cast<std::size_t>(idx[0]) * n + idx[1]) * n + idx[2]) * n + idx[3];
}

BallGrid solve_n1(const ScalarField& f, const BoundaryFunction& phi, double h,
                  const DirichletOptions& options) {
  if (f.n() != 1 || !f.is_real()) throw PreconditionError("solve_n1: real field on H required");
  const double cells = 2.0 / h;
  if (!(h > 0.0) || std::fabs(cells - std::round(cells)) > 1e-9 || std::round(cells) < 4)
    throw PreconditionError("solve_n1: h must divide 1 with at least 2 cells per half-axis");

  BallGrid g;
  g.h = h;
  g.count = static_cast<int>(std::round(cells)) + 1;
  g.slot.assign(static_cast<std::size_t>(g.count) * g.count * g.count * g.count, -1);
  Index4 idx{};
  for (idx[0] = 0; idx[0] < g.count; ++idx[0])
    for (idx[1] = 0; idx[1] < g.count; ++idx[1])
      for (idx[2] = 0; idx[2] < g.count; ++idx[2])
        for (idx[3] = 0; idx[3] < g.count; ++idx[3])
          if (inside(g.coords(idx))) {
            g.slot[g.linear(idx)] = static_cast<int>(g.interior.size());
            g.interior.push_back(idx);
          }
  const int n = static_cast<int>(g.interior.size());

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 9);
  Eigen::VectorXd rhs(n);
  std::vector<std::array<Arm, 8>> arms(n);
  g.boundary_max = -INFINITY;

  for (int r = 0; r < n; ++r) {
    const Index4& node = g.interior[r];
    const Point4 p = g.coords(node);
    const double fv = f.value(std::span<const double>(p.data(), 4)).t;
    if (fv < 0.0) throw PreconditionError("solve_n1: f must be non-negative");
    double b = fv, diag = 0.0;
    for (int a = 0; a < 4; ++a) {
      Arm side[2];
      for (int s = 0; s < 2; ++s) {
        const int sign = s == 0 ? 1 : -1;
        Index4 nb = node;
        nb[a] += sign;
        const int k = g.slot[g.linear(nb)];
        if (k >= 0) {
          side[s] = {h, k, 0.0};
        } else {
          const double len = std::min(h, sphere_crossing(p, a, sign));
          Point4 q = p;
          q[a] += sign * len;
          side[s] = {len, -1, phi(q)};
          g.boundary_max = std::max(g.boundary_max, side[s].boundary_value);
        }
        arms[r][2 * a + s] = side[s];
      }
      // u_aa ~ 2/(hp+hm) [ (u+ - u0)/hp - (u0 - u-)/hm ]
      const double hp = side[0].length, hm = side[1].length;
      const double cp = 2.0 / (hp * (hp + hm)), cm = 2.0 / (hm * (hp + hm));
      diag -= cp + cm;
      for (const auto& [arm, c] : {std::pair{side[0], cp}, std::pair{side[1], cm}}) {
        if (arm.neighbour >= 0) trip.emplace_back(r, arm.neighbour, c);
        else b -= c * arm.boundary_value;
      }
    }
    trip.emplace_back(r, r, diag);
    rhs(r) = b;
  }

  Eigen::SparseMatrix<double, Eigen::RowMajor> m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());

  Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::DiagonalPreconditioner<double>> solver;
  solver.compute(m);
  solver.setTolerance(options.relative_tolerance);
  const int cap = options.max_iterations > 0
                      ? options.max_iterations
                      : static_cast<int>(std::ceil(10.0 * std::sqrt(static_cast<double>(n))));
  solver.setMaxIterations(cap);
  const Eigen::VectorXd guess = options.initial ? *options.initial : Eigen::VectorXd::Zero(n);
  if (guess.size() != n) throw PreconditionError("solve_n1: initial iterate has wrong size");
  g.values = solver.solveWithGuess(rhs, guess);
  g.iterations = static_cast<int>(solver.iterations());
  const double bnorm = rhs.norm();
  g.relative_residual = bnorm > 0.0 ? (rhs - m * g.values).norm() / bnorm : (m * g.values).norm();
  if (solver.info() != Eigen::Success || !(g.relative_residual <= 10.0 * options.relative_tolerance)) {
    std::ostringstream msg;
    msg << "solve_n1: no convergence after " << g.iterations << " iterations, relative residual "
        << g.relative_residual;
    throw NumericalError(msg.str());
  }

  // post-checks: discrete maximum principle and psh-ness (lap u >= 0)
  const double interior_max = g.values.maxCoeff();
  const double scale = std::max({1.0, std::fabs(g.boundary_max), std::fabs(interior_max)});
  g.max_principle_holds = interior_max <= g.boundary_max + 1e-9 * scale;
  const Eigen::VectorXd lap = m * g.values;
  double lmin = INFINITY;
  for (int r = 0; r < n; ++r) {
    double bterm = 0.0;
    for (int a = 0; a < 4; ++a) {
      const Arm& p = arms[r][2 * a];
      const Arm& q = arms[r][2 * a + 1];
      const double s = p.length + q.length;
      if (p.neighbour < 0) bterm += 2.0 / (p.length * s) * p.boundary_value;
      if (q.neighbour < 0) bterm += 2.0 / (q.length * s) * q.boundary_value;
    }
    lmin = std::min(lmin, lap(r) + bterm);
  }
  g.min_discrete_laplacian = lmin;
  return g;
}

SolutionError solution_error(const BallGrid& g, const BoundaryFunction& exact) {
  SolutionError e;
  double ss = 0.0;
  for (std::size_t r = 0; r < g.interior.size(); ++r) {
    const double d = std::fabs(g.values(static_cast<Eigen::Index>(r)) - exact(g.coords(g.interior[r])));
    e.sup = std::max(e.sup, d);
    ss += d * d;
  }
  e.l2 = g.h * g.h * std::sqrt(ss);
  return e;
}

double manufactured_residual(const ScalarField& u, const ScalarField& f_expected,
                             std::span<const std::vector<double>> samples) {
  if (u.n() != f_expected.n()) throw PreconditionError("manufactured_residual: dimension mismatch");
  double worst = 0.0;
  for (const auto& p : samples)
    worst = std::max(worst, std::fabs(ma_density(u, p) - f_expected.value(p).t));
  return worst;
}

}  // namespace qpsh
