#include "qpsh/dirac.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

#include "qpsh/errors.hpp"

namespace qpsh {

namespace {

void check_variable(const ScalarField& f, int i) {
  if (i < 0 || i >= f.n()) throw PreconditionError("Dirac operator: variable index out of range");
}

// Quaternion-valued partial derivative along real coordinate `axis` at a node.
Quaternion grid_partial(const GridField& g, const Index4& idx, int axis) {
  Quaternion p;
  for (int c = 0; c < g.components(); ++c) p[c] = grid_first_difference(g, idx, axis, c);
  return p;
}

GridField grid_dirac(const GridField& g, bool bar) {
  GridField out(g.spec(), 4, g.band() + 1);
  out.for_each_valid([&](const Index4& idx) {
    Quaternion r;
    for (int a = 0; a < 4; ++a) {
      const Quaternion p = grid_partial(g, idx, a);
      r += bar ? Quaternion::unit(a) * p : p * conj(Quaternion::unit(a));
    }
    for (int c = 0; c < 4; ++c) out.at(idx, c) = r[c];
  });
  return out;
}

QPolynomial poly_dirac(const QPolynomial& p, int i, bool bar) {
  QPolynomial r(p.nvars());
  for (int a = 0; a < 4; ++a) {
    const QPolynomial da = p.derivative(4 * i + a);
    r += bar ? Quaternion::unit(a) * da : da * conj(Quaternion::unit(a));
  }
  return r;
}

Quaternion pointwise_dirac(const ScalarField& f, int i, std::span<const double> point, bool bar) {
  check_variable(f, i);
  if (const auto* p = f.as_polynomial()) return poly_dirac(*p, i, bar)(point);
  if (const auto* g = f.as_grid()) {
    const Index4 idx = g->node_of({point[0], point[1], point[2], point[3]});
    GridField probe(g->spec(), 1, g->band() + 1);
    if (!probe.valid(idx)) throw PreconditionError("grid node lies in the invalid boundary band");
    Quaternion r;
    for (int a = 0; a < 4; ++a) {
      const Quaternion pa = grid_partial(*g, idx, a);
      r += bar ? Quaternion::unit(a) * pa : pa * conj(Quaternion::unit(a));
    }
    return r;
  }
  const SecondOrder s = f.second_order(point);
  Quaternion r;
  for (int a = 0; a < 4; ++a) {
    const double pa = s.gradient(4 * i + a);
    r += bar ? Quaternion::unit(a) * pa : pa * conj(Quaternion::unit(a));
  }
  return r;
}

}  // namespace

ScalarField dbar(const ScalarField& f, int i) {
  check_variable(f, i);
  if (const auto* p = f.as_polynomial()) return ScalarField::polynomial(poly_dirac(*p, i, true));
  if (const auto* g = f.as_grid()) return ScalarField::grid(grid_dirac(*g, true));
  throw PreconditionError("dbar: callable fields support only dbar_at");
}

ScalarField d(const ScalarField& f, int i) {
  check_variable(f, i);
  if (const auto* p = f.as_polynomial()) return ScalarField::polynomial(poly_dirac(*p, i, false));
  if (const auto* g = f.as_grid()) return ScalarField::grid(grid_dirac(*g, false));
  throw PreconditionError("d: callable fields support only d_at");
}

Quaternion dbar_at(const ScalarField& f, int i, std::span<const double> point) {
  return pointwise_dirac(f, i, point, true);
}

Quaternion d_at(const ScalarField& f, int i, std::span<const double> point) {
  return pointwise_dirac(f, i, point, false);
}

QMatrix quaternionic_hessian_matrix(const Eigen::MatrixXd& r) {
  if (r.rows() != r.cols() || r.rows() % 4 != 0)
    throw PreconditionError("real Hessian must be 4n x 4n");
  const int n = static_cast<int>(r.rows() / 4);
  QMatrix h(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Quaternion s;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          s += r(4 * i + a, 4 * j + b) * (Quaternion::unit(a) * conj(Quaternion::unit(b)));
      h(i, j) = s;
    }
  return h;
}

HMatrix hessian(const ScalarField& f, std::span<const double> point) {
  if (!f.is_real()) throw PreconditionError("hessian needs a real-valued field");
  const Eigen::MatrixXd r = f.second_order(point).hessian;
  const QMatrix h = quaternionic_hessian_matrix(r);
  // rounding is relative to the real second derivatives, which can be much
  // larger than the quaternionic entries (e.g. a near-zero Laplacian)
  const double scale = std::max({h.max_abs(), r.cwiseAbs().maxCoeff(), 1e-300});
  for (int i = 0; i < h.size(); ++i) {
    if (h(i, i).imag_norm() > 1e-9 * scale)
      throw NumericalError("hessian: diagonal entry has an imaginary residue");
    for (int j = i + 1; j < h.size(); ++j)
      if (abs(h(i, j) - conj(h(j, i))) > 1e-9 * scale)
        throw NumericalError("hessian: not hyperhermitian beyond rounding");
  }
  // already validated against the real scale
  return HMatrix::from_matrix(h, std::numeric_limits<double>::infinity());
}

QMatrix hessian_by_operators(const ScalarField& f, std::span<const double> point, bool dbar_outer) {
  const auto* p = f.as_polynomial();
  if (!p) throw PreconditionError("hessian_by_operators needs a polynomial field");
  const int n = f.n();
  QMatrix h(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const QPolynomial e = dbar_outer ? poly_dirac(poly_dirac(*p, j, false), i, true)
                                       : poly_dirac(poly_dirac(*p, i, true), j, false);
      h(i, j) = e(point);
    }
  return h;
}

GridField hessian_grid(const GridField& f) {
  if (f.components() != 1) throw PreconditionError("hessian_grid needs a real grid field");
  GridField out(f.spec(), 1, f.band() + 1);
  out.for_each_valid([&](const Index4& idx) {
    double lap = 0.0;
    for (int a = 0; a < 4; ++a) lap += grid_second_difference(f, idx, a, a);
    out.at(idx) = lap;
  });
  return out;
}

namespace {

double transformation_deviation(const ScalarField& f, const QMatrix& a, const Eigen::MatrixXd& m,
                                std::span<const std::vector<double>> points) {
  if (a.size() != f.n()) throw PreconditionError("transformation size mismatch");
  const ScalarField composed = compose_linear(f, m);
  const QMatrix a_adj = a.adjoint();
  double worst = 0.0;
  for (const auto& q : points) {
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(q.data(), q.size());
    const Eigen::VectorXd mx = m * x;
    const std::vector<double> image(mx.data(), mx.data() + mx.size());
    const HMatrix lhs = hessian(composed, q);
    const QMatrix rhs = a_adj * hessian(f, image).matrix() * a;
    worst = std::max(worst, max_abs_diff(lhs.matrix(), rhs));
  }
  return worst;
}

}  // namespace

double check_transformation(const ScalarField& f, const QMatrix& a,
                            std::span<const std::vector<double>> points) {
  return transformation_deviation(f, a, left_action_matrix(a), points);
}

double check_transformation_unit(const ScalarField& f, const QMatrix& a, const Quaternion& unit,
                                 std::span<const std::vector<double>> points) {
  if (std::fabs(norm_sq(unit) - 1.0) > 1e-12)
    throw PreconditionError("check_transformation_unit: quaternion must have unit norm");
  return transformation_deviation(
      f, a, left_action_matrix(a) * right_scalar_matrix(f.n(), unit), points);
}

}  // namespace qpsh
