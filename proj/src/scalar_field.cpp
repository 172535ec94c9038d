#include "qpsh/scalar_field.hpp"

#include <string>

#include "qpsh/errors.hpp"

namespace qpsh {

namespace {

std::vector<Jet2> seed(std::span<const double> point) {
  const int dim = static_cast<int>(point.size());
  std::vector<Jet2> x;
  x.reserve(dim);
  for (int v = 0; v < dim; ++v) x.push_back(Jet2::variable(point[v], dim, v));
  return x;
}

SecondOrder unpack(const Jet2& j, int dim) {
  SecondOrder s;
  s.value = j.value();
  s.gradient.resize(dim);
  s.hessian.resize(dim, dim);
  for (int a = 0; a < dim; ++a) {
    s.gradient(a) = j.gradient(a);
    for (int b = 0; b < dim; ++b) s.hessian(a, b) = j.hessian(a, b);
  }
  return s;
}

}  // namespace

ScalarField ScalarField::polynomial(QPolynomial p) {
  if (p.nvars() <= 0 || p.nvars() % 4 != 0)
    throw PreconditionError("polynomial field needs 4n variables");
  const int n = p.nvars() / 4;
  return ScalarField(n, std::move(p));
}

ScalarField ScalarField::polynomial(const RealPolynomial& p) {
  return polynomial(to_quaternionic(p));
}

ScalarField ScalarField::callable(int n, JetFunction f) {
  if (n < 1 || 4 * n > Jet2::kMaxDim)
    throw PreconditionError("callable field supports 1 <= n <= " +
                            std::to_string(Jet2::kMaxDim / 4));
  return ScalarField(n, Callable{std::move(f)});
}

ScalarField ScalarField::grid(GridField g) { return ScalarField(1, std::move(g)); }

Backend ScalarField::backend() const {
  switch (backend_.index()) {
    case 0: return Backend::kPolynomial;
    case 1: return Backend::kCallable;
    default: return Backend::kGrid;
  }
}

bool ScalarField::is_real() const {
  if (const auto* p = as_polynomial()) return is_real_valued(*p);
  if (const auto* g = as_grid()) return g->components() == 1;
  return true;
}

Quaternion ScalarField::value(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dimension())
    throw PreconditionError("field evaluated at a point of wrong dimension");
  if (const auto* p = as_polynomial()) return (*p)(point);
  if (const auto* g = as_grid()) return g->value(g->node_of({point[0], point[1], point[2], point[3]}));
  std::vector<Jet2> x(point.begin(), point.end());
  return Quaternion(std::get<Callable>(backend_).fn(x).value());
}

Jet2 ScalarField::evaluate_jet(std::span<const Jet2> point) const {
  if (static_cast<int>(point.size()) != dimension())
    throw PreconditionError("field evaluated at a point of wrong dimension");
  if (const auto* p = as_polynomial()) {
    if (!is_real_valued(*p)) throw PreconditionError("jet evaluation needs a real field");
    return component(*p, 0).evaluate<Jet2>(point);
  }
  if (as_grid()) throw PreconditionError("grid fields cannot be evaluated over jets");
  return std::get<Callable>(backend_).fn(point);
}

SecondOrder ScalarField::second_order(std::span<const double> point) const {
  if (!is_real()) throw PreconditionError("second_order needs a real field");
  const int dim = dimension();
  if (static_cast<int>(point.size()) != dim)
    throw PreconditionError("field evaluated at a point of wrong dimension");
  if (const auto* g = as_grid()) {
    const Index4 idx = g->node_of({point[0], point[1], point[2], point[3]});
    for (int a = 0; a < 4; ++a)
      if (idx[a] - 1 < g->band() || idx[a] + 1 >= g->spec().count - g->band())
        throw PreconditionError("grid node too close to the invalid band for second differences");
    SecondOrder s;
    s.value = g->at(idx);
    s.gradient.resize(4);
    s.hessian.resize(4, 4);
    for (int a = 0; a < 4; ++a) {
      s.gradient(a) = grid_first_difference(*g, idx, a);
      for (int b = 0; b < 4; ++b) s.hessian(a, b) = grid_second_difference(*g, idx, a, b);
    }
    return s;
  }
  const auto x = seed(point);
  return unpack(evaluate_jet(x), dim);
}

Eigen::MatrixXd left_action_matrix(const QMatrix& a) {
  const int n = a.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int be = 0; be < 4; ++be) {
        const Quaternion col = a(i, j) * Quaternion::unit(be);
        for (int al = 0; al < 4; ++al) m(4 * i + al, 4 * j + be) = col[al];
      }
  return m;
}

Eigen::MatrixXd right_scalar_matrix(int n, const Quaternion& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  for (int i = 0; i < n; ++i)
    for (int be = 0; be < 4; ++be) {
      const Quaternion col = Quaternion::unit(be) * a;
      for (int al = 0; al < 4; ++al) m(4 * i + al, 4 * i + be) = col[al];
    }
  return m;
}

ScalarField compose_linear(const ScalarField& f, const Eigen::MatrixXd& m) {
  const int dim = f.dimension();
  if (m.rows() != dim || m.cols() != dim) throw PreconditionError("compose_linear: bad matrix size");
  if (const auto* p = f.as_polynomial()) return ScalarField::polynomial(p->compose_linear(m));
  if (f.as_grid()) throw PreconditionError("compose_linear is not available for grid fields");
  ScalarField inner = f;
  return ScalarField::callable(f.n(), [inner, m](std::span<const Jet2> x) {
    std::vector<Jet2> y(x.size());
    for (int v = 0; v < static_cast<int>(x.size()); ++v) {
      Jet2 s;
      for (int w = 0; w < static_cast<int>(x.size()); ++w)
        if (m(v, w) != 0.0) s += m(v, w) * x[w];
      y[v] = s;
    }
    return inner.evaluate_jet(y);
  });
}

}  // namespace qpsh
