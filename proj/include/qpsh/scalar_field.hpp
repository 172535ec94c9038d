#pragma once

#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qpsh/grid.hpp"
#include "qpsh/hmatrix.hpp"
#include "qpsh/jet.hpp"
#include "qpsh/polynomial.hpp"
#include "qpsh/quaternion.hpp"

namespace qpsh {

/// Real function of the 4n real coordinates written over Jet2, so that the
/// same code yields values and exact second derivatives.
using JetFunction = std::function<Jet2(std::span<const Jet2>)>;

/// Value, gradient and Hessian of a real field with respect to the 4n real
/// coordinates (t_1, x_1, y_1, z_1, t_2, ...).
struct SecondOrder {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

enum class Backend { kPolynomial, kCallable, kGrid };

/// Real- or quaternion-valued function on (a subset of) H^n.
///
/// Three interchangeable backends: an exact polynomial in the 4n real
/// coordinates, a real callable differentiated by second-order forward mode,
/// and a 4D grid (n = 1 only, evaluated at lattice nodes).
class ScalarField {
 public:
  static ScalarField polynomial(QPolynomial p);
  static ScalarField polynomial(const RealPolynomial& p);
  static ScalarField callable(int n, JetFunction f);
  static ScalarField grid(GridField g);

  int n() const { return n_; }
  int dimension() const { return 4 * n_; }
  Backend backend() const;
  bool is_real() const;

  Quaternion value(std::span<const double> point) const;

  /// Requires a real field; polynomial and callable backends are exact,
  /// the grid backend uses centered differences at a lattice node.
  SecondOrder second_order(std::span<const double> point) const;

  /// Evaluates a real polynomial or callable field over jets (e.g. to
  /// differentiate a composition).
  Jet2 evaluate_jet(std::span<const Jet2> point) const;

  const QPolynomial* as_polynomial() const { return std::get_if<QPolynomial>(&backend_); }
  const GridField* as_grid() const { return std::get_if<GridField>(&backend_); }

 private:
  struct Callable {
    JetFunction fn;
  };
  using Storage = std::variant<QPolynomial, Callable, GridField>;

  ScalarField(int n, Storage s) : n_(n), backend_(std::move(s)) {}

  int n_ = 1;
  Storage backend_;
};

/// Real 4n x 4n matrix of x -> A x for A acting on columns of H^n.
Eigen::MatrixXd left_action_matrix(const QMatrix& a);
/// Real 4n x 4n matrix of (q_1..q_n) -> (q_1 a, ..., q_n a).
Eigen::MatrixXd right_scalar_matrix(int n, const Quaternion& a);

/// f(M x) for a real-linear change of coordinates M (square, 4n x 4n).
ScalarField compose_linear(const ScalarField& f, const Eigen::MatrixXd& m);

}  // namespace qpsh
