#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qpsh/grid.hpp"
#include "qpsh/scalar_field.hpp"

namespace qpsh {

using BoundaryFunction = std::function<double(const Point4&)>;

/// Lattice h Z^4 restricted to [-1, 1]^4; nodes with |q| < 1 are unknowns.
struct BallGrid {
  double h = 0.125;
  int count = 17;                ///< nodes per axis
  std::vector<Index4> interior;  ///< unknowns in lexicographic order
  std::vector<int> slot;         ///< node -> position in `interior`, or -1
  Eigen::VectorXd values;        ///< solution at the interior nodes

  int iterations = 0;
  double relative_residual = 0.0;
  /// Largest boundary value seen by the stencil.
  double boundary_max = 0.0;
  bool max_principle_holds = false;
  /// Minimum over interior nodes of the discrete Laplacian of the solution.
  double min_discrete_laplacian = 0.0;

  Point4 coords(const Index4& idx) const;
  std::size_t linear(const Index4& idx) const;
};

struct DirichletOptions {
  double relative_tolerance = 1e-12;
  /// 0 selects 10 * sqrt(number of unknowns).
  int max_iterations = 0;
  /// Initial iterate; zero when empty.
  std::optional<Eigen::VectorXd> initial;
};

/// Solves lap u = f in the unit ball of H with u = phi on the sphere using
/// the 9-point Laplacian with Shortley-Weller arms: a neighbour outside the
/// open ball is replaced by the sphere crossing on that axis, where phi is
/// evaluated. The system is not symmetric, so BiCGSTAB with a Jacobi
/// preconditioner is used.
///
/// Throws PreconditionError if f < 0 at an interior node or h does not
/// divide 1, NumericalError if the iteration cap is reached.
BallGrid solve_n1(const ScalarField& f, const BoundaryFunction& phi, double h,
                  const DirichletOptions& options = {});

struct SolutionError {
  double sup = 0.0;
  /// sqrt(h^4 sum e^2)
  double l2 = 0.0;
};

SolutionError solution_error(const BallGrid& g, const BoundaryFunction& exact);

/// sup over samples of |ma_density(u) - f_expected|.
double manufactured_residual(const ScalarField& u, const ScalarField& f_expected,
                             std::span<const std::vector<double>> samples);

}  // namespace qpsh
