#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qpsh/hmatrix.hpp"
#include "qpsh/scalar_field.hpp"

namespace qpsh {

// Dirac operators on H-valued fields of the variables q_1..q_n:
//
//   dbar_i F = dF/dt_i + i dF/dx_i + j dF/dy_i + k dF/dz_i   (units on the left)
//   d_i F    = dF/dt_i - dF/dx_i i - dF/dy_i j - dF/dz_i k   (units on the right)
//
// Polynomial fields map to polynomial fields exactly; grid fields map to grid
// fields with the invalid band grown by one. Callable fields are real valued
// and only support the pointwise forms below.

ScalarField dbar(const ScalarField& f, int i);
ScalarField d(const ScalarField& f, int i);

Quaternion dbar_at(const ScalarField& f, int i, std::span<const double> point);
Quaternion d_at(const ScalarField& f, int i, std::span<const double> point);

/// Quaternionic Hessian from the real Hessian R of a real function:
/// entry (i, j) = sum_{a,b} R[4i+a][4j+b] e_a conj(e_b) = dbar_i (d_j f).
///
/// This is the ordering in which b* H b is the Laplacian of the restriction
/// lambda -> f(q + b lambda) to a right quaternionic line and in which
/// H(f o A) = A* H(f)(A q) A. The transposed ordering d_i (dbar_j f) is the
/// entrywise conjugate of H and in general has a different Moore determinant
/// and definiteness.
QMatrix quaternionic_hessian_matrix(const Eigen::MatrixXd& real_hessian);

/// Hyperhermitian Hessian of a real field at a point. Throws NumericalError if
/// the diagonal has an imaginary residue above 1e-9 of the entry scale.
HMatrix hessian(const ScalarField& f, std::span<const double> point);

/// Hessian assembled by applying the operators one after the other to a
/// polynomial field: entry (i, j) = dbar_i(d_j f) if `dbar_outer`, otherwise
/// d_j(dbar_i f). Used to check that the two orders agree.
QMatrix hessian_by_operators(const ScalarField& f, std::span<const double> point,
                             bool dbar_outer = true);

/// For n = 1 grids: the 1 x 1 Hessian field, i.e. the discrete Laplacian.
GridField hessian_grid(const GridField& f);

/// max over points of || hessian(f o A)(q) - A* hessian(f)(A q) A ||_max.
double check_transformation(const ScalarField& f, const QMatrix& a,
                            std::span<const std::vector<double>> points);

/// Same with the right unit-quaternion factor: q -> A (q a), |a| = 1, real f.
double check_transformation_unit(const ScalarField& f, const QMatrix& a, const Quaternion& unit,
                                 std::span<const std::vector<double>> points);

}  // namespace qpsh
