#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qpsh/grid.hpp"
#include "qpsh/hmatrix.hpp"
#include "qpsh/scalar_field.hpp"
#include "qpsh/weight.hpp"

namespace qpsh {

struct PshWitness {
  std::vector<double> point;
  /// Smallest eigenvalue of the real embedding of the Hessian there.
  double eigenvalue = 0.0;
};

struct PshVerdict {
  bool is_psh = true;
  bool is_strict = true;
  std::optional<PshWitness> witness;
};

/// Definiteness of the quaternionic Hessian at every sample. Non-strict
/// positivity is tested as positive definiteness of H + eps Id with
/// eps = 1e-10 (1 + max|H|).
PshVerdict is_psh_hessian(const ScalarField& f, std::span<const std::vector<double>> samples);

/// Laplacian in lambda of g(lambda) = f(a + b lambda) (right multiplication
/// by lambda) is >= -tol at every sampled lambda.
bool is_subharmonic_on_line(const ScalarField& f, std::span<const double> a,
                            std::span<const Quaternion> b, std::span<const Quaternion> lambdas,
                            double tol = 1e-9);

/// The same Laplacian at one lambda.
double line_laplacian(const ScalarField& f, std::span<const double> a,
                      std::span<const Quaternion> b, const Quaternion& lambda);

/// moore_det of the Hessian at a point.
double ma_density(const ScalarField& u, std::span<const double> point);

using MatrixField = std::function<HMatrix(std::span<const double>)>;

/// The hyperhermitian weights V^(1..n-k) of a mixed Monge-Ampere density.
struct WeightField {
  int n = 1;
  std::vector<MatrixField> matrices;

  static WeightField none(int n) { return {n, {}}; }
  /// c * Id repeated `count` times.
  static WeightField constant_identity(int n, int count, double c = 1.0);
};

/// mixed_discriminant(hess u_1, ..., hess u_k, V_1, ..., V_{n-k}) at a point.
double mixed_ma_density(std::span<const ScalarField> us, const WeightField& w,
                        std::span<const double> point);

// ---- n = 1 grid experiments -------------------------------------------------

/// Convolution with the normalized discrete kernel (1 - r^2/delta^2)^3 on
/// lattice offsets with r <= delta. The band grows by ceil(delta / h).
/// Requires delta >= 2h.
GridField mollify(const GridField& u, double delta);

/// h^4 sum over nodes of lap_h(u) * psi: the pairing of the n = 1 MA measure
/// (the distributional Laplacian) with psi. Throws if psi is non-zero on a
/// node where the discrete Laplacian has no value.
double ma_pairing_grid(const GridField& u, const Weight& psi);

/// ma_pairing_grid(mollify(u, delta), psi) for every delta.
std::vector<double> ma_integral_mollified(const GridField& u, const Weight& psi,
                                          std::span<const double> deltas);

/// |pairing of D(max) + D(min) - D(f) - D(g) with psi| at mollification delta,
/// where D is the n = 1 MA density (k = n = 1, so W must be empty). The terms
/// are grouped as (max - g) + (min - f) so nested inputs give exactly 0.
double blocki_residual(const GridField& f, const GridField& g, const WeightField& w,
                       const Weight& psi, double delta);

GridField pointwise_max(const GridField& a, const GridField& b);
GridField pointwise_min(const GridField& a, const GridField& b);

}  // namespace qpsh
