#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qpsh/convex_body.hpp"
#include "qpsh/hmatrix.hpp"
#include "qpsh/psh.hpp"
#include "qpsh/scalar_field.hpp"
#include "qpsh/weight.hpp"

namespace qpsh {

/// Quadrature for convolution with the normalized kernel
/// rho(z) = c (1 - |z|^2/delta^2)^3 on R^{4n}: antithetic pairs +-z of Halton
/// points of [-delta, delta]^{4n} falling in the ball. The quaternionic
/// Hessian of rho at every node (from forward-mode derivatives) is
/// precomputed, multiplied by the node weight. Weights are rescaled so that
/// the rule reproduces the second moment of lap(rho) exactly.
struct KernelRule {
  int n = 1;
  double delta = 0.1;
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;
  /// weights[m] * quaternionic Hessian of rho at nodes[m], flattened as
  /// 4 n^2 reals per node (row-major quaternion entries).
  std::vector<double> hessians;

  static KernelRule build(int n, double delta, int node_count);

  double rho(std::span<const double> z) const;
  Jet2 rho(std::span<const Jet2> z) const;
  int dim() const { return 4 * n; }
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Quaternionic Hessian of h_K * rho at y, computed as
/// sum_m w_m [h_K(y - z_m) - h_K(y)] hess(rho)(z_m).
HMatrix mollified_hessian(const ConvexBody& k, const KernelRule& rule, std::span<const double> y);

/// The smoothed evaluator
///   S(x) = sum_m w_m [h_K(y0 - z_m) - h_K(y0)] rho(z_m + x - y0)
/// as a callable field; its Hessian at y0 is mollified_hessian(k, rule, y0).
ScalarField smoothed_support_field(const ConvexBody& k, const KernelRule& rule,
                                   std::vector<double> y0);

struct ValuationSpec {
  int n = 1;
  int k = 1;
  WeightField v = WeightField::none(1);
  /// psi0 is supported in inner <= |y| <= outer; default: annulus_bump.
  double inner = 0.5;
  double outer = 2.0;
  std::optional<Weight> psi0;
  double delta = 0.1;
  int samples = 1 << 16;
  int kernel_nodes = 512;
  int replicates = 8;
  std::uint64_t seed = 1;
  int threads = 1;

  /// Throws PreconditionError on inconsistent fields or if the kernel could
  /// reach the origin (inner <= delta).
  void validate() const;
  Weight weight() const;
};

struct ValuationResult {
  double value = 0.0;
  double standard_error = 0.0;
  std::vector<double> replicates;
  int samples = 0;
  double delta = 0.0;
};

/// psi0(y) * det(hess(h_K * rho)[k], V...) at every outer sample of one
/// replicate (zero where psi0 vanishes), in sample order.
std::vector<double> valuation_integrand(const ConvexBody& k, const ValuationSpec& spec,
                                        const KernelRule& rule, int replicate);

/// Mean of replicate estimates (Halton over the bounding box of supp psi0,
/// each replicate with its own digit scrambling) and its standard error.
ValuationResult valuation(const ConvexBody& k, const ValuationSpec& spec);
ValuationResult valuation(const ConvexBody& k, const ValuationSpec& spec, const KernelRule& rule);

struct IdentityResidual {
  double residual = 0.0;
  double phi_max = 0.0, phi_min = 0.0, phi_1 = 0.0, phi_2 = 0.0;
};

/// |phi(max body) + phi(min body) - phi(K1) - phi(K2)|, grouped as
/// (phi_max - phi_2) + (phi_min - phi_1).
IdentityResidual valuation_identity_residual(const ConvexBody& k1, const ConvexBody& k2,
                                             const ValuationSpec& spec);

}  // namespace qpsh
