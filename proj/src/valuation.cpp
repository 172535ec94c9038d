#include "qpsh/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qpsh/dirac.hpp"
#include "qpsh/errors.hpp"
#include "qpsh/halton.hpp"

namespace qpsh {

namespace {

// 1 / integral over the unit ball of R^d of (1 - r^2)^3
double kernel_constant(int d) {
  const double radial = 1.0 / d - 3.0 / (d + 2) + 3.0 / (d + 4) - 1.0 / (d + 6);
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
  return 1.0 / (sphere * radial);
}

std::uint64_t replicate_seed(std::uint64_t seed, int r) {
  // splitmix64 step so neighbouring seeds give unrelated scramblings
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(r + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

KernelRule KernelRule::build(int n, double delta, int node_count) {
  if (n < 1 || 4 * n > Jet2::kMaxDim) throw PreconditionError("KernelRule: unsupported n");
  if (!(delta > 0.0) || node_count < 2) throw PreconditionError("KernelRule: bad delta or node count");
  KernelRule r;
  r.n = n;
  r.delta = delta;
  const int d = 4 * n;
  const Halton seq(d);
  const int pairs = node_count / 2;
  std::uint64_t tried = 0;
  std::vector<double> u(d);
  while (static_cast<int>(r.nodes.size()) < 2 * pairs) {
    seq.point(++tried, u.data());
    std::vector<double> z(d);
    double s = 0.0;
    for (int c = 0; c < d; ++c) {
      z[c] = delta * (2.0 * u[c] - 1.0);
      s += z[c] * z[c];
    }
    if (s >= delta * delta) continue;
    std::vector<double> mz(d);
    for (int c = 0; c < d; ++c) mz[c] = -z[c];
    r.nodes.push_back(std::move(z));
    r.nodes.push_back(std::move(mz));
  }
  const double w = std::pow(2.0 * delta, d) / (2.0 * static_cast<double>(tried));
  r.weights.assign(r.nodes.size(), w);

  r.hessians.resize(r.nodes.size() * 4 * n * n);
  std::vector<Jet2> jz(d);
  for (std::size_t m = 0; m < r.nodes.size(); ++m) {
    for (int c = 0; c < d; ++c) jz[c] = Jet2::variable(r.nodes[m][c], d, c);
    const Jet2 j = r.rho(jz);
    Eigen::MatrixXd hess(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) hess(a, b) = j.hessian(a, b);
    // symmetrized per node so that every accumulated sum is exactly hyperhermitian
    const HMatrix q = HMatrix::from_matrix(quaternionic_hessian_matrix(hess), 1e-9);
    double* out = r.hessians.data() + m * 4 * n * n;
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj)
        for (int c = 0; c < 4; ++c) out[(i * n + jj) * 4 + c] = w * q(i, jj)[c];
  }
  // Calibrate so that sum_m w_m lap(rho)(z_m) |z_m|^2 = 2d, its exact value.
  // Then the rule differentiates |y|^2 exactly; without this the second
  // moment of a few hundred nodes is off by several percent, which biases
  // every mollified Hessian by the same factor.
  double moment = 0.0;
  for (std::size_t m = 0; m < r.nodes.size(); ++m) {
    double lap = 0.0, r2 = 0.0;
    for (int i = 0; i < n; ++i) lap += r.hessians[m * 4 * n * n + (i * n + i) * 4];
    for (double v : r.nodes[m]) r2 += v * v;
    moment += lap * r2;
  }
  if (!(moment > 0.0)) throw NumericalError("KernelRule: degenerate second moment");
  const double scale = 2.0 * d / moment;
  for (double& v : r.hessians) v *= scale;
  for (double& v : r.weights) v *= scale;
  return r;
}

double KernelRule::rho(std::span<const double> z) const {
  double s = 0.0;
  for (double v : z) s += v * v;
  const double t = 1.0 - s / (delta * delta);
  if (t <= 0.0) return 0.0;
  return kernel_constant(dim()) / std::pow(delta, dim()) * t * t * t;
}

Jet2 KernelRule::rho(std::span<const Jet2> z) const {
  Jet2 s(0.0);
  for (const auto& v : z) s = s + v * v;
  if (s.value() >= delta * delta) return Jet2(0.0);
  const Jet2 t = 1.0 - s * (1.0 / (delta * delta));
  return (kernel_constant(dim()) / std::pow(delta, dim())) * (t * t * t);
}

namespace {

void accumulate_hessian(const ConvexBody& k, const KernelRule& rule, std::span<const double> y,
                        std::vector<double>& acc, std::vector<double>& scratch) {
  const int d = rule.dim();
  const int len = 4 * rule.n * rule.n;
  std::fill(acc.begin(), acc.end(), 0.0);
  const double h0 = k.support(y);
  for (int m = 0; m < rule.size(); ++m) {
    const auto& z = rule.nodes[m];
    for (int c = 0; c < d; ++c) scratch[c] = y[c] - z[c];
    const double c = k.support(scratch) - h0;
    if (c == 0.0) continue;
    const double* hm = rule.hessians.data() + static_cast<std::size_t>(m) * len;
    for (int e = 0; e < len; ++e) acc[e] += c * hm[e];
  }
}

HMatrix to_hmatrix(const std::vector<double>& acc, int n) {
  QMatrix q(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double* e = acc.data() + (i * n + j) * 4;
      q(i, j) = Quaternion(e[0], e[1], e[2], e[3]);
    }
  return HMatrix::from_matrix(q, 1e-9);
}

}  // namespace

HMatrix mollified_hessian(const ConvexBody& k, const KernelRule& rule, std::span<const double> y) {
  if (k.dim() != rule.dim() || static_cast<int>(y.size()) != rule.dim())
    throw PreconditionError("mollified_hessian: dimension mismatch");
  std::vector<double> acc(4 * rule.n * rule.n), scratch(rule.dim());
  accumulate_hessian(k, rule, y, acc, scratch);
  return to_hmatrix(acc, rule.n);
}

ScalarField smoothed_support_field(const ConvexBody& k, const KernelRule& rule, std::vector<double> y0) {
  if (k.dim() != rule.dim() || static_cast<int>(y0.size()) != rule.dim())
    throw PreconditionError("smoothed_support_field: dimension mismatch");
  const int d = rule.dim();
  std::vector<double> coef(rule.size());
  std::vector<double> w(d);
  const double h0 = k.support(y0);
  for (int m = 0; m < rule.size(); ++m) {
    for (int c = 0; c < d; ++c) w[c] = y0[c] - rule.nodes[m][c];
    coef[m] = rule.weights[m] * (k.support(w) - h0);
  }
  return ScalarField::callable(rule.n, [rule, coef = std::move(coef), y0 = std::move(y0)](
                                           std::span<const Jet2> x) {
    const int dd = rule.dim();
    std::vector<Jet2> z(dd);
    Jet2 s(0.0);
    for (int m = 0; m < rule.size(); ++m) {
      if (coef[m] == 0.0) continue;
      for (int c = 0; c < dd; ++c) z[c] = x[c] + (rule.nodes[m][c] - y0[c]);
      s = s + coef[m] * rule.rho(z);
    }
    return s;
  });
}

void ValuationSpec::validate() const {
  if (n < 1 || 4 * n > Halton::kMaxDim) throw PreconditionError("valuation: unsupported n");
  if (k < 1 || k > n) throw PreconditionError("valuation: k must lie in 1..n");
  if (v.n != n || static_cast<int>(v.matrices.size()) != n - k)
    throw PreconditionError("valuation: need exactly n - k weight matrices of size n");
  if (!(outer > inner) || !(delta > 0.0)) throw PreconditionError("valuation: bad annulus or delta");
  if (inner <= delta)
    throw PreconditionError("valuation: psi0 support (with the kernel radius) touches the origin");
  if (samples < 1 || kernel_nodes < 2 || replicates < 2)
    throw PreconditionError("valuation: need samples >= 1, kernel_nodes >= 2, replicates >= 2");
  if (psi0 && psi0->dim != 4 * n) throw PreconditionError("valuation: psi0 has the wrong dimension");
}

Weight ValuationSpec::weight() const { return psi0 ? *psi0 : annulus_bump(4 * n, inner, outer, "psi0"); }

std::vector<double> valuation_integrand(const ConvexBody& k, const ValuationSpec& spec,
                                        const KernelRule& rule, int replicate) {
  spec.validate();
  if (k.dim() != 4 * spec.n || rule.n != spec.n) throw PreconditionError("valuation: dimension mismatch");
  const int d = 4 * spec.n;
  const Weight psi = spec.weight();
  const Halton seq(d, replicate_seed(spec.seed, replicate));
  std::vector<double> out(spec.samples, 0.0);
  std::vector<double> u(d), y(d), acc(4 * spec.n * spec.n), scratch(d);
  std::vector<HMatrix> slots(spec.n);
  for (int s = 0; s < spec.samples; ++s) {
    seq.point(static_cast<std::uint64_t>(s), u.data());
    double r2 = 0.0;
    for (int c = 0; c < d; ++c) {
      y[c] = spec.outer * (2.0 * u[c] - 1.0);
      r2 += y[c] * y[c];
    }
    if (r2 <= spec.inner * spec.inner || r2 >= spec.outer * spec.outer) continue;
    const double w = psi(y);
    if (w == 0.0) continue;
    accumulate_hessian(k, rule, y, acc, scratch);
    const HMatrix h = to_hmatrix(acc, spec.n);
    double density;
    if (spec.n == 1) {
      density = h(0, 0).t;
    } else {
      for (int i = 0; i < spec.k; ++i) slots[i] = h;
      for (int i = 0; i < spec.n - spec.k; ++i) slots[spec.k + i] = spec.v.matrices[i](y);
      density = mixed_discriminant(slots);
    }
    out[s] = w * density;
  }
  return out;
}

ValuationResult valuation(const ConvexBody& k, const ValuationSpec& spec) {
  spec.validate();
  return valuation(k, spec, KernelRule::build(spec.n, spec.delta, spec.kernel_nodes));
}

ValuationResult valuation(const ConvexBody& k, const ValuationSpec& spec, const KernelRule& rule) {
  spec.validate();
  if (rule.delta != spec.delta) throw PreconditionError("valuation: kernel rule built for another delta");
  const double box = std::pow(2.0 * spec.outer, 4 * spec.n);
  ValuationResult res;
  res.samples = spec.samples;
  res.delta = spec.delta;
  res.replicates.assign(spec.replicates, 0.0);
  const auto run = [&](int r) {
    const std::vector<double> vals = valuation_integrand(k, spec, rule, r);
    // fixed-size chunks keep the summation order independent of threading
    double sum = 0.0;
    for (std::size_t c = 0; c < vals.size(); c += 4096) {
      double part = 0.0;
      for (std::size_t i = c; i < std::min(vals.size(), c + 4096); ++i) part += vals[i];
      sum += part;
    }
    res.replicates[r] = sum / spec.samples * box;
  };
  const int workers = std::max(1, std::min(spec.threads, spec.replicates));
  if (workers == 1) {
    for (int r = 0; r < spec.replicates; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int r = w; r < spec.replicates; r += workers) run(r);
      });
    for (auto& t : pool) t.join();
  }
  double mean = 0.0;
  for (double v : res.replicates) mean += v;
  mean /= spec.replicates;
  double var = 0.0;
  for (double v : res.replicates) var += (v - mean) * (v - mean);
  var /= spec.replicates - 1;
  res.value = mean;
  res.standard_error = std::sqrt(var / spec.replicates);
  return res;
}

IdentityResidual valuation_identity_residual(const ConvexBody& k1, const ConvexBody& k2,
                                             const ValuationSpec& spec) {
  spec.validate();
  const KernelRule rule = KernelRule::build(spec.n, spec.delta, spec.kernel_nodes);
  IdentityResidual r;
  r.phi_max = valuation(ConvexBody::max_body(k1, k2), spec, rule).value;
  r.phi_min = valuation(ConvexBody::min_body(k1, k2), spec, rule).value;
  r.phi_1 = valuation(k1, spec, rule).value;
  r.phi_2 = valuation(k2, spec, rule).value;
  r.residual = std::fabs((r.phi_max - r.phi_2) + (r.phi_min - r.phi_1));
  return r;
}

}  // namespace qpsh
