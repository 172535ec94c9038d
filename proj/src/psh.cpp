#include "qpsh/psh.hpp"

#include <algorithm>
#include <cmath>

#include "qpsh/dirac.hpp"
#include "qpsh/errors.hpp"

namespace qpsh {

PshVerdict is_psh_hessian(const ScalarField& f, std::span<const std::vector<double>> samples) {
  PshVerdict v;
  for (const auto& p : samples) {
    const HMatrix h = hessian(f, p);
    const double eps = 1e-10 * (1.0 + h.max_abs());
    if (!is_positive_definite(h + eps * HMatrix::identity(h.size()))) {
      v.is_psh = false;
      v.is_strict = false;
      v.witness = PshWitness{p, min_embedding_eigenvalue(h)};
      return v;
    }
    if (v.is_strict && !is_positive_definite(h)) v.is_strict = false;
  }
  return v;
}

double line_laplacian(const ScalarField& f, std::span<const double> a,
                      std::span<const Quaternion> b, const Quaternion& lambda) {
  const int n = f.n();
  if (static_cast<int>(a.size()) != 4 * n || static_cast<int>(b.size()) != n)
    throw PreconditionError("line restriction: dimension mismatch");
  // real 4n x 4 Jacobian of lambda -> b lambda
  Eigen::MatrixXd m(4 * n, 4);
  std::vector<double> x(a.begin(), a.end());
  for (int i = 0; i < n; ++i) {
    const Quaternion bl = b[i] * lambda;
    for (int c = 0; c < 4; ++c) {
      x[4 * i + c] += bl[c];
      const Quaternion col = b[i] * Quaternion::unit(c);
      for (int r = 0; r < 4; ++r) m(4 * i + r, c) = col[r];
    }
  }
  return (m.transpose() * f.second_order(x).hessian * m).trace();
}

bool is_subharmonic_on_line(const ScalarField& f, std::span<const double> a,
                            std::span<const Quaternion> b, std::span<const Quaternion> lambdas,
                            double tol) {
  return std::all_of(lambdas.begin(), lambdas.end(),
                     [&](const Quaternion& l) { return line_laplacian(f, a, b, l) >= -tol; });
}

double ma_density(const ScalarField& u, std::span<const double> point) {
  return moore_det(hessian(u, point));
}

WeightField WeightField::constant_identity(int n, int count, double c) {
  WeightField w{n, {}};
  for (int i = 0; i < count; ++i)
    w.matrices.push_back([n, c](std::span<const double>) { return c * HMatrix::identity(n); });
  return w;
}

double mixed_ma_density(std::span<const ScalarField> us, const WeightField& w,
                        std::span<const double> point) {
  const int n = w.n;
  if (us.empty() || static_cast<int>(us.size() + w.matrices.size()) != n)
    throw PreconditionError("mixed_ma_density: need k >= 1 fields and n - k weights");
  std::vector<HMatrix> slots;
  for (const auto& u : us) {
    if (u.n() != n) throw PreconditionError("mixed_ma_density: field dimension mismatch");
    slots.push_back(hessian(u, point));
  }
  for (const auto& v : w.matrices) slots.push_back(v(point));
  return mixed_discriminant(slots);
}

GridField mollify(const GridField& u, double delta) {
  if (u.components() != 1) throw PreconditionError("mollify: real grid field required");
  const double h = u.spec().h;
  if (delta < 2.0 * h * (1.0 - 1e-12)) throw PreconditionError("mollify: delta < 2h under-resolves the kernel");
  const int reach = static_cast<int>(std::ceil(delta / h - 1e-9));

  struct Tap {
    std::ptrdiff_t offset;
    double weight;
  };
  const auto n = static_cast<std::ptrdiff_t>(u.spec().count);
  const std::ptrdiff_t stride[4] = {n * n * n, n * n, n, 1};
  std::vector<Tap> taps;
  double mass = 0.0;
  for (int a = -reach; a <= reach; ++a)
    for (int b = -reach; b <= reach; ++b)
      for (int c = -reach; c <= reach; ++c)
        for (int d = -reach; d <= reach; ++d) {
          const double r2 = h * h * (a * a + b * b + c * c + d * d) / (delta * delta);
          if (r2 >= 1.0) continue;
          const double s = 1.0 - r2;
          const double wgt = s * s * s;
          taps.push_back({a * stride[0] + b * stride[1] + c * stride[2] + d * stride[3], wgt});
          mass += wgt;
        }
  for (auto& t : taps) t.weight /= mass;

  GridField out(u.spec(), 1, u.band() + reach);
  const double* src = u.component(0).data();
  double* dst = out.component(0).data();
  out.for_each_valid([&](const Index4& idx) {
    const auto k = static_cast<std::ptrdiff_t>(out.linear(idx));
    double s = 0.0;
    for (const auto& t : taps) s += t.weight * src[k + t.offset];
    dst[k] = s;
  });
  return out;
}

double ma_pairing_grid(const GridField& u, const Weight& psi) {
  if (u.components() != 1) throw PreconditionError("ma_pairing_grid: real grid field required");
  if (psi.dim != 4) throw PreconditionError("ma_pairing_grid: weight must live on R^4");
  const GridField lap = hessian_grid(u);
  const double h = u.spec().h;
  double sum = 0.0;
  const int cnt = u.spec().count;
  Index4 idx{};
  for (idx[0] = 0; idx[0] < cnt; ++idx[0])
    for (idx[1] = 0; idx[1] < cnt; ++idx[1])
      for (idx[2] = 0; idx[2] < cnt; ++idx[2])
        for (idx[3] = 0; idx[3] < cnt; ++idx[3]) {
          const Point4 y = u.coords(idx);
          const double w = psi(y);
          if (w == 0.0) continue;
          if (!lap.valid(idx))
            throw PreconditionError("weight support reaches the invalid boundary band");
          sum += lap.at(idx) * w;
        }
  return sum * h * h * h * h;
}

std::vector<double> ma_integral_mollified(const GridField& u, const Weight& psi,
                                          std::span<const double> deltas) {
  std::vector<double> out;
  for (double d : deltas) out.push_back(ma_pairing_grid(mollify(u, d), psi));
  return out;
}

namespace {

GridField combine(const GridField& a, const GridField& b, bool take_max) {
  if (!(a.spec() == b.spec()) || a.components() != 1 || b.components() != 1)
    throw PreconditionError("pointwise max/min: incompatible grid fields");
  GridField out(a.spec(), 1, std::max(a.band(), b.band()));
  const auto& x = a.component(0);
  const auto& y = b.component(0);
  auto& z = out.component(0);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = take_max ? std::max(x[i], y[i]) : std::min(x[i], y[i]);
  return out;
}

}  // namespace

GridField pointwise_max(const GridField& a, const GridField& b) { return combine(a, b, true); }
GridField pointwise_min(const GridField& a, const GridField& b) { return combine(a, b, false); }

double blocki_residual(const GridField& f, const GridField& g, const WeightField& w,
                       const Weight& psi, double delta) {
  if (w.n != 1 || !w.matrices.empty())
    throw PreconditionError("blocki_residual on grids: n = k = 1, no weight matrices");
  const auto pair = [&](const GridField& x) { return ma_pairing_grid(mollify(x, delta), psi); };
  const double d_max = pair(pointwise_max(f, g));
  const double d_min = pair(pointwise_min(f, g));
  const double d_f = pair(f);
  const double d_g = pair(g);
  return std::fabs((d_max - d_g) + (d_min - d_f));
}

}  // namespace qpsh
