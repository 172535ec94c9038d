#include "qpsh/hmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qpsh/errors.hpp"

namespace qpsh {

// ---------------------------------------------------------------------------
// QMatrix

QMatrix QMatrix::identity(int n) {
  QMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = Quaternion::one();
  return m;
}

QMatrix QMatrix::adjoint() const {
  QMatrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(j, i) = conj((*this)(i, j));
  return r;
}

double QMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& q : data_) m = std::max(m, abs(q));
  return m;
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
  if (o.n_ != n_) throw PreconditionError("QMatrix size mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& o) {
  if (o.n_ != n_) throw PreconditionError("QMatrix size mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

QMatrix& QMatrix::operator*=(double s) {
  for (auto& q : data_) q *= s;
  return *this;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.size() != b.size()) throw PreconditionError("QMatrix size mismatch");
  const int n = a.size();
  QMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Quaternion s;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
QMatrix operator*(double s, QMatrix a) { return a *= s; }

std::vector<Quaternion> operator*(const QMatrix& a, std::span<const Quaternion> v) {
  if (static_cast<int>(v.size()) != a.size()) throw PreconditionError("QMatrix size mismatch");
  std::vector<Quaternion> r(v.size());
  for (int i = 0; i < a.size(); ++i)
    for (int k = 0; k < a.size(); ++k) r[i] += a(i, k) * v[k];
  return r;
}

double max_abs_diff(const QMatrix& a, const QMatrix& b) {
  if (a.size() != b.size()) throw PreconditionError("QMatrix size mismatch");
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) m = std::max(m, max_abs_diff(a(i, j), b(i, j)));
  return m;
}

// ---------------------------------------------------------------------------
// HMatrix

HMatrix HMatrix::from_matrix(const QMatrix& m, double tolerance) {
  const int n = m.size();
  if (n <= 0) throw PreconditionError("hyperhermitian matrix must have positive size");
  const double scale = m.max_abs();
  double violation = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) violation = std::max(violation, abs(m(i, j) - conj(m(j, i))));
  if (violation > tolerance * scale)
    throw PreconditionError("matrix is not hyperhermitian (violation " + std::to_string(violation) +
                            ")");
  QMatrix s(n);
  for (int i = 0; i < n; ++i) {
    s(i, i) = Quaternion(m(i, i).t);
    for (int j = i + 1; j < n; ++j) {
      const Quaternion v = (m(i, j) + conj(m(j, i))) * 0.5;
      s(i, j) = v;
      s(j, i) = conj(v);
    }
  }
  return HMatrix(std::move(s));
}

HMatrix HMatrix::identity(int n) { return HMatrix(QMatrix::identity(n)); }

HMatrix HMatrix::zero(int n) { return HMatrix(QMatrix(n)); }

HMatrix HMatrix::diagonal(std::span<const double> values) {
  QMatrix m(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = Quaternion(values[i]);
  return HMatrix(std::move(m));
}

HMatrix HMatrix::leading_minor(int m) const {
  QMatrix r(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) r(i, j) = m_(i, j);
  return HMatrix(std::move(r));
}

HMatrix& HMatrix::operator+=(const HMatrix& o) {
  m_ += o.m_;
  return *this;
}
HMatrix& HMatrix::operator-=(const HMatrix& o) {
  m_ -= o.m_;
  return *this;
}
HMatrix& HMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

void HMatrix::set(int i, int j, const Quaternion& value) {
  if (i == j) {
    m_(i, i) = Quaternion(value.t);
  } else {
    m_(i, j) = value;
    m_(j, i) = conj(value);
  }
}

HMatrix operator+(HMatrix a, const HMatrix& b) { return a += b; }
HMatrix operator-(HMatrix a, const HMatrix& b) { return a -= b; }
HMatrix operator*(double s, HMatrix a) { return a *= s; }

// ---------------------------------------------------------------------------
// Real embedding

Eigen::MatrixXd real_embedding(const HMatrix& a) {
  const int n = a.size();
  Eigen::MatrixXd m(4 * n, 4 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be)
          m(4 * i + al, 4 * j + be) =
              (conj(Quaternion::unit(al)) * a(i, j) * Quaternion::unit(be)).t;
  return m;
}

HMatrix from_real_form(const Eigen::MatrixXd& m, double* residual) {
  if (m.rows() != m.cols() || m.rows() % 4 != 0)
    throw PreconditionError("real form must be square of size 4n");
  const int n = static_cast<int>(m.rows() / 4);
  QMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Quaternion s;
      for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be)
          s += m(4 * i + al, 4 * j + be) * (Quaternion::unit(al) * conj(Quaternion::unit(be)));
      g(i, j) = s * 0.25;
    }
  HMatrix h = HMatrix::from_matrix(g, 1e-9);
  if (residual) *residual = (real_embedding(h) - m).cwiseAbs().maxCoeff();
  return h;
}

// ---------------------------------------------------------------------------
// Moore determinant

double moore_det(const HMatrix& a) {
  const int n = a.size();
  if (n < 1) throw PreconditionError("moore_det: empty matrix");
  if (n > kMaxMooreSize)
    throw PreconditionError("moore_det: size " + std::to_string(n) + " exceeds " +
                            std::to_string(kMaxMooreSize));
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<char> seen(n);
  std::vector<int> order;  // concatenated cycles, leaders increasing
  std::vector<int> starts;
  order.reserve(n);
  Quaternion sum;
  double scale = 0.0;
  do {
    std::fill(seen.begin(), seen.end(), 0);
    order.clear();
    starts.clear();
    for (int i = 0; i < n; ++i) {
      if (seen[i]) continue;
      starts.push_back(static_cast<int>(order.size()));
      for (int k = i; !seen[k]; k = sigma[k]) {
        seen[k] = 1;
        order.push_back(k);
      }
    }
    const int cycles = static_cast<int>(starts.size());
    starts.push_back(n);
    Quaternion term = Quaternion::one();
    for (int c = cycles - 1; c >= 0; --c) {
      const int b = starts[c];
      const int e = starts[c + 1];
      for (int p = b; p < e; ++p) {
        const int from = order[p];
        const int to = (p + 1 < e) ? order[p + 1] : order[b];
        term = term * a(from, to);
      }
    }
    if ((n - cycles) % 2 != 0) term = -term;
    sum += term;
    scale += abs(term);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  if (sum.imag_norm() > 1e-10 * std::max(scale, 1e-300))
    throw NumericalError("moore_det: imaginary residue " + std::to_string(sum.imag_norm()));
  return sum.t;
}

double moore_det_magnitude_oracle(const HMatrix& a) {
  const Eigen::MatrixXd m = real_embedding(a);
  const double det = m.partialPivLu().determinant();
  const double scale = std::pow(std::max(1.0, m.cwiseAbs().maxCoeff()), m.rows());
  if (det < -1e-9 * scale)
    throw NumericalError("real embedding has negative determinant " + std::to_string(det));
  return std::pow(std::max(det, 0.0), 0.25);
}

// ---------------------------------------------------------------------------
// Mixed discriminant and consequences

double mixed_discriminant(std::span<const HMatrix> as) {
  const int n = static_cast<int>(as.size());
  if (n == 0) throw PreconditionError("mixed_discriminant: no matrices");
  for (const auto& m : as)
    if (m.size() != n)
      throw PreconditionError("mixed_discriminant: need n matrices of size n");
  // n! det(A_1..A_n) = sum over nonempty S of (-1)^{n-|S|} det(sum_{i in S} A_i)
  double total = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    HMatrix s = HMatrix::zero(n);
    int count = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        s += as[i];
        ++count;
      }
    const double d = moore_det(s);
    total += ((n - count) % 2 == 0) ? d : -d;
  }
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  return total / factorial;
}

bool is_positive_definite(const HMatrix& a) {
  for (int m = 1; m <= a.size(); ++m)
    if (!(moore_det(a.leading_minor(m)) > 0.0)) return false;
  return true;
}

double min_embedding_eigenvalue(const HMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_embedding(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double aleksandrov_gap(std::span<const HMatrix> as, const HMatrix& x) {
  const int n = x.size();
  if (n < 2) throw PreconditionError("aleksandrov_gap: n must be at least 2");
  if (static_cast<int>(as.size()) != n - 1)
    throw PreconditionError("aleksandrov_gap: need n-1 matrices");
  for (const auto& m : as) {
    if (m.size() != n) throw PreconditionError("aleksandrov_gap: size mismatch");
    if (!is_positive_definite(m))
      throw PreconditionError("aleksandrov_gap: inputs must be positive definite");
  }
  std::vector<HMatrix> args(as.begin(), as.end());
  args.push_back(x);
  const double ax = mixed_discriminant(args);  // (A_1..A_{n-1}, X)
  args.back() = as[n - 2];
  const double aa = mixed_discriminant(args);  // (A_1..A_{n-1}, A_{n-1})
  args[n - 2] = x;
  args[n - 1] = x;
  const double xx = mixed_discriminant(args);  // (A_1..A_{n-2}, X, X)
  return ax * ax - aa * xx;
}

std::vector<HMatrix> hyperhermitian_basis(int n) {
  std::vector<HMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n) * (2 * n - 1));
  for (int r = 0; r < n; ++r) {
    HMatrix e = HMatrix::zero(n);
    e.set(r, r, Quaternion(1.0));
    basis.push_back(std::move(e));
  }
  for (int r = 0; r < n; ++r)
    for (int s = r + 1; s < n; ++s)
      for (int u = 0; u < 4; ++u) {
        HMatrix e = HMatrix::zero(n);
        e.set(r, s, Quaternion::unit(u));
        basis.push_back(std::move(e));
      }
  return basis;
}

Signature signature_of_B(std::span<const HMatrix> as, int n) {
  if (n < 2) throw PreconditionError("signature_of_B: n must be at least 2");
  if (static_cast<int>(as.size()) != n - 2)
    throw PreconditionError("signature_of_B: need n-2 matrices");
  for (const auto& m : as) {
    if (m.size() != n) throw PreconditionError("signature_of_B: size mismatch");
    if (!is_positive_definite(m))
      throw PreconditionError("signature_of_B: inputs must be positive definite");
  }
  const auto basis = hyperhermitian_basis(n);
  const int dim = static_cast<int>(basis.size());
  std::vector<HMatrix> args(as.begin(), as.end());
  args.push_back(HMatrix::zero(n));
  args.push_back(HMatrix::zero(n));
  Eigen::MatrixXd gram(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b) {
      args[n - 2] = basis[a];
      args[n - 1] = basis[b];
      gram(a, b) = gram(b, a) = mixed_discriminant(args);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double tol = 1e-9 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Signature sig;
  for (int a = 0; a < dim; ++a) {
    if (ev(a) > tol)
      ++sig.pluses;
    else if (ev(a) < -tol)
      ++sig.minuses;
    else
      ++sig.zeros;
  }
  return sig;
}

HMatrix conj_transform(const HMatrix& a, const QMatrix& c) {
  if (a.size() != c.size()) throw PreconditionError("conj_transform: size mismatch");
  return HMatrix::from_matrix(c.adjoint() * a.matrix() * c, 1e-9);
}

// ---------------------------------------------------------------------------
// Diagonalization

namespace {

// Right-multiplies column q of m by d.
void scale_column(QMatrix& m, int q, const Quaternion& d) {
  for (int i = 0; i < m.size(); ++i) m(i, q) = m(i, q) * d;
}

// Left-multiplies row q of m by d.
void scale_row(QMatrix& m, int q, const Quaternion& d) {
  for (int j = 0; j < m.size(); ++j) m(q, j) = d * m(q, j);
}

// Columns (p, q) <- (c p - s q, s p + c q).
void rotate_columns(QMatrix& m, int p, int q, double c, double s) {
  for (int i = 0; i < m.size(); ++i) {
    const Quaternion mp = m(i, p);
    const Quaternion mq = m(i, q);
    m(i, p) = c * mp - s * mq;
    m(i, q) = s * mp + c * mq;
  }
}

void rotate_rows(QMatrix& m, int p, int q, double c, double s) {
  for (int j = 0; j < m.size(); ++j) {
    const Quaternion mp = m(p, j);
    const Quaternion mq = m(q, j);
    m(p, j) = c * mp - s * mq;
    m(q, j) = s * mp + c * mq;
  }
}

}  // namespace

Diagonalization diagonalize(const HMatrix& a) {
  const int n = a.size();
  QMatrix w = a.matrix();
  QMatrix u = QMatrix::identity(n);
  const double norm = std::max(a.max_abs(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, abs(w(p, q)));
    if (off <= 1e-15 * norm) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double r = abs(w(p, q));
        if (r <= 1e-300) continue;
        // Phase: make w(p, q) real and positive.
        const Quaternion d = conj(w(p, q)) / r;
        scale_column(w, q, d);
        scale_row(w, q, conj(d));
        scale_column(u, q, d);
        // Real Jacobi rotation on the (p, q) plane.
        const double app = w(p, p).t;
        const double aqq = w(q, q).t;
        const double theta = 0.5 * std::atan2(2.0 * r, aqq - app);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        rotate_columns(w, p, q, c, s);
        rotate_rows(w, p, q, c, s);
        rotate_columns(u, p, q, c, s);
        w(p, q) = Quaternion();
        w(q, p) = Quaternion();
      }
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int l, int r) { return w(l, l).t > w(r, r).t; });
  Diagonalization out;
  out.basis = QMatrix(n);
  for (int c = 0; c < n; ++c) {
    out.eigenvalues.push_back(w(idx[c], idx[c]).t);
    for (int i = 0; i < n; ++i) out.basis(i, c) = u(i, idx[c]);
  }

  // Each eigenvalue must appear four times in the real embedding.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_embedding(a), Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues().reverse();
  const double gap_tol = 1e-7 * std::max(1.0, norm);
  for (int r = 0; r < n; ++r) {
    const auto group = ev.segment(4 * r, 4);
    if (group.maxCoeff() - group.minCoeff() > gap_tol ||
        std::fabs(group.mean() - out.eigenvalues[r]) > gap_tol)
      throw NumericalError("diagonalize: real-embedding spectrum does not split into quadruples");
  }
  return out;
}

}  // namespace qpsh
