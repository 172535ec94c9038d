#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "qpsh/errors.hpp"
#include "qpsh/hmatrix.hpp"
#include "qpsh/sampling.hpp"

using namespace qpsh;

namespace {

HMatrix make2(double a, const Quaternion& q, double b) {
  HMatrix m = HMatrix::zero(2);
  m.set(0, 0, Quaternion(a));
  m.set(1, 1, Quaternion(b));
  m.set(0, 1, q);
  return m;
}

// Classical determinant of a complex hermitian matrix (entries with zero j, k).
double complex_det(const HMatrix& a) {
  const int n = a.size();
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {a(i, j).t, a(i, j).x};
  return m.determinant().real();
}

// Oracle for the mixed discriminant: fit every degree-n monomial of
// lambda -> det(sum lambda_i A_i) by least squares and read off the
// lambda_1...lambda_n coefficient.
double mixed_discriminant_by_fit(const std::vector<HMatrix>& as, Rng& rng) {
  const int n = static_cast<int>(as.size());
  std::vector<std::vector<int>> monomials;
  std::vector<int> e(n, 0);
  // enumerate exponent vectors with |e| = n
  std::function<void(int, int)> rec = [&](int v, int left) {
    if (v == n - 1) {
      e[v] = left;
      monomials.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[v] = k;
      rec(v + 1, left - k);
    }
  };
  rec(0, n);
  const int rows = 4 * static_cast<int>(monomials.size());
  Eigen::MatrixXd design(rows, monomials.size());
  Eigen::VectorXd rhs(rows);
  for (int r = 0; r < rows; ++r) {
    std::vector<double> lam(n);
    for (auto& l : lam) l = rng.uniform(-1.0, 1.0);
    HMatrix s = HMatrix::zero(n);
    for (int i = 0; i < n; ++i) s += lam[i] * as[i];
    rhs(r) = moore_det(s);
    for (std::size_t m = 0; m < monomials.size(); ++m) {
      double v = 1.0;
      for (int i = 0; i < n; ++i) v *= std::pow(lam[i], monomials[m][i]);
      design(r, m) = v;
    }
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  for (std::size_t m = 0; m < monomials.size(); ++m)
    if (std::all_of(monomials[m].begin(), monomials[m].end(), [](int k) { return k == 1; })) {
      double fact = 1.0;
      for (int i = 2; i <= n; ++i) fact *= i;
      return coef(m) / fact;
    }
  return NAN;
}

}  // namespace

TEST_CASE("real embedding") {
  CHECK(real_embedding(HMatrix::identity(1)).isApprox(Eigen::MatrixXd::Identity(4, 4)));
  const std::vector<double> two{2.0};
  CHECK(real_embedding(HMatrix::diagonal(two)).isApprox(2.0 * Eigen::MatrixXd::Identity(4, 4)));

  const HMatrix a = make2(0.0, Quaternion::j(), 0.0);
  const Eigen::MatrixXd r = real_embedding(a);
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(moore_det(a) == -1.0);
  CHECK(r.determinant() == doctest::Approx(std::pow(moore_det(a), 4)));

  // Quadratic form agrees with Re sum conj(x_i) a_ij x_j.
  Rng rng(3);
  for (int s = 0; s < 20; ++s) {
    const int n = 1 + s % 3;
    const HMatrix h = random_hyperhermitian(rng, n);
    const Eigen::MatrixXd m = real_embedding(h);
    std::vector<Quaternion> x(n);
    Eigen::VectorXd xr(4 * n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.quaternion(-1, 1);
      for (int c = 0; c < 4; ++c) xr(4 * i + c) = x[i][c];
    }
    Quaternion form;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) form += conj(x[i]) * h(i, j) * x[j];
    CHECK(std::fabs(form.imag_norm()) < 1e-12);
    CHECK(xr.dot(m * xr) == doctest::Approx(form.t).epsilon(1e-12));
    double residual = 1.0;
    const HMatrix back = from_real_form(m, &residual);
    CHECK(residual < 1e-12);
    CHECK(max_abs_diff(back.matrix(), h.matrix()) < 1e-12);
  }
}

TEST_CASE("moore_det examples") {
  const std::vector<double> d{1.0, 2.0, 3.0};
  CHECK(moore_det(HMatrix::diagonal(d)) == 6.0);
  CHECK(moore_det(make2(1.0, Quaternion::j(), 2.0)) == 1.0);
  for (int n = 1; n <= kMaxMooreSize; ++n) CHECK(moore_det(HMatrix::identity(n)) == 1.0);
  CHECK(moore_det(make2(2.0, Quaternion::i(), 2.0)) == 3.0);
  // 2x2 closed form ab - |q|^2
  CHECK(moore_det(make2(3.0, Quaternion(1, 2, -1, 1), -2.0)) == -6.0 - 7.0);
}

TEST_CASE("moore_det rejects bad input") {
  QMatrix m(2);
  m(0, 1) = Quaternion::j();
  m(1, 0) = Quaternion::j();  // should be -j
  CHECK_THROWS_AS(HMatrix::from_matrix(m), PreconditionError);
  CHECK_THROWS_AS(moore_det(HMatrix::identity(kMaxMooreSize + 1)), PreconditionError);
}

TEST_CASE("from_matrix symmetrizes tiny violations") {
  QMatrix m(2);
  m(0, 0) = Quaternion(1.0, 1e-14, 0, 0);
  m(0, 1) = Quaternion(0, 0, 1, 0);
  m(1, 0) = Quaternion(1e-14, 0, -1, 0);
  m(1, 1) = Quaternion(2.0);
  const HMatrix h = HMatrix::from_matrix(m);
  CHECK(h(0, 0) == Quaternion(1.0));
  CHECK(h(1, 0) == conj(h(0, 1)));
}

TEST_CASE("magnitude oracle") {
  CHECK(moore_det_magnitude_oracle(HMatrix::identity(3)) == doctest::Approx(1.0));
  const std::vector<double> d{1.0, 2.0};
  CHECK(real_embedding(HMatrix::diagonal(d)).determinant() == doctest::Approx(16.0));
  CHECK(moore_det_magnitude_oracle(HMatrix::diagonal(d)) == doctest::Approx(2.0));
  const std::vector<double> m1{-1.0};
  CHECK(moore_det(HMatrix::diagonal(m1)) == -1.0);
  CHECK(moore_det_magnitude_oracle(HMatrix::diagonal(m1)) == doctest::Approx(1.0));
}

TEST_CASE("moore_det fourth power matches the real embedding determinant") {
  Rng rng(2024);
  for (int s = 0; s < 200; ++s) {
    const int n = 1 + s % 4;
    const HMatrix a = random_integer_hyperhermitian(rng, n, -3, 3);
    const double p = moore_det(a);
    const double r = real_embedding(a).partialPivLu().determinant();
    CHECK(std::fabs(std::pow(p, 4) - r) <= 1e-8 * std::max(1.0, std::fabs(r)));
    // integer coefficients: integer entries give an integer determinant
    CHECK(p == std::round(p));
  }
}

TEST_CASE("complex hermitian matrices: Moore equals classical determinant") {
  Rng rng(99);
  for (int s = 0; s < 100; ++s) {
    const int n = 1 + s % 4;
    HMatrix a = HMatrix::zero(n);
    for (int i = 0; i < n; ++i) {
      a.set(i, i, Quaternion(rng.uniform(-2, 2)));
      for (int j = i + 1; j < n; ++j) a.set(i, j, Quaternion(rng.uniform(-2, 2), rng.uniform(-2, 2)));
    }
    const double c = complex_det(a);
    CHECK(moore_det(a) == doctest::Approx(c).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("det(C* A C) = det(A) det(C* C)") {
  const std::vector<double> d{1.0, 2.0};
  const HMatrix a = HMatrix::diagonal(d);
  QMatrix c = QMatrix::identity(2);
  CHECK(max_abs_diff(conj_transform(a, c).matrix(), a.matrix()) == 0.0);
  c(1, 0) = Quaternion::j();
  const HMatrix t = conj_transform(a, c);
  const HMatrix cc = conj_transform(HMatrix::identity(2), c);
  CHECK(max_abs_diff(cc.matrix(), c.adjoint() * c) == 0.0);
  CHECK(moore_det(t) == doctest::Approx(moore_det(a) * moore_det(cc)));

  Rng rng(5);
  for (int s = 0; s < 100; ++s) {
    const int n = 2 + s % 2;
    const HMatrix h = random_hyperhermitian(rng, n);
    const QMatrix m = random_qmatrix(rng, n);
    const double lhs = moore_det(conj_transform(h, m));
    const double rhs = moore_det(h) * moore_det(conj_transform(HMatrix::identity(n), m));
    const double scale = std::max(1.0, std::fabs(rhs));
    CHECK(std::fabs(lhs - rhs) <= 1e-9 * scale);
  }
}

TEST_CASE("mixed discriminant") {
  Rng rng(17);
  const HMatrix a = random_hyperhermitian(rng, 3);
  const std::vector<HMatrix> same(3, a);
  CHECK(mixed_discriminant(same) == doctest::Approx(moore_det(a)));
  const std::vector<HMatrix> ids(4, HMatrix::identity(4));
  CHECK(mixed_discriminant(ids) == doctest::Approx(1.0));
  const std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0};
  const std::vector<HMatrix> diag{HMatrix::diagonal(e1), HMatrix::diagonal(e2)};
  CHECK(mixed_discriminant(diag) == 0.5);

  const std::vector<HMatrix> bad{HMatrix::identity(2), HMatrix::identity(3)};
  CHECK_THROWS_AS(mixed_discriminant(bad), PreconditionError);
}

TEST_CASE("mixed discriminant agrees with coefficient fitting") {
  Rng rng(23);
  for (int s = 0; s < 15; ++s) {
    const int n = 1 + s % 3;
    std::vector<HMatrix> as;
    for (int i = 0; i < n; ++i) as.push_back(random_hyperhermitian(rng, n));
    const double fit = mixed_discriminant_by_fit(as, rng);
    CHECK(mixed_discriminant(as) == doctest::Approx(fit).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("mixed discriminant symmetry, linearity, positivity") {
  Rng rng(31);
  for (int s = 0; s < 20; ++s) {
    const int n = 2 + s % 2;
    std::vector<HMatrix> as;
    for (int i = 0; i < n; ++i) as.push_back(random_hyperhermitian(rng, n));
    const double base = mixed_discriminant(as);
    std::vector<HMatrix> perm = as;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    while (std::next_permutation(order.begin(), order.end())) {
      for (int i = 0; i < n; ++i) perm[i] = as[order[i]];
      CHECK(mixed_discriminant(perm) == doctest::Approx(base).epsilon(1e-12).scale(1.0));
    }
    const HMatrix other = random_hyperhermitian(rng, n);
    const double lam = rng.uniform(-2, 2), mu = rng.uniform(-2, 2);
    std::vector<HMatrix> a1 = as, a2 = as, a3 = as;
    a2[0] = other;
    a3[0] = lam * as[0] + mu * other;
    const double lin = lam * mixed_discriminant(a1) + mu * mixed_discriminant(a2);
    CHECK(mixed_discriminant(a3) == doctest::Approx(lin).epsilon(1e-12).scale(1.0));

    std::vector<HMatrix> pd;
    for (int i = 0; i < n; ++i) pd.push_back(random_positive_definite(rng, n, 0.0));
    CHECK(mixed_discriminant(pd) >= -1e-10);
  }
}

TEST_CASE("Sylvester criterion") {
  CHECK(is_positive_definite(HMatrix::identity(3)));
  CHECK(is_positive_definite(make2(1.0, Quaternion::j(), 2.0)));
  CHECK_FALSE(is_positive_definite(make2(1.0, 2.0 * Quaternion::j(), 1.0)));
  CHECK(moore_det(make2(1.0, 2.0 * Quaternion::j(), 1.0)) == -3.0);

  Rng rng(41);
  for (int s = 0; s < 200; ++s) {
    const int n = 1 + s % 4;
    HMatrix a = random_hyperhermitian(rng, n);
    if (s % 3 == 0) {
      // near-singular: shift so the smallest eigenvalue sits at +-1e-6
      const double lam = diagonalize(a).eigenvalues.back();
      const double target = (s % 2 == 0) ? 1e-6 : -1e-6;
      a += (target - lam) * HMatrix::identity(n);
    }
    CHECK(is_positive_definite(a) == (min_embedding_eigenvalue(a) > 0.0));
  }
}

TEST_CASE("Aleksandrov inequality") {
  Rng rng(53);
  const std::vector<HMatrix> as{random_positive_definite(rng, 3), random_positive_definite(rng, 3)};
  CHECK(std::fabs(aleksandrov_gap(as, as[1])) <= 1e-9);
  CHECK(std::fabs(aleksandrov_gap(as, 3.0 * as[1])) <= 1e-9 * 9.0);
  for (int s = 0; s < 100; ++s) {
    const std::vector<HMatrix> a{random_positive_definite(rng, 3), random_positive_definite(rng, 3)};
    const HMatrix x = random_hyperhermitian(rng, 3);
    const double scale = std::max(1.0, std::pow(mixed_discriminant(std::vector<HMatrix>{a[0], a[1], x}), 2));
    CHECK(aleksandrov_gap(a, x) >= -1e-9 * scale);
  }
  const std::vector<HMatrix> not_pd{HMatrix::identity(3), -1.0 * HMatrix::identity(3)};
  CHECK_THROWS_AS(aleksandrov_gap(not_pd, HMatrix::identity(3)), PreconditionError);
}

TEST_CASE("signature of B") {
  CHECK(hyperhermitian_basis(3).size() == 15);
  CHECK(signature_of_B({}, 2) == Signature{1, 5, 0});
  const std::vector<HMatrix> id{HMatrix::identity(3)};
  CHECK(signature_of_B(id, 3) == Signature{1, 14, 0});
  const std::vector<HMatrix> two{HMatrix::identity(2), HMatrix::identity(2)};
  CHECK(mixed_discriminant(two) == 1.0);
  Rng rng(61);
  for (int s = 0; s < 20; ++s) {
    const int n = 2 + s % 2;
    std::vector<HMatrix> a;
    for (int i = 0; i < n - 2; ++i) a.push_back(random_positive_definite(rng, n));
    CHECK(signature_of_B(a, n) == Signature{1, n * (2 * n - 1) - 1, 0});
  }
}

TEST_CASE("diagonalize") {
  const std::vector<double> d{5.0, 1.0};
  const auto r = diagonalize(HMatrix::diagonal(d));
  CHECK(r.eigenvalues == std::vector<double>{5.0, 1.0});
  CHECK(max_abs_diff(r.basis, QMatrix::identity(2)) == 0.0);

  const auto s = diagonalize(make2(1.0, Quaternion::j(), 1.0));
  CHECK(s.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(std::fabs(s.eigenvalues[1]) < 1e-14);

  Rng rng(73);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + t % 5;
    const HMatrix a = random_hyperhermitian(rng, n);
    const auto dz = diagonalize(a);
    CHECK(std::is_sorted(dz.eigenvalues.rbegin(), dz.eigenvalues.rend()));
    CHECK(max_abs_diff(dz.basis.adjoint() * dz.basis, QMatrix::identity(n)) < 1e-12);
    QMatrix lam(n);
    double prod = 1.0;
    for (int i = 0; i < n; ++i) {
      lam(i, i) = Quaternion(dz.eigenvalues[i]);
      prod *= dz.eigenvalues[i];
    }
    CHECK(max_abs_diff(dz.basis * lam * dz.basis.adjoint(), a.matrix()) < 1e-12);
    CHECK(moore_det(a) == doctest::Approx(prod).epsilon(1e-10).scale(1.0));
  }
}
