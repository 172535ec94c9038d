#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qpsh/quaternion.hpp"

namespace qpsh {

/// Dense square quaternionic matrix, row-major.
class QMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

  static QMatrix identity(int n);

  int size() const { return n_; }

  Quaternion& operator()(int i, int j) { return data_[index(i, j)]; }
  const Quaternion& operator()(int i, int j) const { return data_[index(i, j)]; }

  /// Conjugate transpose.
  QMatrix adjoint() const;

  /// Largest entry magnitude.
  double max_abs() const;

  QMatrix& operator+=(const QMatrix& o);
  QMatrix& operator-=(const QMatrix& o);
  QMatrix& operator*=(double s);

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_ = 0;
  std::vector<Quaternion> data_;
};

QMatrix operator*(const QMatrix& a, const QMatrix& b);
QMatrix operator+(QMatrix a, const QMatrix& b);
QMatrix operator-(QMatrix a, const QMatrix& b);
QMatrix operator*(double s, QMatrix a);
/// Matrix-vector product with the vector as a column of quaternions.
std::vector<Quaternion> operator*(const QMatrix& a, std::span<const Quaternion> v);

/// Hyperhermitian matrix: a_ij = conj(a_ji).
///
/// Instances are always exactly hyperhermitian; construction from a general
/// matrix validates the relation and then averages the two triangles.
class HMatrix {
 public:
  /// Relative tolerance accepted by from_matrix before symmetrization.
  static constexpr double kValidationTolerance = 1e-12;

  HMatrix() = default;

  /// Throws PreconditionError when max |a_ij - conj(a_ji)| exceeds
  /// tolerance * max |a|.
  static HMatrix from_matrix(const QMatrix& m, double tolerance = kValidationTolerance);
  static HMatrix identity(int n);
  static HMatrix zero(int n);
  static HMatrix diagonal(std::span<const double> values);

  int size() const { return m_.size(); }
  const Quaternion& operator()(int i, int j) const { return m_(i, j); }
  const QMatrix& matrix() const { return m_; }

  /// Upper-left m x m block.
  HMatrix leading_minor(int m) const;

  double max_abs() const { return m_.max_abs(); }

  HMatrix& operator+=(const HMatrix& o);
  HMatrix& operator-=(const HMatrix& o);
  HMatrix& operator*=(double s);

  /// Writes a_ij and conj into a_ji; diagonal entries keep only their real part.
  void set(int i, int j, const Quaternion& value);

 private:
  explicit HMatrix(QMatrix m) : m_(std::move(m)) {}
  QMatrix m_;
};

HMatrix operator+(HMatrix a, const HMatrix& b);
HMatrix operator-(HMatrix a, const HMatrix& b);
HMatrix operator*(double s, HMatrix a);

/// Symmetric 4n x 4n matrix of the real quadratic form Re sum conj(x_i) a_ij x_j
/// on R^{4n}; coordinates of x_i are ordered (t, x, y, z).
Eigen::MatrixXd real_embedding(const HMatrix& a);

/// Inverse of real_embedding on its image: the hyperhermitian matrix G whose
/// real embedding is the SU(2)-average of `m`. `residual` (if non-null)
/// receives max |real_embedding(G) - m|.
HMatrix from_real_form(const Eigen::MatrixXd& m, double* residual = nullptr);

/// Largest size accepted by the permutation formula.
inline constexpr int kMaxMooreSize = 8;

/// Moore determinant by the cycle-ordered permutation sum.
///
/// Each permutation is split into cycles led by their smallest element; the
/// cycles are multiplied with leaders in decreasing order. The imaginary part
/// of the sum must vanish to 1e-10 of the summed term magnitudes, otherwise a
/// NumericalError is raised.
double moore_det(const HMatrix& a);

/// |moore_det(a)| recovered as det(real_embedding(a))^(1/4). The sign is lost;
/// this is a cross-check only.
double moore_det_magnitude_oracle(const HMatrix& a);

/// Mixed discriminant det(A_1, ..., A_n) by inclusion-exclusion polarization
/// of the Moore determinant.
double mixed_discriminant(std::span<const HMatrix> as);

/// Sylvester criterion: every leading principal Moore minor is positive.
bool is_positive_definite(const HMatrix& a);

/// Smallest eigenvalue of the real embedding.
double min_embedding_eigenvalue(const HMatrix& a);

/// det(A_1..A_{n-1}, X)^2 - det(A_1..A_{n-1}, A_{n-1}) det(A_1..A_{n-2}, X, X).
/// Requires n - 1 positive definite matrices of size n.
double aleksandrov_gap(std::span<const HMatrix> as, const HMatrix& x);

struct Signature {
  int pluses = 0;
  int minuses = 0;
  int zeros = 0;
  bool operator==(const Signature&) const = default;
};

/// Real basis of the n(2n-1)-dimensional space of hyperhermitian n x n
/// matrices: E_rr, then for r < s the four matrices with u in {1, i, j, k} at
/// (r, s) and conj(u) at (s, r).
std::vector<HMatrix> hyperhermitian_basis(int n);

/// Signature of B(X, Y) = det(X, Y, A_1, ..., A_{n-2}) on hyperhermitian n x n
/// matrices. `as` holds n - 2 positive definite matrices.
Signature signature_of_B(std::span<const HMatrix> as, int n);

/// C* A C.
HMatrix conj_transform(const HMatrix& a, const QMatrix& c);

struct Diagonalization {
  std::vector<double> eigenvalues;  // descending
  QMatrix basis;                    // columns are orthonormal eigenvectors
};

/// A = U diag(lambda) U* with U quaternionic unitary, by a quaternionic
/// Jacobi iteration. The spectrum is cross-checked against the real embedding,
/// where every eigenvalue must occur exactly four times.
Diagonalization diagonalize(const HMatrix& a);

/// max |a_ij - b_ij| over components.
double max_abs_diff(const QMatrix& a, const QMatrix& b);

}  // namespace qpsh
