#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qpsh/hmatrix.hpp"
#include "qpsh/polynomial.hpp"

namespace qpsh {

// Differential forms on flat H^n with polynomial coefficients.
//
// Real coordinates of variable r are (t, x, y, z) at indices 4r..4r+3. The
// complex structure I is right multiplication by i, for which
//
//   w_{2r} = t + x i,   w_{2r+1} = y - z i
//
// are holomorphic coordinates (q = w_{2r} + conj(w_{2r+1}) j). A basis
// covector is a "symbol": 0..2n-1 stand for dw_a, 2n..4n-1 for dwbar_a. A
// basis form is a set of symbols wedged in increasing order, stored as a
// bitmask.

/// Action of J on basis covectors:
///   J dw_{2r} = c1 dwbar_{2r+1},  J dw_{2r+1} = c2 dwbar_{2r},
/// extended to conjugates by reality of J.
struct JTable {
  int c1 = -1;
  int c2 = 1;
  bool operator==(const JTable&) const = default;
};

/// The table in use. Of the four sign choices only this one makes
/// del del_J f real in the sense conj(J w) = w and satisfies
/// t(del del_J f) = hessian(f) / 4; see j_table_checks.
inline constexpr JTable kJTable{-1, 1};

class Form {
 public:
  using Mask = std::uint32_t;
  static constexpr int kMaxN = 4;

  explicit Form(int n);
  /// The 0-form f (f has 4n variables).
  static Form function(const ComplexPolynomial& f);
  static Form function(const RealPolynomial& f);
  /// coef * s_1 ^ s_2 ^ ... in the given order.
  static Form monomial(int n, std::span<const int> symbols, const ComplexPolynomial& coef);

  int n() const { return n_; }
  int nvars() const { return 4 * n_; }
  const std::map<Mask, ComplexPolynomial>& terms() const { return terms_; }
  void add(Mask basis, const ComplexPolynomial& coef);

  /// (p, q) if every term has that type; throws otherwise (or if empty,
  /// returns `fallback`).
  std::pair<int, int> bidegree(std::pair<int, int> fallback = {0, 0}) const;
  bool is_pure() const;
  /// Part of type (p, q).
  Form component(int p, int q) const;
  /// Largest coefficient magnitude over all terms.
  double max_abs_coeff() const;
  bool is_zero(double tol = 0.0) const { return max_abs_coeff() <= tol; }

  /// Value on real tangent vectors (as many as the degree) at a point.
  std::complex<double> evaluate(std::span<const double> point,
                                std::span<const std::vector<double>> vectors) const;
  /// Pointwise coefficients as constants.
  Form at(std::span<const double> point) const;

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(std::complex<double> c, const Form& f);

  static int symbol_count(int n) { return 4 * n; }
  int holomorphic(int a) const { return a; }
  int antiholomorphic(int a) const { return 2 * n_ + a; }

 private:
  int n_;
  std::map<Mask, ComplexPolynomial> terms_;
};

Form conj(const Form& f);
Form wedge(const Form& a, const Form& b);
/// Holomorphic exterior derivative (p, q) -> (p + 1, q).
Form del(const Form& f);
/// (p, q) -> (p, q + 1).
Form delbar(const Form& f);
/// Pointwise action of J on every covector factor; (p, q) -> (q, p).
Form J_act(const Form& f, JTable table = kJTable);
/// J^{-1} = (-1)^k J on k-forms.
Form J_inverse(const Form& f, JTable table = kJTable);
/// J^{-1} delbar J.
Form del_J(const Form& f, JTable table = kJTable);
/// del del_J f for a real potential.
Form ddj(const RealPolynomial& f, JTable table = kJTable);

/// conj(J w) == w coefficient-wise within tol (for (2k, 0)-forms).
bool is_real_form(const Form& w, JTable table = kJTable, double tol = 1e-12);
double reality_defect(const Form& w, JTable table = kJTable);

/// w(Y, Y j) >= -tol for every sample point and vector.
bool is_nonneg(const Form& w, std::span<const std::vector<double>> points,
               std::span<const std::vector<double>> vectors, double tol = 1e-10);

/// Real 4n x 4n matrix of X -> X u (right multiplication of every component).
Eigen::MatrixXd right_unit_matrix(int n, int unit);

struct TMapResult {
  HMatrix g;
  /// For B(X, Y) = eta(X, Y j): max of |Re B - Re B^T|, |Im B + Im B^T| and
  /// the hyperhermitian residual of Re B, relative to max |B|. g is built
  /// from the symmetric real part.
  double asymmetry = 0.0;
};

/// Hyperhermitian matrix of the quadratic form A -> eta(A, A j) at a point.
/// Throws NumericalError if the asymmetry exceeds 1e-9.
TMapResult t_map(const Form& eta, std::span<const double> point, JTable table = kJTable);

struct HktReport {
  bool metric_positive = false;   ///< t(del del_J f) positive definite at all samples
  bool omega_is_20 = false;       ///< Omega has type (2, 0)
  bool d_omega_zero = false;      ///< del Omega = 0 coefficient-wise
  double max_d_omega = 0.0;
  bool passed(bool strict) const { return omega_is_20 && d_omega_zero && (!strict || metric_positive); }
};

/// Omega = omega_J - i omega_K for g = t(del del_J f), omega_L(X, Y) = g(X L, Y),
/// assembled symbolically from the polynomial coefficients of g.
Form hkt_omega(const RealPolynomial& f, JTable table = kJTable);
HktReport hkt_flat_check(const RealPolynomial& f, std::span<const std::vector<double>> samples,
                         JTable table = kJTable);

struct JTableCheck {
  JTable table;
  bool involution = false;   ///< J^2 = -1 on 1-forms
  bool reality = false;      ///< del del_J f real for all test f
  double quarter_deviation = 0.0;  ///< max |t(del del_J f) - hess f / 4| (inf if t fails)
  bool selected() const { return involution && reality && quarter_deviation <= 1e-10; }
};

/// Evaluates all four sign tables on the given potentials and points.
std::vector<JTableCheck> j_table_checks(std::span<const RealPolynomial> potentials,
                                        std::span<const std::vector<double>> points);

}  // namespace qpsh
