#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qpsh/errors.hpp"
#include "qpsh/quaternion.hpp"

namespace qpsh {

namespace detail {
inline double coeff_abs(double c) { return std::fabs(c); }
inline double coeff_abs(const std::complex<double>& c) { return std::abs(c); }
inline double coeff_abs(const Quaternion& c) { return abs(c); }
}  // namespace detail

/// Sparse polynomial in real variables x_0..x_{m-1} with coefficients in C
/// (double, std::complex<double> or Quaternion).
///
/// The variables are real and commute with everything; only coefficient
/// products can be non-commutative, and they keep the operand order. With
/// dyadic-rational coefficients all operations below are exact in double.
template <class C>
class BasicPolynomial {
 public:
  using Exponent = std::vector<std::uint8_t>;
  using TermMap = std::map<Exponent, C>;

  explicit BasicPolynomial(int nvars = 0) : nvars_(nvars) {}

  static BasicPolynomial constant(int nvars, const C& c) {
    BasicPolynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }

  /// c * x_v.
  static BasicPolynomial variable(int nvars, int v, const C& c = C(1.0)) {
    Exponent e(nvars, 0);
    e.at(v) = 1;
    BasicPolynomial p(nvars);
    p.add_term(e, c);
    return p;
  }

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }

  void add_term(const Exponent& e, const C& c) {
    if (static_cast<int>(e.size()) != nvars_)
      throw PreconditionError("polynomial exponent has wrong length");
    if (c == C{}) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == C{}) terms_.erase(it);
    }
  }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (auto k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  bool empty() const { return terms_.empty(); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, detail::coeff_abs(c));
    return m;
  }

  /// Evaluates at real coordinates; T may be double or a differentiable scalar
  /// such as Jet2, in which case C must be double.
  template <class T>
  auto evaluate(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != nvars_)
      throw PreconditionError("polynomial evaluated at a point of wrong dimension");
    using R = decltype(C{} * T{});
    const int deg = degree();
    std::vector<std::vector<T>> powers(nvars_);
    for (int v = 0; v < nvars_; ++v) {
      powers[v].reserve(deg + 1);
      powers[v].push_back(T(1.0));
      for (int k = 1; k <= deg; ++k) powers[v].push_back(powers[v].back() * x[v]);
    }
    R sum{};
    for (const auto& [e, c] : terms_) {
      T mono(1.0);
      for (int v = 0; v < nvars_; ++v)
        if (e[v] != 0) mono = mono * powers[v][e[v]];
      sum = sum + c * mono;
    }
    return sum;
  }

  C operator()(std::span<const double> x) const { return evaluate<double>(x); }

  BasicPolynomial derivative(int v) const {
    BasicPolynomial d(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[v] == 0) continue;
      Exponent f = e;
      f[v] -= 1;
      d.add_term(f, c * static_cast<double>(e[v]));
    }
    return d;
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator-(const BasicPolynomial& a) {
    BasicPolynomial r(a.nvars_);
    for (const auto& [e, c] : a.terms_) r.add_term(e, -c);
    return r;
  }

  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    a.check_compatible(b);
    BasicPolynomial r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(ea);
        for (int v = 0; v < a.nvars_; ++v) e[v] = static_cast<std::uint8_t>(e[v] + eb[v]);
        r.add_term(e, ca * cb);
      }
    return r;
  }

  /// c * p (coefficient multiplied on the left).
  friend BasicPolynomial operator*(const C& c, const BasicPolynomial& p) {
    BasicPolynomial r(p.nvars_);
    for (const auto& [e, d] : p.terms_) r.add_term(e, c * d);
    return r;
  }
  /// p * c (coefficient multiplied on the right).
  friend BasicPolynomial operator*(const BasicPolynomial& p, const C& c) {
    BasicPolynomial r(p.nvars_);
    for (const auto& [e, d] : p.terms_) r.add_term(e, d * c);
    return r;
  }

  /// Substitutes x_v = sum_w m(v, w) y_w; the result has m.cols() variables.
  BasicPolynomial compose_linear(const Eigen::MatrixXd& m) const {
    if (m.rows() != nvars_) throw PreconditionError("compose_linear: dimension mismatch");
    const int out = static_cast<int>(m.cols());
    std::vector<BasicPolynomial<double>> images;
    for (int v = 0; v < nvars_; ++v) {
      BasicPolynomial<double> l(out);
      for (int w = 0; w < out; ++w)
        if (m(v, w) != 0.0) l += BasicPolynomial<double>::variable(out, w, m(v, w));
      images.push_back(std::move(l));
    }
    BasicPolynomial r(out);
    for (const auto& [e, c] : terms_) {
      BasicPolynomial<double> mono = BasicPolynomial<double>::constant(out, 1.0);
      for (int v = 0; v < nvars_; ++v)
        for (int k = 0; k < e[v]; ++k) mono = mono * images[v];
      for (const auto& [f, d] : mono.terms()) r.add_term(f, c * d);
    }
    return r;
  }

  /// Applies `fn` to every coefficient.
  template <class D, class Fn>
  BasicPolynomial<D> map_coefficients(Fn fn) const {
    BasicPolynomial<D> r(nvars_);
    for (const auto& [e, c] : terms_) r.add_term(e, fn(c));
    return r;
  }

  bool operator==(const BasicPolynomial&) const = default;

 private:
  void check_compatible(const BasicPolynomial& o) const {
    if (o.nvars_ != nvars_) throw PreconditionError("polynomials over different variable counts");
  }

  int nvars_ = 0;
  TermMap terms_;
};

using RealPolynomial = BasicPolynomial<double>;
using ComplexPolynomial = BasicPolynomial<std::complex<double>>;
using QPolynomial = BasicPolynomial<Quaternion>;

/// Component a (0..3 for t, x, y, z) of a quaternionic polynomial.
inline RealPolynomial component(const QPolynomial& p, int a) {
  return p.map_coefficients<double>([a](const Quaternion& q) { return q[a]; });
}

inline QPolynomial to_quaternionic(const RealPolynomial& p) {
  return p.map_coefficients<Quaternion>([](double c) { return Quaternion(c); });
}

inline bool is_real_valued(const QPolynomial& p) {
  for (const auto& [e, c] : p.terms())
    if (c.x != 0.0 || c.y != 0.0 || c.z != 0.0) return false;
  return true;
}

}  // namespace qpsh
