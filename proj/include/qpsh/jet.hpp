#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "qpsh/errors.hpp"

namespace qpsh {

/// Second-order forward-mode jet: value, gradient and symmetric Hessian with
/// respect to up to kMaxDim seed directions.
///
/// A jet with dim() == 0 is a constant and combines with jets of any size.
class Jet2 {
 public:
  static constexpr int kMaxDim = 16;
  static constexpr int kPacked = kMaxDim * (kMaxDim + 1) / 2;

  Jet2() = default;
  Jet2(double v) : value_(v) {}  // NOLINT: implicit lift of constants is intended

  static Jet2 variable(double v, int dim, int index) {
    Jet2 j = constant(v, dim);
    j.grad_[index] = 1.0;
    return j;
  }

  static Jet2 constant(double v, int dim) {
    if (dim < 0 || dim > kMaxDim) throw PreconditionError("Jet2: too many seed directions");
    Jet2 j(v);
    j.dim_ = dim;
    return j;
  }

  int dim() const { return dim_; }
  double value() const { return value_; }
  double gradient(int i) const { return grad_[i]; }
  double hessian(int i, int j) const { return hess_[packed(i, j)]; }

  Jet2& operator+=(const Jet2& o) {
    widen(o.dim_);
    value_ += o.value_;
    for (int i = 0; i < o.dim_; ++i) grad_[i] += o.grad_[i];
    for (int k = 0; k < size_of(o.dim_); ++k) hess_[k] += o.hess_[k];
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    widen(o.dim_);
    value_ -= o.value_;
    for (int i = 0; i < o.dim_; ++i) grad_[i] -= o.grad_[i];
    for (int k = 0; k < size_of(o.dim_); ++k) hess_[k] -= o.hess_[k];
    return *this;
  }
  Jet2& operator*=(double s) {
    value_ *= s;
    for (int i = 0; i < dim_; ++i) grad_[i] *= s;
    for (int k = 0; k < size_of(dim_); ++k) hess_[k] *= s;
    return *this;
  }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator-(Jet2 a) { return a *= -1.0; }
  friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
  friend Jet2 operator*(double s, Jet2 a) { return a *= s; }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r = Jet2::constant(a.value_ * b.value_, std::max(a.dim_, b.dim_));
    for (int j = 0; j < r.dim_; ++j) {
      const double ag = a.g(j), bg = b.g(j);
      r.grad_[j] = a.value_ * bg + b.value_ * ag;
      for (int i = 0; i <= j; ++i)
        r.hess_[packed(i, j)] = a.value_ * b.h(i, j) + b.value_ * a.h(i, j) + a.g(i) * bg +
                                ag * b.g(i);
    }
    return r;
  }

  friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
  friend Jet2 operator/(Jet2 a, double s) { return a *= 1.0 / s; }

  /// g(jet) given g, g', g'' at the jet's value.
  Jet2 chain(double g0, double g1, double g2) const {
    Jet2 r = Jet2::constant(g0, dim_);
    for (int j = 0; j < dim_; ++j) {
      r.grad_[j] = g1 * grad_[j];
      for (int i = 0; i <= j; ++i)
        r.hess_[packed(i, j)] = g1 * hess_[packed(i, j)] + g2 * grad_[i] * grad_[j];
    }
    return r;
  }

  friend Jet2 reciprocal(const Jet2& a) {
    const double v = a.value_;
    return a.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
  }
  friend Jet2 sqrt(const Jet2& a) {
    const double s = std::sqrt(a.value_);
    return a.chain(s, 0.5 / s, -0.25 / (s * a.value_));
  }
  friend Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.value_);
    return a.chain(e, e, e);
  }
  friend Jet2 log(const Jet2& a) {
    const double v = a.value_;
    return a.chain(std::log(v), 1.0 / v, -1.0 / (v * v));
  }
  friend Jet2 sin(const Jet2& a) {
    const double s = std::sin(a.value_), c = std::cos(a.value_);
    return a.chain(s, c, -s);
  }
  friend Jet2 cos(const Jet2& a) {
    const double s = std::sin(a.value_), c = std::cos(a.value_);
    return a.chain(c, -s, -c);
  }
  friend Jet2 pow(const Jet2& a, int k) {
    if (k == 0) return Jet2::constant(1.0, a.dim_);
    const double v = a.value_;
    return a.chain(std::pow(v, k), k * std::pow(v, k - 1), k * (k - 1) * std::pow(v, k - 2));
  }

 private:
  static constexpr int packed(int i, int j) {
    return i <= j ? j * (j + 1) / 2 + i : i * (i + 1) / 2 + j;
  }
  static constexpr int size_of(int dim) { return dim * (dim + 1) / 2; }

  double g(int i) const { return i < dim_ ? grad_[i] : 0.0; }
  double h(int i, int j) const { return (i < dim_ && j < dim_) ? hess_[packed(i, j)] : 0.0; }

  void widen(int d) {
    if (d > dim_) dim_ = d;
  }

  double value_ = 0.0;
  int dim_ = 0;
  std::array<double, kMaxDim> grad_{};
  std::array<double, kPacked> hess_{};
};

}  // namespace qpsh
