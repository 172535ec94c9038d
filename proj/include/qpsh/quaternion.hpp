#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <stdexcept>

namespace qpsh {

/// Element q = t + x i + y j + z k of the quaternion algebra.
///
/// Components are stored in (t, x, y, z) order; every serializer in the
/// library uses the same order.
struct Quaternion {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double t_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
      : t(t_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  /// Basis unit e_a for a = 0..3, i.e. (1, i, j, k).
  static constexpr Quaternion unit(int a) {
    Quaternion u;
    u[a] = 1.0;
    return u;
  }

  constexpr double& operator[](int a) {
    switch (a) {
      case 0: return t;
      case 1: return x;
      case 2: return y;
      default: return z;
    }
  }
  constexpr double operator[](int a) const {
    switch (a) {
      case 0: return t;
      case 1: return x;
      case 2: return y;
      default: return z;
    }
  }

  constexpr std::array<double, 4> components() const { return {t, x, y, z}; }
  constexpr double real() const { return t; }

  /// Magnitude of the i, j, k part.
  double imag_norm() const { return std::sqrt(x * x + y * y + z * z); }

  constexpr bool operator==(const Quaternion&) const = default;

  constexpr Quaternion operator-() const { return {-t, -x, -y, -z}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    t += o.t;
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    t -= o.t;
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    t *= s;
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

/// Hamilton product; i^2 = j^2 = k^2 = -1, ij = k, jk = i, ki = j.
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.t * q.t - p.x * q.x - p.y * q.y - p.z * q.z,
          p.t * q.x + p.x * q.t + p.y * q.z - p.z * q.y,
          p.t * q.y - p.x * q.z + p.y * q.t + p.z * q.x,
          p.t * q.z + p.x * q.y - p.y * q.x + p.z * q.t};
}

constexpr Quaternion& operator*=(Quaternion& p, const Quaternion& q) { return p = p * q; }

constexpr Quaternion conj(const Quaternion& q) { return {q.t, -q.x, -q.y, -q.z}; }

constexpr double norm_sq(const Quaternion& q) {
  return q.t * q.t + q.x * q.x + q.y * q.y + q.z * q.z;
}

inline double abs(const Quaternion& q) { return std::sqrt(norm_sq(q)); }

/// Throws std::domain_error for the zero quaternion.
inline Quaternion inverse(const Quaternion& q) {
  const double n2 = norm_sq(q);
  if (n2 == 0.0) throw std::domain_error("inverse of the zero quaternion");
  return conj(q) / n2;
}

/// Real inner product of the underlying R^4 vectors, Re(conj(p) q).
constexpr double dot(const Quaternion& p, const Quaternion& q) {
  return p.t * q.t + p.x * q.x + p.y * q.y + p.z * q.z;
}

inline double max_abs_diff(const Quaternion& a, const Quaternion& b) {
  return std::fmax(std::fmax(std::fabs(a.t - b.t), std::fabs(a.x - b.x)),
                   std::fmax(std::fabs(a.y - b.y), std::fabs(a.z - b.z)));
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

}  // namespace qpsh
