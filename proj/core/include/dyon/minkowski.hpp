#ifndef DYON_MINKOWSKI_HPP
#define DYON_MINKOWSKI_HPP

#include <array>
#include <cmath>

#include "dyon/vec3.hpp"

namespace dyon {

/// Flat metric with signature (+,-,-,-) in Galilean coordinates.
/// Diagonal, determinant -1; raising an index twice is the identity.
struct Metric {
  static constexpr double diag(int i) { return i == 0 ? 1.0 : -1.0; }
  static constexpr double g(int i, int k) { return i == k ? diag(i) : 0.0; }
  static constexpr double determinant() { return -1.0; }
};

/// Contravariant four-component quantity. Component 0 is the time-like slot
/// (ct, gamma*c, rho*c, ... depending on role), components 1..3 are spatial.
struct FourVector {
  std::array<double, 4> v{0.0, 0.0, 0.0, 0.0};

  FourVector() = default;
  constexpr FourVector(double a0, double a1, double a2, double a3) : v{a0, a1, a2, a3} {}
  constexpr FourVector(double a0, const Vec3& s) : v{a0, s.x, s.y, s.z} {}

  constexpr double& operator[](int i) { return v[i]; }
  constexpr double operator[](int i) const { return v[i]; }

  constexpr double time() const { return v[0]; }
  constexpr Vec3 spatial() const { return {v[1], v[2], v[3]}; }

  friend constexpr FourVector operator+(const FourVector& a, const FourVector& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
  }
  friend constexpr FourVector operator-(const FourVector& a, const FourVector& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
  }
  friend constexpr FourVector operator*(double s, const FourVector& a) {
    return {s * a[0], s * a[1], s * a[2], s * a[3]};
  }
  friend constexpr bool operator==(const FourVector&, const FourVector&) = default;
};

/// Flip the variance of all components: v_i = g_ik v^k (and conversely).
/// Named explicitly; no operation here raises or lowers implicitly.
constexpr FourVector lower_index(const FourVector& v) {
  return {v[0], -v[1], -v[2], -v[3]};
}
constexpr FourVector raise_index(const FourVector& v) {
  return {v[0], -v[1], -v[2], -v[3]};
}

/// Metric contraction a^i b_i of two contravariant vectors.
constexpr double minkowski_dot(const FourVector& a, const FourVector& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

/// Contraction of a contravariant with an already-covariant vector.
constexpr double contract(const FourVector& upper, const FourVector& lower) {
  return upper[0] * lower[0] + upper[1] * lower[1] + upper[2] * lower[2] + upper[3] * lower[3];
}

inline double norm_inf(const FourVector& a) {
  return std::max({std::fabs(a[0]), std::fabs(a[1]), std::fabs(a[2]), std::fabs(a[3])});
}

/// Pure boost with velocity `beta` = v/c acting on contravariant components.
inline FourVector boost(const FourVector& a, const Vec3& beta) {
  const double b2 = dot(beta, beta);
  if (b2 == 0.0) return a;
  const double gamma = 1.0 / std::sqrt(1.0 - b2);
  const Vec3 r = a.spatial();
  const double rpar = dot(r, beta) / std::sqrt(b2);
  const Vec3 n = beta / std::sqrt(b2);
  const double t = gamma * (a[0] - std::sqrt(b2) * rpar);
  const double rpar_new = gamma * (rpar - std::sqrt(b2) * a[0]);
  const Vec3 rperp = r - rpar * n;
  const Vec3 rnew = rperp + rpar_new * n;
  return {t, rnew};
}

/// Four-velocity (gamma*c, gamma*v) of a particle moving at `v`, |v| < c.
inline FourVector four_velocity(const Vec3& v, double c) {
  const double gamma = 1.0 / std::sqrt(1.0 - dot(v, v) / (c * c));
  return {gamma * c, gamma * v};
}

}  // namespace dyon

#endif
