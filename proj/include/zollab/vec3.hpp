#pragma once

#include <array>
#include <cmath>

namespace zollab {

// Plain ambient 3-vector. Points on the unit sphere and their tangent
// vectors both use this type.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) noexcept {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) noexcept {
    x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) noexcept {
    x *= s; y *= s; z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) noexcept { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) noexcept { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) noexcept { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
  friend constexpr Vec3 operator/(const Vec3& a, double s) noexcept {
    return {a.x / s, a.y / s, a.z / s};
  }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) noexcept {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) noexcept { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(const Vec3& a) noexcept { return a / norm(a); }

inline double distance(const Vec3& a, const Vec3& b) noexcept { return norm(a - b); }

// Component of v orthogonal to the unit vector p.
constexpr Vec3 project_tangent(const Vec3& p, const Vec3& v) noexcept {
  return v - dot(p, v) * p;
}

// Great-circle angle between unit vectors, accurate for tiny and
// near-antipodal separations.
inline double arc_angle(const Vec3& a, const Vec3& b) noexcept {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

// Orthonormal pair spanning the plane orthogonal to the unit vector n.
// Deterministic in n.
inline std::array<Vec3, 2> orthonormal_frame(const Vec3& n) noexcept {
  const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
  Vec3 ref{0.0, 0.0, 1.0};
  if (ax <= ay && ax <= az) {
    ref = {1.0, 0.0, 0.0};
  } else if (ay <= az) {
    ref = {0.0, 1.0, 0.0};
  }
  const Vec3 e1 = normalized(cross(ref, n));
  const Vec3 e2 = cross(n, e1);
  return {e1, e2};
}

// Spherical linear interpolation between unit vectors.
inline Vec3 slerp(const Vec3& a, const Vec3& b, double t) noexcept {
  const double angle = arc_angle(a, b);
  if (angle < 1e-9) {
    return normalized(a + t * (b - a));
  }
  const double s = std::sin(angle);
  return normalized(std::sin((1.0 - t) * angle) / s * a + std::sin(t * angle) / s * b);
}

// Rotation about the z-axis.
inline Vec3 rotate_z(const Vec3& v, double angle) noexcept {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

// Rodrigues rotation about a unit axis.
inline Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) noexcept {
  const double c = std::cos(angle), s = std::sin(angle);
  return c * v + s * cross(axis, v) + (1.0 - c) * dot(axis, v) * axis;
}

}  // namespace zollab
