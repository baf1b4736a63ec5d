#pragma once

#include <cmath>

namespace vlc {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3 a, Vec3 b) = default;
};

// Summation order is fixed so that reflected or axis-swapped displacements
// produce bit-identical squared norms.
inline double squared_norm(Vec3 v) { return (v.x * v.x + v.y * v.y) + v.z * v.z; }

inline double norm(Vec3 v) { return std::sqrt(squared_norm(v)); }

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace vlc
