#pragma once

#include <cmath>

namespace dqnav {

// NED frame throughout: x north/forward, y east, z down. Altitude above
// ground is negative z.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
};

inline double deg_to_rad(double deg) { return deg * (M_PI / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / M_PI); }

}  // namespace dqnav
