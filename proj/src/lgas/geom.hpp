#pragma once

#include <cmath>
#include <limits>
#include <optional>

namespace lgas {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  bool operator==(const Vec3& o) const {
    return x == o.x && y == o.y && z == o.z;
  }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  Vec3 normalized() const { return *this / norm(); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative discriminant tolerance for ray-sphere tests: grazing hits with
// impact parameter within ~1e-6 of the radius count as no intersection.
// (Relative, so it stays meaningful for the very small radii of deep
// Boltzmann-Grad rows.)
constexpr double kTangencyTol = 1e-12;

// First crossing of |origin + t*dir - centre| = r along a unit-speed ray.
// Returns the entry parameter, or nothing if the ray misses / only grazes /
// enters behind the origin. A ray starting inside the sphere reports entry 0.
inline std::optional<double> ray_sphere_entry(const Vec3& origin,
                                              const Vec3& dir,
                                              const Vec3& centre, double r) {
  const Vec3 m = centre - origin;
  const double proj = dir.dot(m);
  const double disc = proj * proj - (m.norm2() - r * r);
  if (disc < kTangencyTol * r * r) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double t_in = proj - sq;
  const double t_out = proj + sq;
  if (t_out <= 0.0) return std::nullopt;
  return t_in > 0.0 ? t_in : 0.0;
}

// Distance from a point to the closed segment [a,b], and the parameter in
// [0,1] of the closest point.
struct SegDist {
  double dist;
  double param;
};

inline SegDist point_segment_distance(const Vec3& p, const Vec3& a,
                                      const Vec3& b) {
  const Vec3 d = b - a;
  const double len2 = d.norm2();
  double t = 0.0;
  if (len2 > 0.0) {
    t = (p - a).dot(d) / len2;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
  }
  return {(p - (a + d * t)).norm(), t};
}

// Squared distance from a point to an axis-aligned box.
inline double point_box_dist2(const Vec3& p, const Vec3& lo, const Vec3& hi) {
  auto axis = [](double v, double l, double h) {
    if (v < l) return l - v;
    if (v > h) return v - h;
    return 0.0;
  };
  const double dx = axis(p.x, lo.x, hi.x);
  const double dy = axis(p.y, lo.y, hi.y);
  const double dz = axis(p.z, lo.z, hi.z);
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace lgas
