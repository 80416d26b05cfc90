// Copyright 2026 The vpush Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VPUSH_GEOMETRY_HPP
#define VPUSH_GEOMETRY_HPP

#include <array>
#include <limits>
#include <optional>
#include <utility>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace vpush {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double deg2rad(double deg) { return deg * kPi / 180.0; }

/// Convex footprint of an upright primitive on the board plane.
/// Polygons are stored counter-clockwise.
struct Footprint {
  enum class Kind { polygon, circle };

  Kind kind = Kind::circle;
  std::array<Vec2, 4> vertices{};
  Vec2 center = Vec2::Zero();
  double radius = 0.0;

  static Footprint rectangle(const Vec2& center, double half_x, double half_y,
                             double yaw);
  static Footprint disc(const Vec2& center, double radius);

  Footprint translated(const Vec2& offset) const;
};

bool contains(const Footprint& f, const Vec2& p);

/// Smallest Euclidean distance between two footprints, 0 when they touch
/// or overlap.
double footprint_distance(const Footprint& a, const Footprint& b);

bool overlaps(const Footprint& a, const Footprint& b);

/// Interval of the footprint projected onto `axis` (need not be unit).
std::pair<double, double> project(const Footprint& f, const Vec2& axis);

/// Distance `moving` can translate along unit `dir` before touching
/// `obstacle`. kInf when the swept region never meets it; 0 when already in
/// contact or overlapping.
double sweep_distance(const Footprint& moving, const Footprint& obstacle,
                      const Vec2& dir);

/// Ray parameter of the first hit with segment [p, q], or nullopt.
std::optional<double> ray_segment(const Vec2& origin, const Vec2& dir,
                                  const Vec2& p, const Vec2& q);

/// Smallest non-negative ray parameter at which the ray is inside the circle.
std::optional<double> ray_circle(const Vec2& origin, const Vec2& dir,
                                 const Vec2& center, double radius);

// 3D ray queries used by the depth renderer. All return the entry distance
// along a unit direction, 0 if the origin is inside the solid.

std::optional<double> ray_aabb(const Vec3& origin, const Vec3& dir,
                               const Vec3& lo, const Vec3& hi);

/// Upright box of half extents `half` centered at `center`, rotated by `yaw`
/// about +z.
std::optional<double> ray_upright_box(const Vec3& origin, const Vec3& dir,
                                      const Vec3& center, const Vec3& half,
                                      double yaw);

/// Upright cylinder standing on z = base_z.
std::optional<double> ray_upright_cylinder(const Vec3& origin, const Vec3& dir,
                                           const Vec2& axis_xy, double radius,
                                           double base_z, double height);

}  // namespace vpush

#endif  // VPUSH_GEOMETRY_HPP
