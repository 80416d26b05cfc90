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

#include "vpush/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace vpush {

namespace {

constexpr double kEps = 1e-12;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

double point_polygon_distance(const Vec2& p, const Footprint& poly) {
  if (contains(poly, p)) return 0.0;
  double best = kInf;
  for (std::size_t i = 0; i < 4; ++i) {
    best = std::min(best, point_segment_distance(p, poly.vertices[i],
                                                 poly.vertices[(i + 1) % 4]));
  }
  return best;
}

bool separated_on_axis(const Footprint& a, const Footprint& b, const Vec2& axis) {
  const auto [a0, a1] = project(a, axis);
  const auto [b0, b1] = project(b, axis);
  return a1 < b0 || b1 < a0;
}

bool polygons_overlap(const Footprint& a, const Footprint& b) {
  for (const Footprint* f : {&a, &b}) {
    for (std::size_t i = 0; i < 4; ++i) {
      const Vec2 e = f->vertices[(i + 1) % 4] - f->vertices[i];
      if (separated_on_axis(a, b, Vec2(-e.y(), e.x()))) return false;
    }
  }
  return true;
}

// First contact of a disc of `radius` whose center travels along `dir` with
// the polygon, i.e. a ray cast against the polygon dilated by the radius.
double sweep_disc_polygon(const Vec2& center, double radius, const Footprint& poly,
                          const Vec2& dir) {
  if (point_polygon_distance(center, poly) <= radius) return 0.0;
  double best = kInf;
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2& p = poly.vertices[i];
    const Vec2& q = poly.vertices[(i + 1) % 4];
    const Vec2 e = q - p;
    const Vec2 n = Vec2(e.y(), -e.x()).normalized() * radius;
    if (auto t = ray_segment(center, dir, p + n, q + n)) best = std::min(best, *t);
    if (auto t = ray_circle(center, dir, p, radius)) best = std::min(best, *t);
  }
  return best;
}

}  // namespace

Footprint Footprint::rectangle(const Vec2& center, double half_x, double half_y,
                               double yaw) {
  Footprint f;
  f.kind = Kind::polygon;
  f.center = center;
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const Vec2 ax(c * half_x, s * half_x);
  const Vec2 ay(-s * half_y, c * half_y);
  f.vertices = {center - ax - ay, center + ax - ay, center + ax + ay,
                center - ax + ay};
  f.radius = std::hypot(half_x, half_y);
  return f;
}

Footprint Footprint::disc(const Vec2& center, double radius) {
  Footprint f;
  f.kind = Kind::circle;
  f.center = center;
  f.radius = radius;
  return f;
}

Footprint Footprint::translated(const Vec2& offset) const {
  Footprint f = *this;
  f.center += offset;
  for (auto& v : f.vertices) v += offset;
  return f;
}

bool contains(const Footprint& f, const Vec2& p) {
  if (f.kind == Footprint::Kind::circle) {
    return (p - f.center).squaredNorm() <= f.radius * f.radius;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2& a = f.vertices[i];
    const Vec2& b = f.vertices[(i + 1) % 4];
    if (cross(b - a, p - a) < 0.0) return false;
  }
  return true;
}

std::pair<double, double> project(const Footprint& f, const Vec2& axis) {
  if (f.kind == Footprint::Kind::circle) {
    const double c = f.center.dot(axis);
    const double r = f.radius * axis.norm();
    return {c - r, c + r};
  }
  double lo = kInf;
  double hi = -kInf;
  for (const auto& v : f.vertices) {
    const double d = v.dot(axis);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

double footprint_distance(const Footprint& a, const Footprint& b) {
  using K = Footprint::Kind;
  if (a.kind == K::circle && b.kind == K::circle) {
    return std::max(0.0, (a.center - b.center).norm() - a.radius - b.radius);
  }
  if (a.kind == K::circle) {
    return std::max(0.0, point_polygon_distance(a.center, b) - a.radius);
  }
  if (b.kind == K::circle) {
    return std::max(0.0, point_polygon_distance(b.center, a) - b.radius);
  }
  if (polygons_overlap(a, b)) return 0.0;
  double best = kInf;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      best = std::min(best, point_segment_distance(a.vertices[i], b.vertices[j],
                                                   b.vertices[(j + 1) % 4]));
      best = std::min(best, point_segment_distance(b.vertices[i], a.vertices[j],
                                                   a.vertices[(j + 1) % 4]));
    }
  }
  return best;
}

bool overlaps(const Footprint& a, const Footprint& b) {
  return footprint_distance(a, b) <= 0.0;
}

double sweep_distance(const Footprint& moving, const Footprint& obstacle,
                      const Vec2& dir) {
  using K = Footprint::Kind;
  if (moving.kind == K::circle && obstacle.kind == K::circle) {
    auto t = ray_circle(moving.center, dir, obstacle.center,
                        moving.radius + obstacle.radius);
    return t ? *t : kInf;
  }
  if (moving.kind == K::circle) {
    return sweep_disc_polygon(moving.center, moving.radius, obstacle, dir);
  }
  if (obstacle.kind == K::circle) {
    return sweep_disc_polygon(obstacle.center, obstacle.radius, moving, -dir);
  }
  if (polygons_overlap(moving, obstacle)) return 0.0;
  double best = kInf;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const Vec2& p = obstacle.vertices[j];
      const Vec2& q = obstacle.vertices[(j + 1) % 4];
      if (auto t = ray_segment(moving.vertices[i], dir, p, q)) best = std::min(best, *t);
      const Vec2& r = moving.vertices[j];
      const Vec2& s = moving.vertices[(j + 1) % 4];
      if (auto t = ray_segment(obstacle.vertices[i], -dir, r, s)) best = std::min(best, *t);
    }
  }
  return best;
}

std::optional<double> ray_segment(const Vec2& origin, const Vec2& dir,
                                  const Vec2& p, const Vec2& q) {
  const Vec2 e = q - p;
  const double denom = cross(dir, e);
  if (std::abs(denom) < kEps) return std::nullopt;
  const Vec2 w = p - origin;
  const double t = cross(w, e) / denom;
  const double s = cross(w, dir) / denom;
  if (t < -kEps || s < -kEps || s > 1.0 + kEps) return std::nullopt;
  return std::max(t, 0.0);
}

std::optional<double> ray_circle(const Vec2& origin, const Vec2& dir,
                                 const Vec2& center, double radius) {
  const Vec2 f = origin - center;
  const double c = f.squaredNorm() - radius * radius;
  if (c <= 0.0) return 0.0;
  const double a = dir.squaredNorm();
  const double b = f.dot(dir);
  const double disc = b * b - a * c;
  if (disc < 0.0 || a <= 0.0) return std::nullopt;
  const double t = (-b - std::sqrt(disc)) / a;
  if (t < 0.0) return std::nullopt;
  return t;
}

std::optional<double> ray_aabb(const Vec3& origin, const Vec3& dir,
                               const Vec3& lo, const Vec3& hi) {
  double t_near = -kInf;
  double t_far = kInf;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(dir[k]) < 1e-15) {
      if (origin[k] < lo[k] || origin[k] > hi[k]) return std::nullopt;
      continue;
    }
    const double inv = 1.0 / dir[k];
    double t0 = (lo[k] - origin[k]) * inv;
    double t1 = (hi[k] - origin[k]) * inv;
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (t_far < 0.0) return std::nullopt;
  return std::max(t_near, 0.0);
}

std::optional<double> ray_upright_box(const Vec3& origin, const Vec3& dir,
                                      const Vec3& center, const Vec3& half,
                                      double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const Vec3 p = origin - center;
  const Vec3 lo(c * p.x() + s * p.y(), -s * p.x() + c * p.y(), p.z());
  const Vec3 ld(c * dir.x() + s * dir.y(), -s * dir.x() + c * dir.y(), dir.z());
  return ray_aabb(lo, ld, -half, half);
}

std::optional<double> ray_upright_cylinder(const Vec3& origin, const Vec3& dir,
                                           const Vec2& axis_xy, double radius,
                                           double base_z, double height) {
  // Interval where the ray is inside the slab base_z <= z <= base_z + height.
  double tz0 = -kInf;
  double tz1 = kInf;
  if (std::abs(dir.z()) < 1e-15) {
    if (origin.z() < base_z || origin.z() > base_z + height) return std::nullopt;
  } else {
    tz0 = (base_z - origin.z()) / dir.z();
    tz1 = (base_z + height - origin.z()) / dir.z();
    if (tz0 > tz1) std::swap(tz0, tz1);
  }
  // Interval inside the infinite cylinder.
  const double fx = origin.x() - axis_xy.x();
  const double fy = origin.y() - axis_xy.y();
  const double a = dir.x() * dir.x() + dir.y() * dir.y();
  const double c = fx * fx + fy * fy - radius * radius;
  double tc0 = -kInf;
  double tc1 = kInf;
  if (a < 1e-15) {
    if (c > 0.0) return std::nullopt;
  } else {
    const double b = fx * dir.x() + fy * dir.y();
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    tc0 = (-b - sq) / a;
    tc1 = (-b + sq) / a;
  }
  const double entry = std::max(tz0, tc0);
  const double exit = std::min(tz1, tc1);
  if (entry > exit || exit < 0.0) return std::nullopt;
  return std::max(entry, 0.0);
}

}  // namespace vpush
