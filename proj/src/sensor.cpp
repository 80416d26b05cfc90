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

#include "vpush/sensor.hpp"

#include <algorithm>

namespace vpush {

Workspace Workspace::for_shelf(const ShelfSpec& shelf) {
  Workspace ws;
  ws.lo = Vec3(-0.45, -0.10, shelf.board_height);
  ws.hi = Vec3(0.05, shelf.width + 0.10, shelf.top_z() + 0.10);
  ws.pitch_min = deg2rad(-45.0);
  ws.pitch_max = deg2rad(30.0);
  ws.yaw_min = deg2rad(-60.0);
  ws.yaw_max = deg2rad(60.0);
  return ws;
}

bool Workspace::nonempty() const {
  return (lo.array() <= hi.array()).all() && pitch_min <= pitch_max &&
         yaw_min <= yaw_max;
}

CameraPose Workspace::center() const {
  const Vec3 c = 0.5 * (lo + hi);
  return {c.x(), c.y(), c.z(), 0.5 * (pitch_min + pitch_max), 0.5 * (yaw_min + yaw_max)};
}

bool CameraIntrinsics::valid() const {
  return width > 0 && height > 0 && vertical_fov > 0.0 && vertical_fov < kPi &&
         min_range >= 0.0 && min_range < max_range;
}

CameraFrame camera_frame(const CameraPose& pose) {
  const double cp = std::cos(pose.pitch);
  const double sp = std::sin(pose.pitch);
  const double cy = std::cos(pose.yaw);
  const double sy = std::sin(pose.yaw);
  CameraFrame f;
  f.origin = pose.position();
  f.forward = Vec3(cp * cy, cp * sy, sp);
  f.right = Vec3(sy, -cy, 0.0);
  f.up = f.right.cross(f.forward);
  return f;
}

Vec3 pixel_direction(const CameraFrame& frame, const CameraIntrinsics& intr,
                     double u, double v) {
  const double f = intr.focal_px();
  const double px = (u + 0.5 - 0.5 * intr.width) / f;
  const double py = (v + 0.5 - 0.5 * intr.height) / f;
  return (frame.forward + px * frame.right - py * frame.up).normalized();
}

std::vector<Vec3> pixel_rays(const CameraFrame& frame, const CameraIntrinsics& intr) {
  const double f = intr.focal_px();
  std::vector<Vec3> rays;
  rays.reserve(static_cast<std::size_t>(intr.width * intr.height));
  for (int v = 0; v < intr.height; ++v) {
    const double py = (v + 0.5 - 0.5 * intr.height) / f;
    const Vec3 row = frame.forward - py * frame.up;
    for (int u = 0; u < intr.width; ++u) {
      const double px = (u + 0.5 - 0.5 * intr.width) / f;
      rays.emplace_back((row + px * frame.right).normalized());
    }
  }
  return rays;
}

bool pose_valid(const CameraPose& pose, const Workspace& ws) {
  const Vec3 p = pose.position();
  return (p.array() >= ws.lo.array()).all() && (p.array() <= ws.hi.array()).all() &&
         pose.pitch >= ws.pitch_min && pose.pitch <= ws.pitch_max &&
         pose.yaw >= ws.yaw_min && pose.yaw <= ws.yaw_max;
}

std::vector<std::pair<Vec3, Vec3>> shelf_solids(const ShelfSpec& s) {
  const double t = s.wall_thickness;
  const double b = s.board_height;
  const double top = s.top_z();
  return {
      {Vec3(0.0, -t, b - t), Vec3(s.depth, s.width + t, b)},                  // board
      {Vec3(s.depth, -t, b - t), Vec3(s.depth + t, s.width + t, top + t)},    // back
      {Vec3(0.0, -t, b - t), Vec3(s.depth, 0.0, top + t)},                    // right
      {Vec3(0.0, s.width, b - t), Vec3(s.depth, s.width + t, top + t)},       // left
      {Vec3(0.0, -t, top), Vec3(s.depth, s.width + t, top + t)},              // top
  };
}

SceneRaycaster::SceneRaycaster(const SceneState& scene) {
  for (const auto& [lo, hi] : shelf_solids(scene.shelf)) {
    solids_.push_back({Solid::Kind::aabb, lo, hi});
  }
  shelf_solid_count_ = solids_.size();
  const double b = scene.shelf.board_height;
  for (const auto& o : scene.objects) {
    Solid s;
    if (o.shape == Shape::box) {
      s = {Solid::Kind::box, Vec3(o.position.x(), o.position.y(), b + 0.5 * o.dims.z()),
           0.5 * o.dims, std::cos(o.yaw), std::sin(o.yaw)};
      s.bound_radius2 = s.b.squaredNorm();
    } else {
      s = {Solid::Kind::cylinder, Vec3(o.position.x(), o.position.y(), b),
           Vec3(o.dims.x(), o.dims.y(), 0.0)};
      s.bound_radius2 = o.dims.x() * o.dims.x() + 0.25 * o.dims.y() * o.dims.y();
    }
    s.bound_center = Vec3(o.position.x(), o.position.y(), b + 0.5 * o.height());
    // Slack so rays grazing the bounding sphere still reach the exact test.
    s.bound_radius2 *= 1.0 + 1e-9;
    solids_.push_back(s);
  }
}

namespace {

// Slab test with a precomputed reciprocal direction; every component of the
// direction must be nonzero.
inline double slab_entry(const Vec3& origin, const Vec3& inv, const Vec3& lo,
                         const Vec3& hi) {
  double t_near = 0.0;
  double t_far = kInf;
  for (int k = 0; k < 3; ++k) {
    const double t0 = (lo[k] - origin[k]) * inv[k];
    const double t1 = (hi[k] - origin[k]) * inv[k];
    t_near = std::max(t_near, std::min(t0, t1));
    t_far = std::min(t_far, std::max(t0, t1));
  }
  return t_near <= t_far ? t_near : kInf;
}

}  // namespace

double SceneRaycaster::first_hit(const Vec3& origin, const Vec3& dir) const {
  return first_hit(origin, dir, ~std::uint64_t{0});
}

double SceneRaycaster::first_hit(const Vec3& origin, const Vec3& dir,
                                 std::uint64_t object_mask) const {
  double best = kInf;
  const bool fast = (dir.array().abs() > 1e-12).all();
  const Vec3 inv = fast ? Vec3(1.0 / dir.x(), 1.0 / dir.y(), 1.0 / dir.z()) : Vec3::Zero();
  for (std::size_t i = 0; i < solids_.size(); ++i) {
    const Solid& s = solids_[i];
    if (s.kind == Solid::Kind::aabb) {
      if (fast) {
        best = std::min(best, slab_entry(origin, inv, s.a, s.b));
      } else if (auto t = ray_aabb(origin, dir, s.a, s.b)) {
        best = std::min(best, *t);
      }
      continue;
    }
    const std::size_t bit = i - shelf_solid_count_;
    if (bit < 64 && !((object_mask >> bit) & 1U)) continue;
    const Vec3 v = s.bound_center - origin;
    const double along = v.dot(dir);
    if (v.squaredNorm() - along * along > s.bound_radius2) continue;
    if (along > best + std::sqrt(s.bound_radius2)) continue;
    std::optional<double> t;
    if (s.kind == Solid::Kind::box) {
      const Vec3 p = origin - s.a;
      const double c = s.cos_yaw;
      const double n = s.sin_yaw;
      t = ray_aabb(Vec3(c * p.x() + n * p.y(), -n * p.x() + c * p.y(), p.z()),
                   Vec3(c * dir.x() + n * dir.y(), -n * dir.x() + c * dir.y(), dir.z()),
                   -s.b, s.b);
    } else {
      t = ray_upright_cylinder(origin, dir, s.a.head<2>(), s.b.x(), s.a.z(), s.b.y());
    }
    if (t && *t < best) best = *t;
  }
  return best;
}

bool SceneRaycaster::may_hit_object(std::size_t k, const Vec3& origin,
                                    const Vec3& dir) const {
  const Solid& s = solids_[shelf_solid_count_ + k];
  const Vec3 v = s.bound_center - origin;
  const double along = v.dot(dir);
  return v.squaredNorm() - along * along <= s.bound_radius2 &&
         along >= -std::sqrt(s.bound_radius2);
}

DepthImage SceneRaycaster::render(const CameraPose& pose, const CameraIntrinsics& intr) const {
  const CameraFrame frame = camera_frame(pose);
  const double f = intr.focal_px();
  const int w = intr.width;
  const int h = intr.height;

  // Conservative pixel rectangle of each object's bounding sphere.
  struct Rect {
    int u0, u1, v0, v1;
  };
  const std::size_t n_obj = object_count();
  std::vector<Rect> rects(n_obj, Rect{0, w - 1, 0, h - 1});
  for (std::size_t k = 0; k < n_obj; ++k) {
    const Solid& s = solids_[shelf_solid_count_ + k];
    const double r = std::sqrt(s.bound_radius2);
    const Vec3 d = s.bound_center - frame.origin;
    const double zc = d.dot(frame.forward);
    if (zc - r <= 1e-6) continue;
    const double xc = d.dot(frame.right);
    const double yc = d.dot(frame.up);
    const double z_lo = zc - r;
    const double z_hi = zc + r;
    const double x_min = std::min((xc - r) / z_lo, (xc - r) / z_hi);
    const double x_max = std::max((xc + r) / z_lo, (xc + r) / z_hi);
    const double y_min = std::min((yc - r) / z_lo, (yc - r) / z_hi);
    const double y_max = std::max((yc + r) / z_lo, (yc + r) / z_hi);
    auto to_u = [&](double x) { return f * x + 0.5 * w - 0.5; };
    auto to_v = [&](double y) { return -f * y + 0.5 * h - 0.5; };
    rects[k] = {static_cast<int>(std::floor(to_u(x_min))) - 1,
                static_cast<int>(std::ceil(to_u(x_max))) + 1,
                static_cast<int>(std::floor(to_v(y_max))) - 1,
                static_cast<int>(std::ceil(to_v(y_min))) + 1};
  }

  const std::vector<Vec3> rays = pixel_rays(frame, intr);
  DepthImage img(w, h);
  for (int v = 0; v < h; ++v) {
    std::uint64_t row_mask = 0;
    for (std::size_t k = 0; k < n_obj && k < 64; ++k) {
      if (v >= rects[k].v0 && v <= rects[k].v1) row_mask |= std::uint64_t{1} << k;
    }
    for (int u = 0; u < w; ++u) {
      std::uint64_t mask = n_obj > 64 ? ~std::uint64_t{0} : 0;
      for (std::uint64_t m = row_mask; m != 0; m &= m - 1) {
        const int k = __builtin_ctzll(m);
        if (u >= rects[static_cast<std::size_t>(k)].u0 && u <= rects[static_cast<std::size_t>(k)].u1) {
          mask |= std::uint64_t{1} << k;
        }
      }
      const double t = first_hit(frame.origin, rays[static_cast<std::size_t>(v * w + u)], mask);
      if (t >= intr.min_range && t <= intr.max_range) img.at(u, v) = t;
    }
  }
  return img;
}

DepthImage render_depth(const SceneState& scene, const CameraPose& pose,
                        const CameraIntrinsics& intr, const Workspace& ws) {
  if (!pose_valid(pose, ws)) throw Error("render_depth: pose outside workspace");
  if (!intr.valid()) throw Error("render_depth: invalid intrinsics");
  return SceneRaycaster(scene).render(pose, intr);
}

std::vector<Vec3> depth_to_pointcloud(const DepthImage& img, const CameraPose& pose,
                                      const CameraIntrinsics& intr) {
  const CameraFrame frame = camera_frame(pose);
  CameraIntrinsics image_intr = intr;
  image_intr.width = img.width;
  image_intr.height = img.height;
  const std::vector<Vec3> rays = pixel_rays(frame, image_intr);
  std::vector<Vec3> cloud;
  cloud.reserve(img.range.size());
  for (std::size_t p = 0; p < img.range.size(); ++p) {
    const double r = img.range[p];
    if (DepthImage::has_return(r)) cloud.emplace_back(frame.origin + r * rays[p]);
  }
  return cloud;
}

}  // namespace vpush
