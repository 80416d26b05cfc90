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

#ifndef VPUSH_SENSOR_HPP
#define VPUSH_SENSOR_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "vpush/geometry.hpp"
#include "vpush/scene.hpp"

namespace vpush {

/// Camera pose in the shelf frame. Roll is fixed at zero. Positive pitch
/// looks up, positive yaw turns toward +y.
struct CameraPose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  Vec3 position() const { return {x, y, z}; }
  bool operator==(const CameraPose&) const = default;
};

/// Closed box of admissible camera positions plus angle limits.
struct Workspace {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  double pitch_min = 0.0;
  double pitch_max = 0.0;
  double yaw_min = 0.0;
  double yaw_max = 0.0;

  /// Region in front of the shelf reaching 5 cm inside the opening.
  static Workspace for_shelf(const ShelfSpec& shelf);
  bool nonempty() const;
  CameraPose center() const;
};

struct CameraIntrinsics {
  int width = 320;
  int height = 240;
  double vertical_fov = deg2rad(58.0);
  double min_range = 0.07;
  double max_range = 1.0;

  bool valid() const;
  double focal_px() const { return 0.5 * height / std::tan(0.5 * vertical_fov); }
};

/// Row-major range image; pixels without a return hold kNoReturn.
struct DepthImage {
  static constexpr double kNoReturn = std::numeric_limits<double>::infinity();

  int width = 0;
  int height = 0;
  std::vector<double> range;

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), range(static_cast<std::size_t>(w * h), kNoReturn) {}

  double at(int u, int v) const { return range[static_cast<std::size_t>(v * width + u)]; }
  double& at(int u, int v) { return range[static_cast<std::size_t>(v * width + u)]; }
  static bool has_return(double r) { return std::isfinite(r); }
};

/// Orthonormal camera basis in the shelf frame.
struct CameraFrame {
  Vec3 origin;
  Vec3 forward;
  Vec3 right;
  Vec3 up;
};

CameraFrame camera_frame(const CameraPose& pose);

/// Unit ray through the center of pixel (u, v); v grows downward.
Vec3 pixel_direction(const CameraFrame& frame, const CameraIntrinsics& intr,
                     double u, double v);

/// Unit rays of every pixel, row-major. The renderer uses exactly these.
std::vector<Vec3> pixel_rays(const CameraFrame& frame, const CameraIntrinsics& intr);

bool pose_valid(const CameraPose& pose, const Workspace& ws);

/// First-hit ray queries against the shelf structure and all objects.
class SceneRaycaster {
 public:
  explicit SceneRaycaster(const SceneState& scene);

  /// Distance to the first surface along unit `dir`, kInf when none.
  double first_hit(const Vec3& origin, const Vec3& dir) const;

  /// Same, but only objects whose bit is set in `object_mask` are tested;
  /// the shelf structure is always tested.
  double first_hit(const Vec3& origin, const Vec3& dir, std::uint64_t object_mask) const;

  /// Renders a full image. Objects are culled per pixel by the screen
  /// rectangle of their bounding sphere.
  DepthImage render(const CameraPose& pose, const CameraIntrinsics& intr) const;

  std::size_t object_count() const { return solids_.size() - shelf_solid_count_; }

  /// True when the ray passes through the bounding sphere of object `k`.
  bool may_hit_object(std::size_t k, const Vec3& origin, const Vec3& dir) const;

 private:
  struct Solid {
    enum class Kind { aabb, box, cylinder } kind;
    Vec3 a;  // aabb: lo; box: center; cylinder: (x, y, base_z)
    Vec3 b;  // aabb: hi; box: half extents; cylinder: (radius, height, -)
    double cos_yaw = 1.0;
    double sin_yaw = 0.0;
    Vec3 bound_center = Vec3::Zero();
    double bound_radius2 = kInf;
  };
  std::vector<Solid> solids_;  // shelf solids first, then one per object
  std::size_t shelf_solid_count_ = 0;
};

/// Axis-aligned solids making up the shelf: board, back panel, side walls
/// and top panel.
std::vector<std::pair<Vec3, Vec3>> shelf_solids(const ShelfSpec& shelf);

/// Ray-casts every pixel against the scene. Returns below `min_range` and
/// beyond `max_range` are dropped. Throws Error when the pose lies outside
/// the workspace.
DepthImage render_depth(const SceneState& scene, const CameraPose& pose,
                        const CameraIntrinsics& intr, const Workspace& ws);

/// Back-projects every pixel with a return into the shelf frame.
std::vector<Vec3> depth_to_pointcloud(const DepthImage& img, const CameraPose& pose,
                                      const CameraIntrinsics& intr);

}  // namespace vpush

#endif  // VPUSH_SENSOR_HPP
