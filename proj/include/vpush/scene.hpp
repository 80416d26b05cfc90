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

#ifndef VPUSH_SCENE_HPP
#define VPUSH_SCENE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vpush/geometry.hpp"

namespace vpush {

/// Thrown when a precondition of a public operation is violated.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shelf frame: x points from the open front (x = 0) to the back panel
/// (x = depth), y spans the width from the right wall (y = 0) to the left
/// wall (y = width) as seen from the front, z is up. All extents are
/// interior dimensions in meters.
struct ShelfSpec {
  double depth = 0.40;
  double width = 0.80;
  double height = 0.40;
  double wall_thickness = 0.02;
  double board_height = 0.0;  ///< z of the board surface

  bool valid() const;
  double top_z() const { return board_height + height; }
  bool footprint_contains(const Footprint& f, double clearance = 0.0) const;
  bool operator==(const ShelfSpec&) const = default;
};

enum class Shape { box, cylinder };
enum class MassClass { light, heavy };

/// Upright primitive resting on the board. For boxes `dims` is
/// (dx, dy, dz); for cylinders it is (radius, height, unused).
struct ObjectPrimitive {
  int id = 0;
  Shape shape = Shape::box;
  Vec3 dims = Vec3::Zero();
  Vec2 position = Vec2::Zero();
  double yaw = 0.0;
  MassClass mass = MassClass::light;

  double height() const { return shape == Shape::box ? dims.z() : dims.y(); }
  Footprint footprint() const;
  bool operator==(const ObjectPrimitive&) const = default;
};

struct SceneState {
  ShelfSpec shelf;
  std::vector<ObjectPrimitive> objects;
  std::uint64_t seed = 0;

  const ObjectPrimitive* find(int id) const;
  bool operator==(const SceneState&) const = default;
};

/// Ranges the procedural sampler draws object sizes from.
struct SceneSamplerConfig {
  double box_edge_min = 0.04;
  double box_edge_max = 0.15;
  double cylinder_radius_min = 0.02;
  double cylinder_radius_max = 0.05;
  double cylinder_height_min = 0.08;
  double cylinder_height_max = 0.25;
  double box_probability = 0.5;
  double clearance = 0.005;  ///< minimum gap to walls and other objects
  int max_attempts_per_object = 10000;
};

/// Rejection-samples `n_objects` non-overlapping primitives inside the shelf.
/// Pure function of its arguments. Throws Error when the shelf is too crowded.
SceneState sample_scene(std::uint64_t seed, int n_objects, const ShelfSpec& shelf,
                        const SceneSamplerConfig& config = {});

struct DisplacementReport {
  std::map<int, double> per_object;  ///< ids present in both scenes
  std::vector<int> dropped;          ///< ids missing from `after`
  double mean = 0.0;                 ///< over per_object, 0 if empty
  double total = 0.0;
};

/// Center-point displacement between two configurations of the same objects.
/// Objects missing from `after` are reported as dropped and excluded from the
/// mean. Throws Error when `after` holds an id that `before` lacks.
DisplacementReport displacement(const SceneState& before, const SceneState& after);

void to_json(nlohmann::json& j, const ShelfSpec& s);
void from_json(const nlohmann::json& j, ShelfSpec& s);
void to_json(nlohmann::json& j, const ObjectPrimitive& o);
void from_json(const nlohmann::json& j, ObjectPrimitive& o);
void to_json(nlohmann::json& j, const SceneState& s);
void from_json(const nlohmann::json& j, SceneState& s);

}  // namespace vpush

#endif  // VPUSH_SCENE_HPP
