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

#include "vpush/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace vpush {

bool ShelfSpec::valid() const {
  return depth > 0.0 && width > 0.0 && height > 0.0 && wall_thickness > 0.0 &&
         std::isfinite(board_height);
}

bool ShelfSpec::footprint_contains(const Footprint& f, double clearance) const {
  const auto [x0, x1] = project(f, Vec2::UnitX());
  const auto [y0, y1] = project(f, Vec2::UnitY());
  return x0 > clearance && x1 < depth - clearance && y0 > clearance &&
         y1 < width - clearance;
}

Footprint ObjectPrimitive::footprint() const {
  if (shape == Shape::box) {
    return Footprint::rectangle(position, 0.5 * dims.x(), 0.5 * dims.y(), yaw);
  }
  return Footprint::disc(position, dims.x());
}

const ObjectPrimitive* SceneState::find(int id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

SceneState sample_scene(std::uint64_t seed, int n_objects, const ShelfSpec& shelf,
                        const SceneSamplerConfig& config) {
  if (n_objects < 1) throw Error("sample_scene: n_objects must be >= 1");
  if (!shelf.valid()) throw Error("sample_scene: invalid shelf");

  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  SceneState scene;
  scene.shelf = shelf;
  scene.seed = seed;
  scene.objects.reserve(static_cast<std::size_t>(n_objects));

  for (int id = 0; id < n_objects; ++id) {
    bool placed = false;
    for (int attempt = 0; attempt < config.max_attempts_per_object && !placed;
         ++attempt) {
      ObjectPrimitive obj;
      obj.id = id;
      obj.shape = uniform(0.0, 1.0) < config.box_probability ? Shape::box
                                                              : Shape::cylinder;
      if (obj.shape == Shape::box) {
        obj.dims = Vec3(uniform(config.box_edge_min, config.box_edge_max),
                        uniform(config.box_edge_min, config.box_edge_max),
                        uniform(config.box_edge_min, config.box_edge_max));
        obj.yaw = uniform(0.0, kPi);
      } else {
        obj.dims = Vec3(uniform(config.cylinder_radius_min, config.cylinder_radius_max),
                        uniform(config.cylinder_height_min, config.cylinder_height_max),
                        0.0);
      }
      obj.position = Vec2(uniform(0.0, shelf.depth), uniform(0.0, shelf.width));
      obj.mass = uniform(0.0, 1.0) < 0.5 ? MassClass::light : MassClass::heavy;

      if (obj.height() > shelf.height) continue;
      const Footprint f = obj.footprint();
      if (!shelf.footprint_contains(f, config.clearance)) continue;
      const bool clear = std::none_of(
          scene.objects.begin(), scene.objects.end(), [&](const ObjectPrimitive& o) {
            return footprint_distance(f, o.footprint()) <= config.clearance;
          });
      if (!clear) continue;
      scene.objects.push_back(obj);
      placed = true;
    }
    if (!placed) {
      throw Error("sample_scene: could not place object " + std::to_string(id) +
                  "; shelf too crowded");
    }
  }
  return scene;
}

DisplacementReport displacement(const SceneState& before, const SceneState& after) {
  std::set<int> before_ids;
  for (const auto& o : before.objects) before_ids.insert(o.id);
  for (const auto& o : after.objects) {
    if (!before_ids.count(o.id)) {
      throw Error("displacement: object " + std::to_string(o.id) +
                  " missing from the reference scene");
    }
  }
  DisplacementReport report;
  for (const auto& o : before.objects) {
    const ObjectPrimitive* moved = after.find(o.id);
    if (moved == nullptr) {
      report.dropped.push_back(o.id);
      continue;
    }
    const double d = (moved->position - o.position).norm();
    report.per_object[o.id] = d;
    report.total += d;
  }
  if (!report.per_object.empty()) {
    report.mean = report.total / static_cast<double>(report.per_object.size());
  }
  return report;
}

void to_json(nlohmann::json& j, const ShelfSpec& s) {
  j = {{"depth", s.depth},
       {"width", s.width},
       {"height", s.height},
       {"wall_thickness", s.wall_thickness},
       {"board_height", s.board_height}};
}

void from_json(const nlohmann::json& j, ShelfSpec& s) {
  s.depth = j.at("depth").get<double>();
  s.width = j.at("width").get<double>();
  s.height = j.at("height").get<double>();
  s.wall_thickness = j.value("wall_thickness", 0.02);
  s.board_height = j.value("board_height", 0.0);
}

void to_json(nlohmann::json& j, const ObjectPrimitive& o) {
  j = {{"id", o.id},
       {"shape", o.shape == Shape::box ? "box" : "cylinder"},
       {"dims", {o.dims.x(), o.dims.y(), o.dims.z()}},
       {"position", {o.position.x(), o.position.y()}},
       {"yaw", o.yaw},
       {"mass", o.mass == MassClass::light ? "light" : "heavy"}};
}

void from_json(const nlohmann::json& j, ObjectPrimitive& o) {
  o.id = j.at("id").get<int>();
  const auto shape = j.at("shape").get<std::string>();
  if (shape == "box") {
    o.shape = Shape::box;
  } else if (shape == "cylinder") {
    o.shape = Shape::cylinder;
  } else {
    throw Error("unknown shape '" + shape + "'");
  }
  const auto& d = j.at("dims");
  o.dims = Vec3(d.at(0).get<double>(), d.at(1).get<double>(),
                d.size() > 2 ? d.at(2).get<double>() : 0.0);
  const auto& p = j.at("position");
  o.position = Vec2(p.at(0).get<double>(), p.at(1).get<double>());
  o.yaw = j.value("yaw", 0.0);
  o.mass = j.value("mass", std::string("light")) == "heavy" ? MassClass::heavy
                                                             : MassClass::light;
}

void to_json(nlohmann::json& j, const SceneState& s) {
  j = {{"shelf", s.shelf}, {"seed", s.seed}, {"objects", s.objects}};
}

void from_json(const nlohmann::json& j, SceneState& s) {
  s.shelf = j.at("shelf").get<ShelfSpec>();
  s.seed = j.value("seed", std::uint64_t{0});
  s.objects = j.at("objects").get<std::vector<ObjectPrimitive>>();
  std::set<int> ids;
  for (const auto& o : s.objects) {
    if (!ids.insert(o.id).second) {
      throw Error("scene: duplicate object id " + std::to_string(o.id));
    }
  }
}

}  // namespace vpush
