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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vpush/geometry.hpp"
#include "vpush/scene.hpp"

using namespace vpush;

namespace {

ObjectPrimitive box(int id, Vec2 pos, Vec3 dims, double yaw = 0.0) {
  ObjectPrimitive o;
  o.id = id;
  o.shape = Shape::box;
  o.dims = dims;
  o.position = pos;
  o.yaw = yaw;
  return o;
}

ObjectPrimitive cylinder(int id, Vec2 pos, double r, double h) {
  ObjectPrimitive o;
  o.id = id;
  o.shape = Shape::cylinder;
  o.dims = Vec3(r, h, 0.0);
  o.position = pos;
  return o;
}

}  // namespace

TEST_CASE("footprint distance and overlap agree with the direct oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.0, 0.3);
  std::uniform_real_distribution<double> size(0.02, 0.12);
  std::uniform_real_distribution<double> yaw(-kPi, kPi);
  int overlapping = 0;
  for (int k = 0; k < 2000; ++k) {
    auto make = [&](int id) {
      if (rng() % 2) return box(id, {pos(rng), pos(rng)}, {size(rng), size(rng), 0.1}, yaw(rng));
      return cylinder(id, {pos(rng), pos(rng)}, 0.5 * size(rng), 0.1);
    };
    const ObjectPrimitive a = make(0);
    const ObjectPrimitive b = make(1);
    const bool expected = oracle::objects_overlap(a, b);
    overlapping += expected;
    CHECK(overlaps(a.footprint(), b.footprint()) == expected);
  }
  CHECK(overlapping > 100);
}

TEST_CASE("sweep distance of axis-aligned boxes") {
  const Footprint a = Footprint::rectangle({0.0, 0.0}, 0.02, 0.02, 0.0);
  const Footprint b = Footprint::rectangle({0.1, 0.01}, 0.02, 0.02, 0.0);
  CHECK(sweep_distance(a, b, {1.0, 0.0}) == doctest::Approx(0.06));
  CHECK(sweep_distance(a, b, {-1.0, 0.0}) == kInf);
  CHECK(sweep_distance(a, b, {0.0, 1.0}) == kInf);
  const Footprint c = Footprint::disc({0.1, 0.0}, 0.02);
  CHECK(sweep_distance(a, c, {1.0, 0.0}) == doctest::Approx(0.06));
  CHECK(sweep_distance(c, a, {-1.0, 0.0}) == doctest::Approx(0.06));
}

TEST_CASE("sweep distance matches small-step translation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> yaw(-kPi, kPi);
  std::uniform_real_distribution<double> size(0.02, 0.08);
  for (int k = 0; k < 200; ++k) {
    const ObjectPrimitive a = box(0, {0.0, 0.0}, {size(rng), size(rng), 0.1}, yaw(rng));
    const ObjectPrimitive b = rng() % 2 ? box(1, {0.2, 0.02}, {size(rng), size(rng), 0.1}, yaw(rng))
                                        : cylinder(1, {0.2, -0.02}, 0.5 * size(rng), 0.1);
    const double angle = std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
    const Vec2 dir(std::cos(angle), std::sin(angle));
    const double d = sweep_distance(a.footprint(), b.footprint(), dir);
    double expected = kInf;
    for (double t = 0.0; t < 0.4; t += 1e-4) {
      ObjectPrimitive moved = a;
      moved.position += t * dir;
      if (oracle::objects_overlap(moved, b)) {
        expected = t;
        break;
      }
    }
    if (expected == kInf) {
      CHECK(d > 0.39);
    } else {
      CHECK(std::abs(d - expected) <= 1.5e-4);
    }
  }
}

TEST_CASE("sample_scene places one object inside the footprint") {
  const ShelfSpec shelf;
  const SceneState s = sample_scene(7, 1, shelf);
  REQUIRE(s.objects.size() == 1);
  CHECK(shelf.footprint_contains(s.objects[0].footprint()));
}

TEST_CASE("sample_scene is deterministic") {
  const ShelfSpec shelf;
  CHECK(sample_scene(7, 9, shelf) == sample_scene(7, 9, shelf));
  CHECK_FALSE(sample_scene(7, 9, shelf) == sample_scene(8, 9, shelf));
}

TEST_CASE("sampled footprints never overlap and stay inside the shelf") {
  const ShelfSpec shelf;
  for (std::uint64_t seed : {3ULL, 4ULL, 5ULL, 6ULL, 40ULL}) {
    const SceneState s = sample_scene(seed, seed == 3 ? 9 : 10, shelf);
    for (std::size_t i = 0; i < s.objects.size(); ++i) {
      const auto& o = s.objects[i];
      CHECK(o.height() <= shelf.height);
      for (const Vec2& p : o.shape == Shape::box ? oracle::corners(o)
                                                  : std::vector<Vec2>{o.position}) {
        const double r = o.shape == Shape::box ? 0.0 : o.dims.x();
        CHECK(p.x() - r > 0.0);
        CHECK(p.x() + r < shelf.depth);
        CHECK(p.y() - r > 0.0);
        CHECK(p.y() + r < shelf.width);
      }
      for (std::size_t j = i + 1; j < s.objects.size(); ++j) {
        CHECK_FALSE(oracle::objects_overlap(o, s.objects[j]));
      }
    }
  }
}

TEST_CASE("sample_scene rejects bad input and overcrowding") {
  const ShelfSpec shelf;
  CHECK_THROWS_AS(sample_scene(1, 0, shelf), Error);
  SceneSamplerConfig tight;
  tight.max_attempts_per_object = 50;
  CHECK_THROWS_AS(sample_scene(1, 200, shelf, tight), Error);
}

TEST_CASE("displacement") {
  const ShelfSpec shelf;
  SceneState a = sample_scene(2, 8, shelf);
  DisplacementReport same = displacement(a, a);
  CHECK(same.mean == 0.0);
  CHECK(same.total == 0.0);

  SceneState b = a;
  b.objects[0].position += Vec2(0.03, 0.04);
  DisplacementReport moved = displacement(a, b);
  CHECK(moved.per_object.at(a.objects[0].id) == doctest::Approx(0.05));
  CHECK(moved.mean == doctest::Approx(0.05 / 8));
  CHECK(displacement(b, a).per_object == moved.per_object);

  SceneState dropped = b;
  dropped.objects.erase(dropped.objects.begin() + 1);
  DisplacementReport d = displacement(a, dropped);
  CHECK(d.dropped == std::vector<int>{a.objects[1].id});
  CHECK(d.mean == doctest::Approx(0.05 / 7));

  SceneState extra = a;
  extra.objects.push_back(box(999, {0.2, 0.4}, {0.05, 0.05, 0.05}));
  CHECK_THROWS_AS(displacement(a, extra), Error);
}

TEST_CASE("scene JSON round trip") {
  const SceneState s = sample_scene(12, 9, ShelfSpec{});
  const nlohmann::json j = s;
  CHECK(j.get<SceneState>() == s);
  nlohmann::json dup = j;
  dup["objects"][1]["id"] = dup["objects"][0]["id"];
  CHECK_THROWS_AS(dup.get<SceneState>(), Error);
}
