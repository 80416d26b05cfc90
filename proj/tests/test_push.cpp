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
#include "vpush/push.hpp"

using namespace vpush;

namespace {

const ShelfSpec kShelf;
const MapParams kParams;

ObjectPrimitive box(int id, Vec2 pos, Vec3 dims = Vec3(0.04, 0.04, 0.10), double yaw = 0.0) {
  ObjectPrimitive o;
  o.id = id;
  o.dims = dims;
  o.position = pos;
  o.yaw = yaw;
  return o;
}

PushCandidate at(Vec2 xy, int direction, double length = 0.05) {
  return {Vec3(xy.x(), xy.y(), 0.03), direction, length, -1};
}

HeightMap bootstrapped(const SceneState& scene, const EpisodeConfig& config) {
  Episode ep(scene, config);
  ep.bootstrap();
  return ep.map();
}

}  // namespace

TEST_CASE("free map gives no candidates") {
  HeightMap map(kShelf, 0.01);
  for (int i = 0; i < map.size(); ++i) map.set_cell(i, -3.0, 0.0);
  CHECK(push_contact_cells(map, kParams, {}).empty());
  CHECK(sample_candidates(map, kParams, {}).empty());
}

TEST_CASE("ray origins") {
  const auto o = push_ray_origins(kShelf, {});
  REQUIRE(o.size() == 3);
  CHECK(o[0] == Vec2(-0.10, 0.80));
  CHECK(o[1] == Vec2(-0.10, 0.40));
  CHECK(o[2] == Vec2(-0.10, 0.0));
}

TEST_CASE("contact cells match a sampled ray walk") {
  const PushConfig config;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    HeightMap map(kShelf, 0.01);
    for (int i = 0; i < map.size(); ++i) {
      const double x = u(rng);
      map.set_cell(i, x < 0.04 ? 3.0 : (x < 0.7 ? -3.0 : 0.0), 0.05);
    }
    std::vector<int> expected;
    for (const Vec2& origin : push_ray_origins(kShelf, config)) {
      for (int k = 0; k < config.rays_per_origin; ++k) {
        const Vec2 target(kShelf.depth, kShelf.width * (k + 0.5) / config.rays_per_origin);
        for (int cell : oracle::sampled_cells(map, origin, target)) {
          if (map.state(cell, kParams) != CellState::occupied) continue;
          if (std::find(expected.begin(), expected.end(), cell) == expected.end()) {
            expected.push_back(cell);
          }
          break;
        }
      }
    }
    CHECK(push_contact_cells(map, kParams, config) == expected);
  }
}

TEST_CASE("candidates: eight directions per contact cell") {
  const SceneState scene{kShelf, {box(0, Vec2(0.15, 0.40), Vec3(0.06, 0.10, 0.30))}, 0};
  const HeightMap map = bootstrapped(scene, EpisodeConfig::for_shelf(kShelf));
  const PushConfig config;
  const auto cells = push_contact_cells(map, kParams, config);
  const auto cands = sample_candidates(map, kParams, config);
  REQUIRE(!cells.empty());
  CHECK(cands.size() == 8 * cells.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    CHECK(cands[i].cell == cells[i / 8]);
    CHECK(cands[i].direction == static_cast<int>(i % 8));
    CHECK(cands[i].length == config.length);
    const double h = map.height(cands[i].cell);
    CHECK(cands[i].start.z() == doctest::Approx(std::min(0.5 * h, config.max_contact_height)));
    CHECK(cands[i].start.x() < 0.18);
    CHECK(std::abs(cands[i].start.y() - 0.40) < 0.06);
  }
}

TEST_CASE("push map") {
  HeightMap map(kShelf, 0.01);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < map.size(); ++i) map.set_cell(i, u(rng), 0.1 + 0.01 * u(rng));

  const Vec2 center = map.center();
  const PushMap id = make_push_map(map, at(center, 0));
  for (int i = 0; i < map.size(); ++i) {
    CHECK(id.probability[static_cast<std::size_t>(i)] == doctest::Approx(map.probability(i)).epsilon(1e-12));
    CHECK(id.height[static_cast<std::size_t>(i)] == doctest::Approx(map.height(i)).epsilon(1e-12));
  }

  // Two half turns about the center give back the original.
  const PushMap half = make_push_map(map, at(center, 4));
  HeightMap rotated(kShelf, 0.01);
  for (int i = 0; i < map.size(); ++i) {
    const double p = half.probability[static_cast<std::size_t>(i)];
    rotated.set_cell(i, std::log(p / (1.0 - p)), half.height[static_cast<std::size_t>(i)]);
  }
  const PushMap back = make_push_map(rotated, at(center, 4));
  double worst = 0.0;
  for (int i = 0; i < map.size(); ++i) {
    worst = std::max(worst, std::abs(back.probability[static_cast<std::size_t>(i)] - map.probability(i)));
  }
  CHECK(worst <= 0.02);

  // A half turn maps cell (r, c) onto (rows-1-r, cols-1-c).
  CHECK(half.probability[static_cast<std::size_t>(map.index(3, 7))] ==
        doctest::Approx(map.probability(map.index(36, 72))));

  const HeightMap blank(kShelf, 0.01);
  for (int d = 0; d < 8; ++d) {
    const PushMap pm = make_push_map(blank, at(Vec2(0.123, 0.654), d));
    for (double p : pm.probability) CHECK(classify(p, kParams.tau_unknown) == CellState::unknown);
  }
  CHECK_THROWS_AS(make_push_map(blank, at(Vec2(-0.01, 0.4), 0)), Error);
}

TEST_CASE("execute: single object in free space") {
  const SceneState scene{kShelf, {box(3, Vec2(0.15, 0.40))}, 0};
  const PushOutcome out = execute_push(scene, at(Vec2(0.125, 0.40), 0));
  REQUIRE(out.status == PushOutcome::Status::ok);
  CHECK(out.contacted_id == 3);
  CHECK(out.travel == doctest::Approx(0.05));
  CHECK(out.displacement.at(3) == doctest::Approx(0.05));
  CHECK(out.scene_after.objects[0].position.x() == doctest::Approx(0.20));
  CHECK_FALSE(out.wall_collision);
  CHECK(out.drops.empty());
}

TEST_CASE("execute: chain with a 2 cm gap") {
  const SceneState scene{kShelf, {box(0, Vec2(0.10, 0.40)), box(1, Vec2(0.16, 0.40))}, 0};
  const PushOutcome out = execute_push(scene, at(Vec2(0.075, 0.40), 0));
  CHECK(out.displacement.at(0) == doctest::Approx(0.05));
  CHECK(out.displacement.at(1) == doctest::Approx(0.03));
  CHECK(out.total_displacement() == doctest::Approx(0.08));
}

TEST_CASE("execute: back panel and side wall stop the chain") {
  const SceneState back{kShelf, {box(0, Vec2(0.36, 0.40))}, 0};
  const PushOutcome a = execute_push(back, at(Vec2(0.335, 0.40), 0));
  CHECK(a.travel == doctest::Approx(0.02));
  CHECK(a.wall_collision);

  const SceneState side{kShelf, {box(0, Vec2(0.20, 0.05)), box(1, Vec2(0.20, 0.10))}, 0};
  const PushOutcome b = execute_push(side, at(Vec2(0.20, 0.125), 6));
  CHECK(b.contacted_id == 1);
  CHECK(b.travel == doctest::Approx(0.04));
  CHECK(b.displacement.at(0) == doctest::Approx(0.03));
  CHECK(b.displacement.at(1) == doctest::Approx(0.04));
  CHECK(b.wall_collision);
}

TEST_CASE("execute: pushing past the front edge drops the object") {
  const SceneState scene{kShelf, {box(0, Vec2(0.03, 0.40)), box(1, Vec2(0.25, 0.40))}, 0};
  const PushOutcome out = execute_push(scene, at(Vec2(0.055, 0.40), 4));
  CHECK(out.drops == std::vector<int>{0});
  REQUIRE(out.scene_after.objects.size() == 1);
  CHECK(out.scene_after.objects[0].id == 1);
  CHECK(out.displacement.at(0) == doctest::Approx(0.05));
}

TEST_CASE("execute: no contact") {
  const SceneState scene{kShelf, {box(0, Vec2(0.20, 0.40))}, 0};
  const PushOutcome out = execute_push(scene, at(Vec2(0.10, 0.40), 0));
  CHECK(out.status == PushOutcome::Status::no_contact);
  CHECK(out.total_displacement() == 0.0);
  CHECK(out.scene_after == scene);
}

TEST_CASE("execute: chain solvers agree and outcomes are physical") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PushConfig dijkstra;
  PushConfig relax;
  relax.chain_solver = ChainSolver::fixed_point;
  int contacts = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SceneState scene = sample_scene(1000 + trial, 2 + trial % 5, kShelf);
    const ObjectPrimitive& target = scene.objects[static_cast<std::size_t>(trial) % scene.objects.size()];
    const Footprint f = target.footprint();
    const int dir = static_cast<int>(u(rng) * 8);
    PushCandidate c = at(target.position, dir, 0.02 + 0.08 * u(rng));
    // Start on the footprint boundary behind the push direction.
    const Vec2 d = c.unit();
    const double back = project(f, d).first;
    c.start.head<2>() = target.position + (back - target.position.dot(d) - 0.003) * d;
    const PushOutcome a = execute_push(scene, c, dijkstra);
    const PushOutcome b = execute_push(scene, c, relax);
    REQUIRE(a.status == b.status);
    if (a.status != PushOutcome::Status::ok) continue;
    ++contacts;
    CHECK(a.contacted_id == b.contacted_id);
    for (const auto& [id, disp] : a.displacement) {
      CHECK(std::abs(disp - b.displacement.at(id)) < 1e-12);
      CHECK(disp <= c.length + 1e-12);
      CHECK(disp >= 0.0);
    }
    CHECK(a.displacement.at(a.contacted_id) == doctest::Approx(a.travel));
    CHECK(a.scene_after.objects.size() + a.drops.size() == scene.objects.size());
    const auto& objs = a.scene_after.objects;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      CHECK(objs[i].position.y() > 0.0);
      CHECK(objs[i].position.y() < kShelf.width);
      CHECK(objs[i].position.x() < kShelf.depth);
      for (std::size_t j = i + 1; j < objs.size(); ++j) {
        const double sep = footprint_distance(objs[i].footprint(), objs[j].footprint());
        CHECK(sep > -1e-9);
      }
    }
  }
  CHECK(contacts > 200);
}

TEST_CASE("scoring matches a full re-observation") {
  const EpisodeConfig config = EpisodeConfig::for_shelf(kShelf);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const SceneState scene = sample_scene(300 + seed, 9, kShelf);
    const HeightMap map = bootstrapped(scene, config);
    const HeightMap map_copy = map;
    PushConfig pc;
    const PushScorer scorer(scene, map, config, pc);
    const auto cands = sample_candidates(map, config.map, pc);
    for (std::size_t k = 0; k < cands.size(); k += 5) {
      const PushScore s = scorer.score(cands[k]);
      if (!s.valid) {
        CHECK(s.outcome.status == PushOutcome::Status::no_contact);
        continue;
      }
      HeightMap after = map;
      observe(after, s.outcome.scene_after, scorer.view(), config);
      const int revealed = map.unknown_count(config.map) - after.unknown_count(config.map);
      CHECK(s.revealed == revealed);
      CHECK(s.outcome.delta_entropy == doctest::Approx(double(revealed) / map.size()));
      CHECK(s.score == doctest::Approx(s.outcome.delta_entropy -
                                       pc.lambda * s.outcome.total_displacement() -
                                       pc.drop_penalty * double(s.outcome.drops.size())));
      if (k % 20 == 0) {
        const DepthImage full =
            SceneRaycaster(s.outcome.scene_after).render(scorer.view(), config.camera);
        CHECK(scorer.rerender(s.outcome).range == full.range);
      }
      ++checked;
    }
    // Scoring leaves its inputs alone.
    CHECK(map == map_copy);
    CHECK(score_push(scene, map, cands[0], pc.lambda, config).score ==
          scorer.score(cands[0]).score);
  }
  CHECK(checked > 20);
}

TEST_CASE("select best push") {
  const EpisodeConfig config = EpisodeConfig::for_shelf(kShelf);
  const SceneState scene = sample_scene(41, 8, kShelf);
  const HeightMap map = bootstrapped(scene, config);
  const PushScorer scorer(scene, map, config, {});
  CHECK_FALSE(select_best_push(scorer, {}).has_value());

  const PushCandidate miss = at(Vec2(0.005, 0.005), 0);
  CHECK_FALSE(select_best_push(scorer, {miss, miss}).has_value());

  const auto cands = sample_candidates(map, config.map, {});
  REQUIRE(!cands.empty());
  const auto best = select_best_push(scorer, cands);
  REQUIRE(best.has_value());
  for (const auto& c : cands) {
    const PushScore s = scorer.score(c);
    if (s.valid) CHECK(s.score <= best->score.score);
  }
  // The earliest of equal candidates wins.
  std::vector<PushCandidate> dup = {miss, cands[best->index], cands[best->index]};
  const auto again = select_best_push(scorer, dup);
  REQUIRE(again.has_value());
  CHECK(again->index == 1);
  CHECK(again->score.score == best->score.score);
}
