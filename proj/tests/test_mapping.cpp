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

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "vpush/episode.hpp"
#include "vpush/mapping.hpp"

using namespace vpush;

namespace {

const ShelfSpec kShelf;
const MapParams kParams;

HeightMap random_map(std::uint64_t seed, double unknown_share) {
  HeightMap map(kShelf, kParams.cell_size);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < map.size(); ++i) {
    const double x = u(rng);
    if (x < unknown_share) continue;
    map.set_cell(i, x < 0.5 + unknown_share / 2 ? 3.0 : -3.0, 0.05);
  }
  return map;
}

}  // namespace

TEST_CASE("fresh map") {
  const HeightMap map(kShelf, 0.01);
  CHECK(map.rows() == 40);
  CHECK(map.cols() == 80);
  CHECK(entropy(map, kParams) == 1.0);
  CHECK(map.probability(0) == 0.5);
  CHECK_THROWS_AS(HeightMap(kShelf, 0.03), Error);
}

TEST_CASE("single hit and repeated hits") {
  HeightMap map(kShelf, 0.01);
  const Vec3 p(0.105, 0.205, 0.08);
  integrate(map, std::vector<Vec3>{p}, kParams);
  const int i = map.index(10, 20);
  CHECK(map.log_odds(i) == doctest::Approx(kParams.hit_log_odds));
  CHECK(map.height(i) == doctest::Approx(0.08));
  CHECK(map.state(i, kParams) == CellState::occupied);

  for (int n : {2, 4, 10}) {
    HeightMap m(kShelf, 0.01);
    integrate(m, std::vector<Vec3>(static_cast<std::size_t>(n), p), kParams);
    CHECK(m.log_odds(i) == doctest::Approx(std::min(n * kParams.hit_log_odds, kParams.clamp_log_odds)));
  }
}

TEST_CASE("board returns need three to classify free") {
  HeightMap map(kShelf, 0.01);
  const Vec3 q(0.105, 0.205, 0.0);
  integrate(map, std::vector<Vec3>(2, q), kParams);
  CHECK(map.state(map.index(10, 20), kParams) == CellState::unknown);
  integrate(map, std::vector<Vec3>{q}, kParams);
  CHECK(map.state(map.index(10, 20), kParams) == CellState::free);
}

TEST_CASE("classification thresholds are strict") {
  CHECK(classify(0.7, 0.2) == CellState::unknown);
  CHECK(classify(0.3, 0.2) == CellState::unknown);
  CHECK(classify(std::nextafter(0.7, 1.0), 0.2) == CellState::occupied);
  CHECK(classify(std::nextafter(0.3, 0.0), 0.2) == CellState::free);
  CHECK(classify(0.5, 0.2) == CellState::unknown);
}

TEST_CASE("entropy") {
  HeightMap map(kShelf, 0.01);
  for (int i = 0; i < map.size(); ++i) map.set_cell(i, -3.0, 0.0);
  CHECK(entropy(map, kParams) == 0.0);
  for (int i = 0; i < 800; ++i) map.set_cell(i, 0.0, 0.0);
  CHECK(entropy(map, kParams) == 0.25);
}

TEST_CASE("information gain and motion cost") {
  CHECK(information_gain(1000, 1000) == 0.0);
  CHECK(information_gain(1000, 500) == 0.5);
  CHECK(information_gain(0, 0) == 0.0);
  CHECK(information_gain(10, 40) == -1.0);
  const CameraPose a{0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(motion_cost(a, a) == 0.0);
  CHECK(motion_cost(a, {0.3, 0.4, 0.0, 0.0, 0.0}) == doctest::Approx(0.5));
  CHECK(motion_cost(a, {0.0, 0.0, 0.0, 0.4, 1.0}) == 0.0);
}

TEST_CASE("largest unknown center") {
  HeightMap map(kShelf, 0.01);
  UnknownRegion all = largest_unknown_center(map, kParams);
  CHECK(all.area == map.size());
  CHECK(all.center.x() == doctest::Approx(0.2));
  CHECK(all.center.y() == doctest::Approx(0.4));
  CHECK(all.center.z() == doctest::Approx(0.2));

  for (int i = 0; i < map.size(); ++i) map.set_cell(i, -3.0, 0.0);
  UnknownRegion none = largest_unknown_center(map, kParams);
  CHECK(none.area == 0);
  CHECK(none.center.x() == doctest::Approx(0.2));

  for (int r : {10, 11}) {
    for (int c : {30, 31}) map.set_cell(map.index(r, c), 0.0, 0.0, false);
  }
  UnknownRegion block = largest_unknown_center(map, kParams);
  CHECK(block.area == 4);
  CHECK(block.center.x() == doctest::Approx(0.11));
  CHECK(block.center.y() == doctest::Approx(0.31));

  // An equal block later in row-major order does not win.
  for (int r : {30, 31}) {
    for (int c : {5, 6}) map.set_cell(map.index(r, c), 0.0, 0.0, false);
  }
  CHECK(largest_unknown_center(map, kParams).center.x() == doctest::Approx(0.11));
}

TEST_CASE("largest unknown center matches the flood-fill oracle") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const HeightMap map = random_map(seed, 0.3 + 0.01 * static_cast<double>(seed));
    const oracle::Components comp = oracle::flood_fill(map, kParams);
    const UnknownRegion got = largest_unknown_center(map, kParams);
    REQUIRE(!comp.area.empty());
    const auto best = std::max_element(comp.area.begin(), comp.area.end()) - comp.area.begin();
    CHECK(got.area == comp.area[static_cast<std::size_t>(best)]);
    CHECK(got.center.x() == comp.centroid[static_cast<std::size_t>(best)].x());
    CHECK(got.center.y() == comp.centroid[static_cast<std::size_t>(best)].y());
  }
}

TEST_CASE("pooled features") {
  HeightMap map(kShelf, 0.01);
  for (double v : pooled_features(map)) CHECK(v == 0.5);

  for (int i = 0; i < map.size(); ++i) map.set_cell(i, -kParams.clamp_log_odds, 0.0);
  for (int r = 0; r < 10; ++r) {
    for (int c = 0; c < 10; ++c) map.set_cell(map.index(r, c), kParams.clamp_log_odds, 0.1);
  }
  const auto f = pooled_features(map);
  CHECK(f[0] == doctest::Approx(probability_from_log_odds(kParams.clamp_log_odds)));
  for (std::size_t k = 1; k < f.size(); ++k) {
    CHECK(f[k] == doctest::Approx(probability_from_log_odds(-kParams.clamp_log_odds)));
  }

  const HeightMap rnd = random_map(3, 0.4);
  const auto g = pooled_features(rnd);
  for (int br = 0; br < 4; ++br) {
    for (int bc = 0; bc < 8; ++bc) {
      double sum = 0.0;
      for (int r = br * 10; r < br * 10 + 10; ++r) {
        for (int c = bc * 10; c < bc * 10 + 10; ++c) sum += rnd.probability(rnd.index(r, c));
      }
      CHECK(g[static_cast<std::size_t>(br * 8 + bc)] == doctest::Approx(sum / 100.0));
    }
  }
}

TEST_CASE("point order within a cloud does not matter") {
  const SceneState scene = sample_scene(14, 9, kShelf);
  const EpisodeConfig config = EpisodeConfig::for_shelf(kShelf);
  const CameraPose pose = bootstrap_poses(kShelf, config.workspace)[1];
  const DepthImage img = render_depth(scene, pose, config.camera, config.workspace);
  std::vector<Vec3> cloud = depth_to_pointcloud(img, pose, config.camera);
  HeightMap a(kShelf, 0.01);
  integrate(a, cloud, kParams);
  std::shuffle(cloud.begin(), cloud.end(), std::mt19937_64(2));
  HeightMap b(kShelf, 0.01);
  integrate(b, cloud, kParams);
  CHECK(a == b);
}

TEST_CASE("static scene: unknown count never grows, heights never shrink, log-odds stay clamped") {
  const SceneState scene = sample_scene(15, 10, kShelf);
  const EpisodeConfig config = EpisodeConfig::for_shelf(kShelf);
  std::mt19937_64 rng(8);
  HeightMap map(kShelf, 0.01);
  int unknown = map.unknown_count(kParams);
  std::vector<double> heights(static_cast<std::size_t>(map.size()), 0.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int step = 0; step < 12; ++step) {
    const Workspace& ws = config.workspace;
    CameraPose pose{ws.lo.x() + u(rng) * (ws.hi.x() - ws.lo.x()),
                    ws.lo.y() + u(rng) * (ws.hi.y() - ws.lo.y()),
                    ws.lo.z() + u(rng) * (ws.hi.z() - ws.lo.z()),
                    ws.pitch_min + u(rng) * (ws.pitch_max - ws.pitch_min),
                    ws.yaw_min + u(rng) * (ws.yaw_max - ws.yaw_min)};
    observe(map, scene, pose, config);
    const int now = map.unknown_count(kParams);
    CHECK(now <= unknown);
    unknown = now;
    for (int i = 0; i < map.size(); ++i) {
      CHECK(std::abs(map.log_odds(i)) <= kParams.clamp_log_odds);
      CHECK(map.height(i) >= heights[static_cast<std::size_t>(i)]);
      CHECK(map.height(i) <= kShelf.height);
      heights[static_cast<std::size_t>(i)] = map.height(i);
    }
  }
}

TEST_CASE("one box from the front-center view against the column oracle") {
  ObjectPrimitive box;
  box.id = 0;
  box.dims = Vec3(0.10, 0.12, 0.20);
  box.position = Vec2(0.18, 0.40);
  const SceneState scene{kShelf, {box}, 0};
  const EpisodeConfig config = EpisodeConfig::for_shelf(kShelf);
  const CameraPose pose = bootstrap_poses(kShelf, config.workspace)[0];
  HeightMap map(kShelf, 0.01);
  observe(map, scene, pose, config);
  const auto columns = oracle::column_visibility(scene, map, pose, config.camera);

  int free_cells = 0;
  int hidden_cells = 0;
  for (int i = 0; i < map.size(); ++i) {
    const auto& col = columns[static_cast<std::size_t>(i)];
    const CellState s = map.state(i, kParams);
    if (s == CellState::free) {
      CHECK(col.visible > 0);
      ++free_cells;
    }
    if (s == CellState::occupied) CHECK(col.has_object);
    if (col.visible == 0 && !col.has_object) {
      CHECK(s == CellState::unknown);
      ++hidden_cells;
    }
  }
  // Box top cells are occupied and the shadow behind the box stays unknown.
  CHECK(map.state(map.index(18, 40), kParams) == CellState::occupied);
  CHECK(map.state(map.index(30, 40), kParams) == CellState::unknown);
  CHECK(free_cells > 2000);
  CHECK(hidden_cells > 50);
}
