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

#include <sstream>

#include <json.hpp>

#include "vpush/episode.hpp"

using namespace vpush;

namespace {

const ShelfSpec kShelf;

CameraPose offset(CameraPose p, double dx, double dy) {
  p.x += dx;
  p.y += dy;
  return p;
}

}  // namespace

TEST_CASE("step reward") {
  const RewardParams rp;
  CHECK(step_reward(rp, 0.1, 0.2, false) == doctest::Approx(0.8));
  CHECK(step_reward(rp, 0.0, 0.2, true) == doctest::Approx(-25.2));
  CHECK(step_reward(rp, 0.0, 0.0, false) == 0.0);
}

TEST_CASE("termination window") {
  TerminationCriteria t;
  CHECK_FALSE(t.should_stop({}));
  CHECK_FALSE(t.should_stop({0.005, 0.005}));
  CHECK(t.should_stop({0.005, 0.005, 0.005}));
  CHECK(t.should_stop({0.3, 0.005, 0.005, 0.005}));
  CHECK_FALSE(t.should_stop({0.005, 0.005, 0.01}));
  CHECK(t.should_stop({0.009, 0.009, 0.009, 0.009, 0.009, 0.009}));
  t.tau_sum = 0.02;
  CHECK_FALSE(t.should_stop({0.009, 0.009, 0.009}));
  t.enabled = false;
  CHECK_FALSE(t.should_stop({0.0, 0.0, 0.0}));
}

TEST_CASE("bootstrap poses lie in the workspace") {
  const Workspace ws = Workspace::for_shelf(kShelf);
  const auto poses = bootstrap_poses(kShelf, ws);
  for (const auto& p : poses) CHECK(pose_valid(p, ws));
  CHECK(poses[0].y == doctest::Approx(0.4));
  CHECK(poses[0].yaw == 0.0);
  CHECK(poses[1].yaw > 0.0);
  CHECK(poses[2].yaw < 0.0);
}

TEST_CASE("observation layout") {
  HeightMap map(kShelf, 0.01);
  const MapParams params;
  const CameraPose pose{-0.1, 0.2, 0.3, -0.4, 0.5};
  const Observation obs = build_observation(map, params, pose, 0.25, 0.125, true);
  const auto& v = obs.values;
  static_assert(Observation::kSize == 43);
  for (int k = 0; k < 32; ++k) CHECK(v[static_cast<std::size_t>(k)] == 0.5);
  CHECK(v[32] == -0.1);
  CHECK(v[33] == 0.2);
  CHECK(v[34] == 0.3);
  CHECK(v[35] == -0.4);
  CHECK(v[36] == 0.5);
  CHECK(v[37] == 0.25);
  CHECK(v[38] == 0.125);
  CHECK(v[39] == 1.0);
  CHECK(v[40] == doctest::Approx(0.2));
  CHECK(v[41] == doctest::Approx(0.4));
  CHECK(v[42] == doctest::Approx(0.2));
  CHECK(build_observation(map, params, pose, 0.0, 0.0, false).values[39] == 0.0);
}

TEST_CASE("bootstrap on an empty shelf resolves nearly everything") {
  const SceneState empty{kShelf, {}, 0};
  Episode ep(empty, EpisodeConfig::for_shelf(kShelf));
  ep.bootstrap();
  CHECK(ep.trace().steps.size() == 3);
  CHECK(ep.current_entropy() < 0.02);
  CHECK_THROWS_AS(ep.bootstrap(), Error);
}

TEST_CASE("collision step") {
  const SceneState scene = sample_scene(2, 8, kShelf);
  Episode ep(scene, EpisodeConfig::for_shelf(kShelf));
  ep.bootstrap();
  const HeightMap before = ep.map();
  CameraPose bad = ep.last_pose();
  bad.x = 0.30;  // inside the shelf
  const StepResult r = ep.step(bad);
  CHECK(r.done);
  CHECK(r.observation.values[Observation::kCollisionFlag] == 1.0);
  CHECK(ep.map() == before);
  const double cost = (bad.position() - ep.trace().steps[2].pose.position()).norm();
  CHECK(r.reward == doctest::Approx(-25.0 - cost));
  CHECK_THROWS_AS(ep.step(ep.trace().steps[0].pose), Error);
}

TEST_CASE("drop notification penalizes one step") {
  const SceneState scene = sample_scene(3, 8, kShelf);
  Episode ep(scene, EpisodeConfig::for_shelf(kShelf));
  ep.bootstrap();
  const CameraPose p = ep.last_pose();
  ep.notify_drop();
  const StepResult a = ep.step(p);
  CHECK(a.observation.values[Observation::kCollisionFlag] == 1.0);
  CHECK(a.reward == doctest::Approx(-25.0 + 10.0 * ep.trace().steps.back().info_gain));
  CHECK_FALSE(a.done);
  const StepResult b = ep.step(p);
  CHECK(b.observation.values[Observation::kCollisionFlag] == 0.0);
  CHECK(b.reward == doctest::Approx(10.0 * ep.trace().steps.back().info_gain));
}

TEST_CASE("step bookkeeping and telescoped gains") {
  const SceneState scene = sample_scene(4, 10, kShelf);
  EpisodeConfig config = EpisodeConfig::for_shelf(kShelf);
  config.termination.enabled = false;
  Episode ep(scene, config);
  ep.bootstrap();
  const Workspace& ws = config.workspace;
  const CameraPose start = ws.center();
  const std::vector<CameraPose> path = {start, offset(start, 0.0, -0.2),
                                        offset(start, 0.05, 0.25), offset(start, -0.1, 0.0)};
  const int u0 = ep.unknown_count();
  double product = 1.0;
  CameraPose prev = ep.last_pose();
  for (const auto& p : path) {
    const StepResult r = ep.step(p);
    const StepRecord& rec = ep.trace().steps.back();
    const double ig = rec.unknown_before > 0
                          ? double(rec.unknown_before - rec.unknown_after) / rec.unknown_before
                          : 0.0;
    CHECK(rec.info_gain == doctest::Approx(ig));
    CHECK(rec.cost == doctest::Approx((p.position() - prev.position()).norm()));
    CHECK(r.reward == doctest::Approx(10.0 * ig - rec.cost));
    CHECK(r.observation.values[Observation::kInfoGain] == rec.info_gain);
    CHECK(r.observation.values[Observation::kMotionCost] == rec.cost);
    product *= 1.0 - rec.info_gain;
    prev = p;
  }
  CHECK(product == doctest::Approx(double(ep.unknown_count()) / u0));
}

TEST_CASE("termination ends the episode after three small changes") {
  const SceneState scene = sample_scene(5, 8, kShelf);
  Episode ep(scene, EpisodeConfig::for_shelf(kShelf));
  ep.bootstrap();
  const CameraPose p = ep.last_pose();
  // Repeating the last view only settles a few board cells.
  CHECK_FALSE(ep.step(p).done);
  CHECK_FALSE(ep.step(p).done);
  CHECK(ep.step(p).done);
}

TEST_CASE("replay reproduces the trace") {
  const SceneState scene = sample_scene(6, 9, kShelf);
  EpisodeConfig config = EpisodeConfig::for_shelf(kShelf);
  config.collision_probability = 0.3;
  config.seed = 77;
  Episode ep(scene, config);
  ep.bootstrap();
  const CameraPose c = config.workspace.center();
  for (int k = 0; k < 6 && !ep.done(); ++k) ep.step(offset(c, 0.0, 0.05 * (k - 3)));
  const EpisodeTrace again = replay(scene, config, ep.trace());
  REQUIRE(again.steps.size() == ep.trace().steps.size());
  for (std::size_t i = 0; i < again.steps.size(); ++i) {
    CHECK(again.steps[i].reward == ep.trace().steps[i].reward);
    CHECK(again.steps[i].unknown_after == ep.trace().steps[i].unknown_after);
    CHECK(again.steps[i].collision == ep.trace().steps[i].collision);
  }

  std::ostringstream os;
  ep.trace().write_jsonl(os);
  std::istringstream is(os.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("step") == n);
    CHECK(j.at("pose").size() == 5);
    ++n;
  }
  CHECK(n == ep.trace().steps.size());
}
