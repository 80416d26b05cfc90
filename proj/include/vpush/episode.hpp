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

#ifndef VPUSH_EPISODE_HPP
#define VPUSH_EPISODE_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "vpush/mapping.hpp"
#include "vpush/scene.hpp"
#include "vpush/sensor.hpp"

namespace vpush {

struct RewardParams {
  double alpha = 1.0;    ///< weight of the motion cost
  double beta = 10.0;    ///< weight of the information gain
  double collision_penalty = -25.0;
};

/// The episode ends once each of the last `window` entropy changes is below
/// `tau_single` and their sum is below `tau_sum`.
/// Per-step reward; `flagged` marks a collision or an object drop.
double step_reward(const RewardParams& params, double info_gain, double cost, bool flagged);

struct TerminationCriteria {
  double tau_single = 0.01;
  double tau_sum = 0.05;
  int window = 3;
  bool enabled = true;

  bool should_stop(const std::vector<double>& entropy_changes) const;
};

struct EpisodeConfig {
  MapParams map;
  CameraIntrinsics camera;
  Workspace workspace;
  RewardParams reward;
  TerminationCriteria termination;
  double collision_probability = 0.0;  ///< random collision events, off by default
  std::uint64_t seed = 0;

  static EpisodeConfig for_shelf(const ShelfSpec& shelf);
};

/// Observation vector layout.
struct Observation {
  static constexpr int kSize = 43;
  static constexpr int kFeatures = 0;       // 32 pooled map features
  static constexpr int kLastAction = 32;    // x, y, z, pitch, yaw
  static constexpr int kInfoGain = 37;
  static constexpr int kMotionCost = 38;
  static constexpr int kCollisionFlag = 39;
  static constexpr int kUnknownCenter = 40;  // x, y, z

  std::array<double, kSize> values{};
};

struct StepRecord {
  CameraPose pose;
  bool bootstrap = false;
  int unknown_before = 0;
  int unknown_after = 0;
  double entropy_before = 0.0;
  double entropy_after = 0.0;
  double info_gain = 0.0;
  double cost = 0.0;
  double reward = 0.0;
  bool collision = false;
};

struct EpisodeTrace {
  std::vector<StepRecord> steps;

  /// One JSON object per line; see README for the field list.
  void write_jsonl(std::ostream& os) const;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
};

/// Front-center view plus the two corner views looking diagonally across.
std::array<CameraPose, 3> bootstrap_poses(const ShelfSpec& shelf, const Workspace& ws);

/// Renders the scene from `pose` and integrates the resulting cloud.
IntegrationStats observe(HeightMap& map, const SceneState& scene, const CameraPose& pose,
                         const EpisodeConfig& config);

/// Observation assembly from its parts, in the fixed layout.
Observation build_observation(const HeightMap& map, const MapParams& params,
                              const CameraPose& last_action, double info_gain,
                              double cost, bool collision_or_drop);

/// One viewpoint-planning episode. Owns its scene copy and map.
class Episode {
 public:
  Episode(SceneState scene, EpisodeConfig config);
  /// Continues on an existing map, e.g. after a push. `last_pose` is where
  /// the camera currently is.
  Episode(SceneState scene, HeightMap map, const CameraPose& last_pose,
          EpisodeConfig config);

  /// Executes the three fixed views on the fresh map. Throws Error when the
  /// episode already made observations.
  Observation bootstrap();

  /// Moves to `pose`, observes and scores the step. Invalid poses count as a
  /// collision and end the episode. Throws Error after the episode is done.
  StepResult step(const CameraPose& pose);

  /// Flags an object drop caused outside the episode; the next step is
  /// penalized and its observation carries the flag.
  void notify_drop() { pending_drop_ = true; }

  Observation observation() const;
  bool done() const { return done_; }
  const SceneState& scene() const { return scene_; }
  const HeightMap& map() const { return map_; }
  const EpisodeConfig& config() const { return config_; }
  const EpisodeTrace& trace() const { return trace_; }
  const CameraPose& last_pose() const { return last_pose_; }
  int unknown_count() const { return map_.unknown_count(config_.map); }
  double current_entropy() const { return entropy(map_, config_.map); }

 private:
  SceneState scene_;
  EpisodeConfig config_;
  HeightMap map_;
  CameraPose last_pose_{};
  bool has_pose_ = false;
  bool done_ = false;
  bool pending_drop_ = false;
  double last_ig_ = 0.0;
  double last_cost_ = 0.0;
  bool last_flag_ = false;
  std::vector<double> entropy_changes_;
  EpisodeTrace trace_;
  std::mt19937_64 rng_;
};

/// Re-executes the non-bootstrap poses of `trace` on a fresh episode.
EpisodeTrace replay(const SceneState& scene, const EpisodeConfig& config,
                    const EpisodeTrace& trace);

}  // namespace vpush

#endif  // VPUSH_EPISODE_HPP
