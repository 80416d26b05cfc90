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

#include "vpush/episode.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

namespace vpush {

double step_reward(const RewardParams& params, double info_gain, double cost, bool flagged) {
  const double r_sparse = flagged ? params.collision_penalty : 0.0;
  return r_sparse + params.beta * info_gain - params.alpha * cost;
}

bool TerminationCriteria::should_stop(const std::vector<double>& entropy_changes) const {
  if (!enabled || window <= 0 || static_cast<int>(entropy_changes.size()) < window) {
    return false;
  }
  double sum = 0.0;
  for (auto it = entropy_changes.end() - window; it != entropy_changes.end(); ++it) {
    const double change = std::abs(*it);
    if (change >= tau_single) return false;
    sum += change;
  }
  return sum < tau_sum;
}

EpisodeConfig EpisodeConfig::for_shelf(const ShelfSpec& shelf) {
  EpisodeConfig config;
  config.workspace = Workspace::for_shelf(shelf);
  return config;
}

void EpisodeTrace::write_jsonl(std::ostream& os) const {
  int index = 0;
  for (const auto& s : steps) {
    const nlohmann::json line = {
        {"step", index++},
        {"bootstrap", s.bootstrap},
        {"pose", {s.pose.x, s.pose.y, s.pose.z, s.pose.pitch, s.pose.yaw}},
        {"unknown_before", s.unknown_before},
        {"unknown_after", s.unknown_after},
        {"entropy_before", s.entropy_before},
        {"entropy_after", s.entropy_after},
        {"info_gain", s.info_gain},
        {"motion_cost", s.cost},
        {"reward", s.reward},
        {"collision", s.collision},
    };
    os << line.dump() << '\n';
  }
}

std::array<CameraPose, 3> bootstrap_poses(const ShelfSpec& shelf, const Workspace& ws) {
  const double b = shelf.board_height;
  auto clamp_pose = [&ws](CameraPose p) {
    p.x = std::clamp(p.x, ws.lo.x(), ws.hi.x());
    p.y = std::clamp(p.y, ws.lo.y(), ws.hi.y());
    p.z = std::clamp(p.z, ws.lo.z(), ws.hi.z());
    p.pitch = std::clamp(p.pitch, ws.pitch_min, ws.pitch_max);
    p.yaw = std::clamp(p.yaw, ws.yaw_min, ws.yaw_max);
    return p;
  };

  CameraPose center;
  center.x = -0.25;
  center.y = 0.5 * shelf.width;
  center.z = shelf.top_z() + 0.05;
  center.pitch = std::atan2(b - center.z, 0.5 * shelf.depth - center.x);
  center.yaw = 0.0;

  auto corner = [&](double y, double target_y) {
    CameraPose p;
    p.x = ws.hi.x() - 0.15;
    p.y = y;
    p.z = b + 0.5 * shelf.height;
    p.pitch = deg2rad(-15.0);
    p.yaw = std::atan2(target_y - y, shelf.depth - p.x);
    return clamp_pose(p);
  };

  // Right corner (y = 0 side) looks at the back-left corner and vice versa.
  return {clamp_pose(center), corner(ws.lo.y(), shelf.width), corner(ws.hi.y(), 0.0)};
}

IntegrationStats observe(HeightMap& map, const SceneState& scene, const CameraPose& pose,
                         const EpisodeConfig& config) {
  const DepthImage img = render_depth(scene, pose, config.camera, config.workspace);
  const std::vector<Vec3> cloud = depth_to_pointcloud(img, pose, config.camera);
  return integrate(map, cloud, config.map);
}

Observation build_observation(const HeightMap& map, const MapParams& params,
                              const CameraPose& last_action, double info_gain,
                              double cost, bool collision_or_drop) {
  Observation obs;
  auto& v = obs.values;
  const auto features = pooled_features(map);
  std::copy(features.begin(), features.end(), v.begin() + Observation::kFeatures);
  v[Observation::kLastAction + 0] = last_action.x;
  v[Observation::kLastAction + 1] = last_action.y;
  v[Observation::kLastAction + 2] = last_action.z;
  v[Observation::kLastAction + 3] = last_action.pitch;
  v[Observation::kLastAction + 4] = last_action.yaw;
  v[Observation::kInfoGain] = info_gain;
  v[Observation::kMotionCost] = cost;
  v[Observation::kCollisionFlag] = collision_or_drop ? 1.0 : 0.0;
  const UnknownRegion region = largest_unknown_center(map, params);
  v[Observation::kUnknownCenter + 0] = region.center.x();
  v[Observation::kUnknownCenter + 1] = region.center.y();
  v[Observation::kUnknownCenter + 2] = region.center.z();
  return obs;
}

Episode::Episode(SceneState scene, EpisodeConfig config)
    : scene_(std::move(scene)),
      config_(std::move(config)),
      map_(scene_.shelf, config_.map.cell_size),
      rng_(config_.seed) {
  if (!config_.map.valid()) throw Error("Episode: invalid map parameters");
}

Episode::Episode(SceneState scene, HeightMap map, const CameraPose& last_pose,
                 EpisodeConfig config)
    : scene_(std::move(scene)),
      config_(std::move(config)),
      map_(std::move(map)),
      last_pose_(last_pose),
      has_pose_(true),
      rng_(config_.seed) {
  if (!config_.map.valid()) throw Error("Episode: invalid map parameters");
}

Observation Episode::bootstrap() {
  if (has_pose_ || !trace_.steps.empty()) {
    throw Error("Episode::bootstrap: map already holds observations");
  }
  for (const CameraPose& pose : bootstrap_poses(scene_.shelf, config_.workspace)) {
    StepRecord rec;
    rec.pose = pose;
    rec.bootstrap = true;
    rec.unknown_before = unknown_count();
    rec.entropy_before = current_entropy();
    observe(map_, scene_, pose, config_);
    rec.unknown_after = unknown_count();
    rec.entropy_after = current_entropy();
    rec.info_gain = information_gain(rec.unknown_before, rec.unknown_after);
    rec.cost = has_pose_ ? motion_cost(last_pose_, pose) : 0.0;
    trace_.steps.push_back(rec);
    last_pose_ = pose;
    has_pose_ = true;
    last_ig_ = rec.info_gain;
    last_cost_ = rec.cost;
  }
  last_flag_ = false;
  return observation();
}

StepResult Episode::step(const CameraPose& pose) {
  if (done_) throw Error("Episode::step: episode is done");

  StepRecord rec;
  rec.pose = pose;
  rec.unknown_before = unknown_count();
  rec.entropy_before = current_entropy();
  rec.cost = has_pose_ ? motion_cost(last_pose_, pose) : 0.0;

  bool collision = !pose_valid(pose, config_.workspace);
  if (!collision && config_.collision_probability > 0.0) {
    collision = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) <
                config_.collision_probability;
  }
  if (!collision) observe(map_, scene_, pose, config_);

  rec.unknown_after = unknown_count();
  rec.entropy_after = current_entropy();
  rec.info_gain = information_gain(rec.unknown_before, rec.unknown_after);
  rec.collision = collision;

  const bool flag = collision || pending_drop_;
  pending_drop_ = false;
  rec.reward = step_reward(config_.reward, rec.info_gain, rec.cost, flag);
  trace_.steps.push_back(rec);

  last_pose_ = pose;
  has_pose_ = true;
  last_ig_ = rec.info_gain;
  last_cost_ = rec.cost;
  last_flag_ = flag;

  entropy_changes_.push_back(rec.entropy_before - rec.entropy_after);
  done_ = collision || config_.termination.should_stop(entropy_changes_);
  return {observation(), rec.reward, done_};
}

Observation Episode::observation() const {
  return build_observation(map_, config_.map, last_pose_, last_ig_, last_cost_, last_flag_);
}

EpisodeTrace replay(const SceneState& scene, const EpisodeConfig& config,
                    const EpisodeTrace& trace) {
  Episode ep(scene, config);
  ep.bootstrap();
  for (const auto& s : trace.steps) {
    if (s.bootstrap) continue;
    if (ep.done()) break;
    ep.step(s.pose);
  }
  return ep.trace();
}

}  // namespace vpush
