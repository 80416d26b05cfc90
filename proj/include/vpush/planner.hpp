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

#ifndef VPUSH_PLANNER_HPP
#define VPUSH_PLANNER_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "vpush/episode.hpp"
#include "vpush/mapping.hpp"
#include "vpush/sensor.hpp"

namespace vpush {

enum class PlannerKind { fixed3p, random, greedy, global };

std::string to_string(PlannerKind kind);
std::optional<PlannerKind> parse_planner(std::string_view name);

/// Intrinsics used for visibility prediction; coarser than the sensor.
inline CameraIntrinsics prediction_intrinsics() {
  CameraIntrinsics intr;
  intr.width = 128;
  intr.height = 96;
  return intr;
}

/// Casts rays into the believed map. Unknown and free cells are
/// transparent, occupied cells block up to their believed height, and the
/// shelf walls bound every ray.
class VisibilityPredictor {
 public:
  VisibilityPredictor(const HeightMap& map, const MapParams& params,
                      const CameraIntrinsics& intr = prediction_intrinsics());

  /// Sorted indices of unknown cells whose board is reached from `pose`.
  std::vector<int> visible_unknown(const CameraPose& pose) const;

  /// Cell whose board a single ray reaches, if any.
  std::optional<int> board_cell(const Vec3& origin, const Vec3& dir) const;

 private:
  const HeightMap& map_;
  CameraIntrinsics intr_;
  std::vector<std::uint8_t> blocking_;  // occupied cells
  std::vector<std::uint8_t> unknown_;
  double occupied_floor_ = 0.0;
};

/// Uniform pose in the workspace box and angle limits.
CameraPose sample_pose(const Workspace& ws, std::mt19937_64& rng);

/// Index of the candidate maximizing beta * predicted gain - alpha * cost,
/// where the predicted gain is the visible-unknown count over the current
/// unknown count. Earliest wins ties. Throws Error on an empty list.
std::size_t greedy_choice(const HeightMap& map, const MapParams& params,
                          const std::vector<CameraPose>& candidates,
                          const CameraPose& current, const RewardParams& reward,
                          const CameraIntrinsics& intr = prediction_intrinsics());

/// Greedy maximum-coverage order over per-pose cell sets: each step takes
/// the pose adding the most uncovered cells, earliest on ties, until no
/// pose adds anything. Always returns at least one pose when `sets` is
/// nonempty.
std::vector<std::size_t> coverage_order(const std::vector<std::vector<int>>& sets);

struct PlannerConfig {
  PlannerKind kind = PlannerKind::greedy;
  int n_candidates = 64;
  RewardParams reward;
  CameraIntrinsics prediction = prediction_intrinsics();
};

/// Stateful scripted planner. `begin_episode` must be called whenever a new
/// episode starts on a (possibly changed) map.
class ViewPlanner {
 public:
  ViewPlanner(PlannerConfig config, Workspace ws, std::uint64_t seed);

  void begin_episode(const HeightMap& map, const MapParams& params);
  CameraPose next(const HeightMap& map, const MapParams& params, const CameraPose& current);

  const PlannerConfig& config() const { return config_; }

 private:
  std::vector<CameraPose> sample_valid(int n);

  PlannerConfig config_;
  Workspace ws_;
  std::mt19937_64 rng_;
  std::vector<CameraPose> sequence_;  // fixed3p and global
  std::size_t cursor_ = 0;
};

/// One-shot convenience wrapper around ViewPlanner.
CameraPose plan_next_view(PlannerKind kind, const HeightMap& map, const MapParams& params,
                          const Workspace& ws, int n_candidates, const CameraPose& current,
                          std::uint64_t seed);

}  // namespace vpush

#endif  // VPUSH_PLANNER_HPP
