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

#ifndef VPUSH_PUSH_HPP
#define VPUSH_PUSH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "vpush/episode.hpp"
#include "vpush/mapping.hpp"
#include "vpush/scene.hpp"

namespace vpush {

inline constexpr int kPushDirections = 8;

enum class ChainSolver {
  front_to_back,  ///< contacts resolved in order of chain distance
  fixed_point,    ///< relax contact distances until nothing changes
};

struct PushConfig {
  int rays_per_origin = 25;
  double origin_setback = 0.10;      ///< ray origins sit this far in front of the opening
  double length = 0.05;
  double max_contact_height = 0.10;  ///< cap on the push start height above the board
  double contact_tolerance = 0.008;  ///< max gap between push start and object footprint
  double lambda = 0.5;               ///< score penalty per meter of displacement
  double drop_penalty = 1.0;         ///< score penalty per dropped object
  ChainSolver chain_solver = ChainSolver::front_to_back;
};

struct PushCandidate {
  Vec3 start = Vec3::Zero();
  int direction = 0;  ///< multiples of 45 degrees, 0 points into the shelf (+x)
  double length = 0.05;
  int cell = -1;      ///< map cell the contact came from

  double angle() const { return direction * kPi / 4.0; }
  Vec2 unit() const;
  bool operator==(const PushCandidate&) const = default;
};

/// Ray origins in front of the opening: left, center, right.
std::vector<Vec2> push_ray_origins(const ShelfSpec& shelf, const PushConfig& config);

/// First occupied cell along each ray, deduplicated in discovery order.
std::vector<int> push_contact_cells(const HeightMap& map, const MapParams& params,
                                    const PushConfig& config);

/// Eight candidates per contact cell.
std::vector<PushCandidate> sample_candidates(const HeightMap& map, const MapParams& params,
                                             const PushConfig& config);

/// Map patch in the push frame: the push start sits at the patch center and
/// the push direction points along +x (increasing row).
struct PushMap {
  int rows = 0;
  int cols = 0;
  double cell_size = 0.0;
  std::vector<double> probability;
  std::vector<double> height;
};

/// Bilinear resampling of the map into the push frame; samples falling
/// outside the map read as unknown. Throws Error when the start lies outside.
PushMap make_push_map(const HeightMap& map, const PushCandidate& candidate);

struct PushOutcome {
  enum class Status { ok, no_contact };

  Status status = Status::ok;
  int contacted_id = -1;
  double travel = 0.0;                 ///< distance the contacted object moved
  std::map<int, double> displacement;  ///< every object of the input scene
  std::vector<int> drops;
  bool wall_collision = false;
  double delta_entropy = 0.0;          ///< filled in by scoring
  SceneState scene_after;

  double total_displacement() const;
};

/// Quasi-static translation-only push with contact chaining. Objects stop
/// at the side walls and the back panel; objects whose center leaves the
/// open front fall off and are removed.
PushOutcome execute_push(const SceneState& scene, const PushCandidate& candidate,
                         const PushConfig& config = {});

struct PushScore {
  bool valid = false;  ///< false when the candidate touches no object
  double score = 0.0;
  int revealed = 0;    ///< unknown cells before minus after
  PushOutcome outcome;
};

/// Rollout scoring: executes a candidate on a copy of the scene, re-observes
/// from the front-center view into a copy of the map, and trades revealed
/// area against displacement and drops. The scene and map must outlive the
/// scorer; neither is modified.
class PushScorer {
 public:
  PushScorer(const SceneState& scene, const HeightMap& map, const EpisodeConfig& episode,
             const PushConfig& config);

  PushScore score(const PushCandidate& candidate) const;

  /// Front-center re-render of a pushed scene, recomputing only pixels whose
  /// rays can touch a moved object.
  DepthImage rerender(const PushOutcome& outcome) const;

  const CameraPose& view() const { return view_; }

 private:
  // Calls `f(pixel, new_range)` for every pixel whose ray can touch an
  // object that moved or dropped.
  template <class F>
  void for_each_touched(const PushOutcome& outcome, F&& f) const;

  const SceneState& scene_;
  const HeightMap& map_;
  EpisodeConfig episode_;
  PushConfig config_;
  CameraPose view_;
  std::vector<Vec3> rays_;
  DepthImage base_image_;
  int unknown_before_ = 0;
  // Evidence of the unchanged scene seen from the view, per pixel and cell.
  std::vector<int> base_cell_;
  std::vector<std::uint8_t> base_hit_;
  std::vector<int> base_hits_;
  std::vector<int> base_misses_;
  int unknown_base_ = 0;  // after folding in the unchanged view
};

PushScore score_push(const SceneState& scene, const HeightMap& map,
                     const PushCandidate& candidate, double lambda,
                     const EpisodeConfig& episode, PushConfig config = {});

struct PushSelection {
  std::size_t index = 0;
  PushScore score;
};

/// Highest-scoring valid candidate; the earliest wins ties.
std::optional<PushSelection> select_best_push(const PushScorer& scorer,
                                              const std::vector<PushCandidate>& candidates);

}  // namespace vpush

#endif  // VPUSH_PUSH_HPP
