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

#ifndef VPUSH_PIPELINE_HPP
#define VPUSH_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vpush/episode.hpp"
#include "vpush/planner.hpp"
#include "vpush/push.hpp"

namespace vpush {

enum class PushSelectionMode { scored, random };

struct PipelineParams {
  double tau_push = 0.01;    ///< stop once a push reveals at most this much entropy
  int max_iterations = 8;    ///< pushes per scene
  double push_length = 0.05;
  double lambda = 0.5;
  double drop_penalty = 1.0;
  PlannerKind planner = PlannerKind::greedy;
  int n_candidates = 64;     ///< sampled poses per step
  int vpp_step_budget = 20;  ///< planner steps per episode
  bool use_termination = true;
  bool enable_push = true;
  PushSelectionMode push_selection = PushSelectionMode::scored;
  int min_objects = 8;
  int max_objects = 10;
  ShelfSpec shelf;
  MapParams map;
  CameraIntrinsics camera;

  bool valid() const;
};

/// Per-scene results. Entropy reductions are fractions.
struct PipelineRow {
  std::uint64_t seed = 0;
  int objects = 0;
  double entropy_bootstrap = 0.0;
  double entropy_vpp = 0.0;      ///< after the first viewpoint-planning phase
  double entropy_final = 0.0;
  double reduction_vpp = 0.0;    ///< vs bootstrap
  double reduction_total = 0.0;  ///< vs bootstrap
  double reduction_push = 0.0;   ///< vs the post-VPP map
  int iterations = 0;            ///< pushes executed
  int drops = 0;
  double displacement_mean_cm = 0.0;  ///< initial vs final scene, surviving objects
  double displacement_total_cm = 0.0;
  int vpp_steps = 0;
  int total_steps = 0;
  // Timing; excluded from determinism checks.
  double plan_ms = 0.0;  ///< mean per planner step
  double push_ms = 0.0;  ///< mean per push selection
  std::string error;
};

struct PushRecord {
  PushCandidate candidate;
  int candidates = 0;
  double score = 0.0;
  double entropy_before = 0.0;  ///< before the push
  double entropy_after = 0.0;   ///< after the following viewpoint-planning phase
  PushOutcome outcome;
};

struct PipelineResult {
  PipelineRow row;
  std::vector<EpisodeTrace> phases;  ///< first phase includes the bootstrap
  std::vector<PushRecord> pushes;
  SceneState initial_scene;
  SceneState final_scene;
};

/// Scene drawn for `seed` with the configured object-count range.
SceneState pipeline_scene(std::uint64_t seed, const PipelineParams& params);

EpisodeConfig pipeline_episode_config(const PipelineParams& params, std::uint64_t seed);

/// Bootstrap, viewpoint planning, then alternating push selection and
/// re-planning until a push stops paying off, candidates run out or the
/// iteration cap is hit. Module errors propagate.
PipelineResult run_pipeline(std::uint64_t seed, const PipelineParams& params);

/// Same, on a given scene; `seed` drives the planner and push selection.
PipelineResult run_pipeline(SceneState scene, std::uint64_t seed, const PipelineParams& params);

/// Runs every seed, catching per-scene errors into the row. Rows come back
/// in seed order whatever the number of worker threads.
std::vector<PipelineRow> run_batch(const std::vector<std::uint64_t>& seeds,
                                   const PipelineParams& params, int jobs = 1);

}  // namespace vpush

#endif  // VPUSH_PIPELINE_HPP
