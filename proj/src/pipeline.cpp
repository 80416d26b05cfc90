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

#include "vpush/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <thread>

namespace vpush {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

struct Timing {
  double plan_ms = 0.0;
  int plan_steps = 0;
  double push_ms = 0.0;
  int selections = 0;
};

int run_vpp(Episode& episode, ViewPlanner& planner, int budget, Timing& timing) {
  planner.begin_episode(episode.map(), episode.config().map);
  int steps = 0;
  while (!episode.done() && steps < budget) {
    const auto t0 = Clock::now();
    const CameraPose pose = planner.next(episode.map(), episode.config().map, episode.last_pose());
    timing.plan_ms += elapsed_ms(t0);
    ++timing.plan_steps;
    episode.step(pose);
    ++steps;
  }
  return steps;
}

struct Choice {
  PushCandidate candidate;
  double score = 0.0;
  PushOutcome outcome;
};

// Picks a push. Candidates that no longer touch an object are skipped.
std::optional<Choice> choose_push(const SceneState& scene, const HeightMap& map,
                                  const std::vector<PushCandidate>& candidates,
                                  const EpisodeConfig& episode, const PushConfig& config,
                                  PushSelectionMode mode, std::mt19937_64& rng) {
  const PushScorer scorer(scene, map, episode, config);
  if (mode == PushSelectionMode::scored) {
    auto best = select_best_push(scorer, candidates);
    if (!best) return std::nullopt;
    return Choice{candidates[best->index], best->score.score, std::move(best->score.outcome)};
  }
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i : order) {
    PushScore s = scorer.score(candidates[i]);
    if (s.valid) return Choice{candidates[i], s.score, std::move(s.outcome)};
  }
  return std::nullopt;
}

}  // namespace

bool PipelineParams::valid() const {
  return tau_push > 0.0 && max_iterations >= 0 && push_length >= 0.0 && lambda >= 0.0 &&
         drop_penalty >= 0.0 && n_candidates >= 1 && vpp_step_budget >= 0 &&
         min_objects >= 0 && min_objects <= max_objects && shelf.valid() && map.valid() &&
         camera.valid();
}

SceneState pipeline_scene(std::uint64_t seed, const PipelineParams& params) {
  const auto span = static_cast<std::uint64_t>(params.max_objects - params.min_objects + 1);
  const int n = params.min_objects + static_cast<int>(mix_seed(seed, 0) % span);
  return sample_scene(seed, n, params.shelf);
}

EpisodeConfig pipeline_episode_config(const PipelineParams& params, std::uint64_t seed) {
  EpisodeConfig config = EpisodeConfig::for_shelf(params.shelf);
  config.map = params.map;
  config.camera = params.camera;
  config.termination.enabled = params.use_termination;
  config.seed = mix_seed(seed, 1);
  return config;
}

PipelineResult run_pipeline(std::uint64_t seed, const PipelineParams& params) {
  if (!params.valid()) throw Error("run_pipeline: invalid parameters");
  return run_pipeline(pipeline_scene(seed, params), seed, params);
}

PipelineResult run_pipeline(SceneState scene, std::uint64_t seed, const PipelineParams& params) {
  if (!params.valid()) throw Error("run_pipeline: invalid parameters");
  if (!(scene.shelf == params.shelf)) throw Error("run_pipeline: scene shelf differs from params");
  PipelineResult result;
  PipelineRow& row = result.row;
  row.seed = seed;

  result.initial_scene = scene;
  row.objects = static_cast<int>(scene.objects.size());

  const EpisodeConfig config = pipeline_episode_config(params, seed);
  PlannerConfig planner_config;
  planner_config.kind = params.planner;
  planner_config.n_candidates = params.n_candidates;
  planner_config.reward = config.reward;
  ViewPlanner planner(planner_config, config.workspace, mix_seed(seed, 2));
  std::mt19937_64 push_rng(mix_seed(seed, 3));
  Timing timing;

  Episode episode(scene, config);
  episode.bootstrap();
  row.entropy_bootstrap = episode.current_entropy();
  row.vpp_steps = run_vpp(episode, planner, params.vpp_step_budget, timing);
  row.total_steps = row.vpp_steps;
  row.entropy_vpp = episode.current_entropy();
  result.phases.push_back(episode.trace());

  PushConfig push_config;
  push_config.length = params.push_length;
  push_config.lambda = params.lambda;
  push_config.drop_penalty = params.drop_penalty;

  while (params.enable_push && row.iterations < params.max_iterations) {
    const HeightMap& map = episode.map();
    const std::vector<PushCandidate> candidates = sample_candidates(map, config.map, push_config);
    const auto t0 = Clock::now();
    std::optional<Choice> choice = choose_push(scene, map, candidates, config, push_config,
                                               params.push_selection, push_rng);
    timing.push_ms += elapsed_ms(t0);
    ++timing.selections;
    if (!choice) break;

    PushRecord record;
    record.candidate = choice->candidate;
    record.candidates = static_cast<int>(candidates.size());
    record.score = choice->score;
    record.entropy_before = episode.current_entropy();
    record.outcome = std::move(choice->outcome);

    scene = record.outcome.scene_after;
    ++row.iterations;
    row.drops += static_cast<int>(record.outcome.drops.size());

    Episode next(scene, episode.map(), episode.last_pose(), config);
    if (!record.outcome.drops.empty()) next.notify_drop();
    const int steps = run_vpp(next, planner, params.vpp_step_budget, timing);
    row.total_steps += steps;
    record.entropy_after = next.current_entropy();
    result.phases.push_back(next.trace());
    const double gain = record.entropy_before - record.entropy_after;
    result.pushes.push_back(std::move(record));
    episode = std::move(next);
    if (gain <= params.tau_push) break;
  }

  row.entropy_final = episode.current_entropy();
  auto relative = [](double from, double to) { return from > 0.0 ? (from - to) / from : 0.0; };
  row.reduction_vpp = relative(row.entropy_bootstrap, row.entropy_vpp);
  row.reduction_total = relative(row.entropy_bootstrap, row.entropy_final);
  row.reduction_push = relative(row.entropy_vpp, row.entropy_final);

  const DisplacementReport disp = displacement(result.initial_scene, scene);
  row.displacement_mean_cm = 100.0 * disp.mean;
  row.displacement_total_cm = 100.0 * disp.total;
  row.plan_ms = timing.plan_steps > 0 ? timing.plan_ms / timing.plan_steps : 0.0;
  row.push_ms = timing.selections > 0 ? timing.push_ms / timing.selections : 0.0;
  result.final_scene = std::move(scene);
  return result;
}

std::vector<PipelineRow> run_batch(const std::vector<std::uint64_t>& seeds,
                                   const PipelineParams& params, int jobs) {
  std::vector<PipelineRow> rows(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        rows[i] = run_pipeline(seeds[i], params).row;
      } catch (const std::exception& e) {
        rows[i] = PipelineRow{};
        rows[i].seed = seeds[i];
        rows[i].error = e.what();
      }
    }
  };
  const int n = std::clamp(jobs, 1, std::max<int>(1, static_cast<int>(seeds.size())));
  std::vector<std::thread> threads;
  for (int t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return rows;
}

}  // namespace vpush
