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

// Command-line front end: run, sweep, export-pushmaps, render.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "vpush/io.hpp"
#include "vpush/pipeline.hpp"
#include "vpush/report.hpp"

namespace fs = std::filesystem;
using namespace vpush;

namespace {

struct Common {
  PipelineParams params;
  std::string planner = "greedy";
  std::string selection = "scored";
  bool no_push = false;
  bool no_termination = false;
  std::uint64_t seed = 0;
  int scenes = 100;
};

void add_params(CLI::App* app, Common& c) {
  PipelineParams& p = c.params;
  app->add_option("--seed", c.seed, "Scene seed (first seed for batches)");
  app->add_option("--planner", c.planner, "Viewpoint planner")
      ->check(CLI::IsMember({"fixed3p", "random", "greedy", "global"}));
  app->add_option("--push-length", p.push_length, "Push length in meters");
  app->add_flag("--no-push", c.no_push, "Viewpoint planning only");
  app->add_option("--push-selection", c.selection, "Push selection")
      ->check(CLI::IsMember({"scored", "random"}));
  app->add_option("--tau-push", p.tau_push, "Minimum entropy reduction to keep pushing");
  app->add_option("--max-iterations", p.max_iterations, "Maximum pushes per scene");
  app->add_option("--lambda", p.lambda, "Displacement penalty per meter");
  app->add_option("--drop-penalty", p.drop_penalty, "Penalty per dropped object");
  app->add_option("--n-candidates", p.n_candidates, "Sampled poses per planner step");
  app->add_option("--vpp-steps", p.vpp_step_budget, "Planner steps per episode");
  app->add_flag("--no-termination", c.no_termination, "Always use the full step budget");
  app->add_option("--min-objects", p.min_objects, "Fewest objects per scene");
  app->add_option("--max-objects", p.max_objects, "Most objects per scene");
  app->add_option("--cell-size", p.map.cell_size, "Map cell edge in meters");
  app->add_option("--tau-unknown", p.map.tau_unknown, "Half-width of the unknown probability band");
  app->add_option("--hit-log-odds", p.map.hit_log_odds, "Log-odds added per above-board return");
  app->add_option("--miss-log-odds", p.map.miss_log_odds, "Log-odds added per board return");
  app->add_option("--clamp-log-odds", p.map.clamp_log_odds, "Log-odds bound");
  app->add_option("--occupied-height", p.map.occupied_height, "Height above the board that counts as a hit");
  app->add_option("--board-tolerance", p.map.board_tolerance, "Distance from the board that counts as free");
  app->add_option("--image-width", p.camera.width, "Sensor width in pixels");
  app->add_option("--image-height", p.camera.height, "Sensor height in pixels");
}

PipelineParams resolve(const Common& c) {
  PipelineParams p = c.params;
  p.planner = *parse_planner(c.planner);
  p.enable_push = !c.no_push;
  p.use_termination = !c.no_termination;
  p.push_selection = c.selection == "random" ? PushSelectionMode::random : PushSelectionMode::scored;
  if (!p.valid()) throw Error("invalid parameters");
  return p;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, int n) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n; ++i) seeds.push_back(first + static_cast<std::uint64_t>(i));
  return seeds;
}

void print_row(const PipelineRow& r) {
  std::cout << "seed " << r.seed << ": objects " << r.objects << ", entropy "
            << r.entropy_bootstrap << " -> " << r.entropy_vpp << " -> " << r.entropy_final
            << ", pushes " << r.iterations << ", drops " << r.drops << ", displacement "
            << r.displacement_mean_cm << " cm\n";
}

int cmd_run(const Common& c, const std::string& out) {
  const PipelineParams p = resolve(c);
  const PipelineResult result = run_pipeline(c.seed, p);
  for (std::size_t k = 0; k < result.phases.size(); ++k) {
    std::cout << "phase " << k << '\n';
    result.phases[k].write_jsonl(std::cout);
    if (k < result.pushes.size()) {
      const PushRecord& push = result.pushes[k];
      std::cout << "push start (" << push.candidate.start.x() << ", "
                << push.candidate.start.y() << ", " << push.candidate.start.z()
                << ") direction " << push.candidate.direction << " score " << push.score
                << " of " << push.candidates << " candidates, entropy "
                << push.entropy_before << " -> " << push.entropy_after << '\n';
    }
  }
  print_row(result.row);
  if (!out.empty()) {
    fs::create_directories(out);
    for (std::size_t k = 0; k < result.phases.size(); ++k) {
      auto os = open_output(fs::path(out) / ("phase_" + std::to_string(k) + ".jsonl"));
      result.phases[k].write_jsonl(os);
    }
    BenchReport report = make_report({{planner_label(p.planner), {result.row}, {}}}, {});
    auto os = open_output(fs::path(out) / "row.csv");
    write_rows_csv(os, report);
  }
  return 0;
}

int cmd_sweep(const Common& c, std::vector<std::string> methods, int jobs,
              const std::string& out, bool timing) {
  const PipelineParams base = resolve(c);
  if (methods.empty()) methods.push_back(c.planner);
  const std::vector<std::uint64_t> seeds = seed_range(c.seed, c.scenes);
  std::vector<MethodResult> results;
  for (const std::string& name : methods) {
    const auto kind = parse_planner(name);
    if (!kind) throw Error("unknown planner " + name);
    PipelineParams p = base;
    p.planner = *kind;
    std::cerr << "running " << name << " on " << seeds.size() << " scenes\n";
    results.push_back({planner_label(*kind), run_batch(seeds, p, jobs), {}});
  }
  const BenchReport report = make_report(
      std::move(results),
      {"reduction_vpp", "reduction_total", "reduction_push", "displacement_mean_cm"});
  if (out.empty()) {
    write_summary_csv(std::cout, report);
  } else {
    const fs::path prefix(out);
    if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
    auto rows = open_output(prefix.string() + "_rows.csv");
    write_rows_csv(rows, report, timing);
    auto summary = open_output(prefix.string() + "_summary.csv");
    write_summary_csv(summary, report);
    auto json = open_output(prefix.string() + ".json");
    json << to_json(report).dump(2) << '\n';
    write_summary_csv(std::cout, report);
  }
  for (const MethodResult& m : report.methods) {
    for (const PipelineRow& r : m.rows) {
      if (!r.error.empty()) std::cerr << m.label << " seed " << r.seed << ": " << r.error << '\n';
    }
  }
  return 0;
}

int cmd_export(const Common& c, const std::string& out, int max_per_scene) {
  PipelineParams p = resolve(c);
  p.enable_push = false;
  fs::create_directories(out);
  auto meta = open_output(fs::path(out) / "labels.jsonl");
  PushConfig push_config;
  push_config.length = p.push_length;
  push_config.lambda = p.lambda;
  push_config.drop_penalty = p.drop_penalty;
  for (std::uint64_t seed : seed_range(c.seed, c.scenes)) {
    try {
      const PipelineResult result = run_pipeline(seed, p);
      const EpisodeConfig config = pipeline_episode_config(p, seed);
      Episode episode(result.initial_scene, config);
      episode.bootstrap();
      for (const StepRecord& s : result.phases.front().steps) {
        if (!s.bootstrap) episode.step(s.pose);
      }
      const auto candidates = sample_candidates(episode.map(), config.map, push_config);
      const PushScorer scorer(episode.scene(), episode.map(), config, push_config);
      const int n = std::min<int>(static_cast<int>(candidates.size()), max_per_scene);
      for (int k = 0; k < n; ++k) {
        const PushCandidate& cand = candidates[static_cast<std::size_t>(k)];
        const PushScore score = scorer.score(cand);
        const std::string name = "s" + std::to_string(seed) + "_c" + std::to_string(k);
        const PushMap pm = make_push_map(episode.map(), cand);
        auto prob = open_output(fs::path(out) / (name + "_p.pgm"));
        write_push_map_pgm(prob, pm, MapLayer::probability, p.shelf.height);
        auto height = open_output(fs::path(out) / (name + "_h.pgm"));
        write_push_map_pgm(height, pm, MapLayer::height, p.shelf.height);
        nlohmann::json j = {
            {"name", name},
            {"seed", seed},
            {"start", {cand.start.x(), cand.start.y(), cand.start.z()}},
            {"direction", cand.direction},
            {"length", cand.length},
            {"valid", score.valid},
            {"delta_entropy", score.outcome.delta_entropy},
            {"displacement", score.outcome.total_displacement()},
            {"drop", !score.outcome.drops.empty()},
            {"score", score.score}};
        meta << j.dump() << '\n';
      }
      std::cout << "seed " << seed << ": " << n << " push maps\n";
    } catch (const std::exception& e) {
      std::cerr << "seed " << seed << ": " << e.what() << '\n';
    }
  }
  return 0;
}

int cmd_render(const Common& c, const std::string& out) {
  PipelineParams p = resolve(c);
  fs::create_directories(out);
  const PipelineResult result = run_pipeline(c.seed, p);
  const EpisodeConfig config = pipeline_episode_config(p, c.seed);
  const fs::path dir(out);
  auto scene_before = open_output(dir / "scene_initial.ppm");
  write_scene_ppm(scene_before, result.initial_scene, 200.0);
  auto scene_after = open_output(dir / "scene_final.ppm");
  write_scene_ppm(scene_after, result.final_scene, 200.0);

  Episode episode(result.initial_scene, config);
  episode.bootstrap();
  const auto views = bootstrap_poses(p.shelf, config.workspace);
  for (std::size_t k = 0; k < views.size(); ++k) {
    const DepthImage img = render_depth(result.initial_scene, views[k], config.camera,
                                        config.workspace);
    auto os = open_output(dir / ("depth_bootstrap_" + std::to_string(k) + ".pgm"));
    write_depth_pgm(os, img);
  }
  auto write_maps = [&](const HeightMap& map, const std::string& tag) {
    for (auto [layer, name] : {std::pair{MapLayer::state, "state"},
                               std::pair{MapLayer::probability, "probability"},
                               std::pair{MapLayer::height, "height"}}) {
      auto os = open_output(dir / ("map_" + tag + "_" + name + ".pgm"));
      write_map_pgm(os, map, config.map, layer);
    }
  };
  write_maps(episode.map(), "bootstrap");
  std::cout << "wrote snapshots for seed " << c.seed << " to " << out << '\n';
  print_row(result.row);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viewpoint planning and push simulation for shelf scenes"};
  app.require_subcommand(1);

  Common run_opts;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Run the pipeline on one scene and print its trace");
  add_params(run, run_opts);
  run->add_option("--out", run_out, "Directory for trace files");

  Common sweep_opts;
  std::vector<std::string> methods;
  int jobs = 1;
  std::string sweep_out;
  bool no_timing = false;
  auto* sweep = app.add_subcommand("sweep", "Run a batch of scenes and write a report");
  add_params(sweep, sweep_opts);
  sweep->add_option("--scenes", sweep_opts.scenes, "Number of scenes");
  sweep->add_option("--methods", methods, "Planners to compare; the first is the baseline")
      ->delimiter(',');
  sweep->add_option("--jobs", jobs, "Worker threads");
  sweep->add_option("--out", sweep_out, "Output prefix for CSV and JSON files");
  sweep->add_flag("--no-timing", no_timing, "Leave timing columns out of the rows CSV");

  Common export_opts;
  std::string export_out = "pushmaps";
  int max_per_scene = 64;
  auto* exp = app.add_subcommand("export-pushmaps", "Write labeled push maps");
  add_params(exp, export_opts);
  exp->add_option("--scenes", export_opts.scenes, "Number of scenes");
  exp->add_option("--out", export_out, "Dataset directory");
  exp->add_option("--max-per-scene", max_per_scene, "Candidates written per scene");

  Common render_opts;
  std::string render_out = "snapshots";
  auto* render = app.add_subcommand("render", "Write scene, depth and map snapshots");
  add_params(render, render_opts);
  render->add_option("--out", render_out, "Output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_opts, run_out);
    if (*sweep) return cmd_sweep(sweep_opts, methods, jobs, sweep_out, !no_timing);
    if (*exp) return cmd_export(export_opts, export_out, max_per_scene);
    if (*render) return cmd_render(render_opts, render_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
