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

#include "vpush/planner.hpp"

#include <algorithm>
#include <cmath>

namespace vpush {

std::string to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::fixed3p: return "fixed3p";
    case PlannerKind::random: return "random";
    case PlannerKind::greedy: return "greedy";
    case PlannerKind::global: return "global";
  }
  return "unknown";
}

std::optional<PlannerKind> parse_planner(std::string_view name) {
  for (PlannerKind k : {PlannerKind::fixed3p, PlannerKind::random, PlannerKind::greedy,
                        PlannerKind::global}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

VisibilityPredictor::VisibilityPredictor(const HeightMap& map, const MapParams& params,
                                         const CameraIntrinsics& intr)
    : map_(map), intr_(intr) {
  const auto n = static_cast<std::size_t>(map.size());
  blocking_.assign(n, 0);
  unknown_.assign(n, 0);
  for (int i = 0; i < map.size(); ++i) {
    const CellState s = map.state(i, params);
    blocking_[static_cast<std::size_t>(i)] = s == CellState::occupied;
    unknown_[static_cast<std::size_t>(i)] = s == CellState::unknown;
  }
  occupied_floor_ = params.occupied_height;
}

std::optional<int> VisibilityPredictor::board_cell(const Vec3& o, const Vec3& d) const {
  const ShelfSpec& shelf = map_.shelf();
  const double b = shelf.board_height;
  const Vec3 lo(0.0, 0.0, b);
  const Vec3 hi(shelf.depth, shelf.width, shelf.top_z());

  double t_enter = -kInf;
  double t_exit = kInf;
  int enter_axis = -1;
  int exit_axis = -1;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(d[k]) < 1e-12) {
      if (o[k] < lo[k] || o[k] > hi[k]) return std::nullopt;
      continue;
    }
    double e0 = (lo[k] - o[k]) / d[k];
    double e1 = (hi[k] - o[k]) / d[k];
    if (e0 > e1) std::swap(e0, e1);
    if (e0 > t_enter) {
      t_enter = e0;
      enter_axis = k;
    }
    if (e1 < t_exit) {
      t_exit = e1;
      exit_axis = k;
    }
  }
  if (t_enter > t_exit || t_exit <= 0.0) return std::nullopt;
  if (t_enter > 0.0) {
    // Only the open front admits rays from outside.
    if (enter_axis != 0 || d.x() <= 0.0) return std::nullopt;
  } else {
    t_enter = 0.0;
  }
  if (exit_axis != 2 || d.z() >= 0.0 || t_exit > intr_.max_range) return std::nullopt;

  const double cell = map_.cell_size();
  const Vec3 p = o + t_enter * d;
  int r = std::clamp(static_cast<int>(std::floor(p.x() / cell)), 0, map_.rows() - 1);
  int c = std::clamp(static_cast<int>(std::floor(p.y() / cell)), 0, map_.cols() - 1);
  const int step_r = d.x() > 0.0 ? 1 : (d.x() < 0.0 ? -1 : 0);
  const int step_c = d.y() > 0.0 ? 1 : (d.y() < 0.0 ? -1 : 0);
  auto boundary = [&](double origin, double dk, int index, int step) {
    if (step == 0) return kInf;
    return ((step > 0 ? index + 1 : index) * cell - origin) / dk;
  };
  double next_r = boundary(o.x(), d.x(), r, step_r);
  double next_c = boundary(o.y(), d.y(), c, step_c);
  const double delta_r = step_r != 0 ? cell / std::abs(d.x()) : kInf;
  const double delta_c = step_c != 0 ? cell / std::abs(d.y()) : kInf;

  double ta = t_enter;
  while (true) {
    const double tb = std::min({next_r, next_c, t_exit});
    const int i = map_.index(r, c);
    if (blocking_[static_cast<std::size_t>(i)]) {
      const double z_low = o.z() + std::max(ta, tb) * d.z();  // d.z() < 0 here
      if (z_low <= b + std::max(map_.height(i), occupied_floor_)) return std::nullopt;
    }
    if (tb >= t_exit) return i;
    ta = tb;
    if (next_r < next_c) {
      r += step_r;
      next_r += delta_r;
    } else {
      c += step_c;
      next_c += delta_c;
    }
    if (!map_.in_bounds(r, c)) return i;
  }
}

std::vector<int> VisibilityPredictor::visible_unknown(const CameraPose& pose) const {
  const CameraFrame frame = camera_frame(pose);
  std::vector<std::uint8_t> seen(unknown_.size(), 0);
  for (const Vec3& dir : pixel_rays(frame, intr_)) {
    if (auto i = board_cell(frame.origin, dir)) {
      if (unknown_[static_cast<std::size_t>(*i)]) seen[static_cast<std::size_t>(*i)] = 1;
    }
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

CameraPose sample_pose(const Workspace& ws, std::mt19937_64& rng) {
  auto uniform = [&rng](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  CameraPose p;
  p.x = uniform(ws.lo.x(), ws.hi.x());
  p.y = uniform(ws.lo.y(), ws.hi.y());
  p.z = uniform(ws.lo.z(), ws.hi.z());
  p.pitch = uniform(ws.pitch_min, ws.pitch_max);
  p.yaw = uniform(ws.yaw_min, ws.yaw_max);
  return p;
}

std::size_t greedy_choice(const HeightMap& map, const MapParams& params,
                          const std::vector<CameraPose>& candidates,
                          const CameraPose& current, const RewardParams& reward,
                          const CameraIntrinsics& intr) {
  if (candidates.empty()) throw Error("greedy_choice: no candidate poses");
  const VisibilityPredictor predictor(map, params, intr);
  const int unknown = map.unknown_count(params);
  std::size_t best = 0;
  double best_value = -kInf;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto visible = static_cast<double>(predictor.visible_unknown(candidates[k]).size());
    const double gain = unknown > 0 ? visible / unknown : 0.0;
    const double value = reward.beta * gain - reward.alpha * motion_cost(current, candidates[k]);
    if (value > best_value) {
      best_value = value;
      best = k;
    }
  }
  return best;
}

std::vector<std::size_t> coverage_order(const std::vector<std::vector<int>>& sets) {
  std::vector<std::size_t> order;
  if (sets.empty()) return order;
  int max_cell = 0;
  for (const auto& s : sets) {
    for (int i : s) max_cell = std::max(max_cell, i);
  }
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(max_cell) + 1, 0);
  std::vector<bool> used(sets.size(), false);
  while (true) {
    std::size_t best = sets.size();
    int best_gain = 0;
    for (std::size_t k = 0; k < sets.size(); ++k) {
      if (used[k]) continue;
      int gain = 0;
      for (int i : sets[k]) gain += covered[static_cast<std::size_t>(i)] == 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = k;
      }
    }
    if (best == sets.size()) break;
    used[best] = true;
    order.push_back(best);
    for (int i : sets[best]) covered[static_cast<std::size_t>(i)] = 1;
  }
  if (order.empty()) order.push_back(0);
  return order;
}

ViewPlanner::ViewPlanner(PlannerConfig config, Workspace ws, std::uint64_t seed)
    : config_(config), ws_(ws), rng_(seed) {
  if (!ws_.nonempty()) throw Error("ViewPlanner: empty workspace");
  if (config_.n_candidates < 1) throw Error("ViewPlanner: need at least one candidate");
}

std::vector<CameraPose> ViewPlanner::sample_valid(int n) {
  std::vector<CameraPose> poses;
  poses.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const CameraPose p = sample_pose(ws_, rng_);
    if (pose_valid(p, ws_)) poses.push_back(p);
  }
  if (poses.empty()) throw Error("ViewPlanner: no valid candidate poses");
  return poses;
}

void ViewPlanner::begin_episode(const HeightMap& map, const MapParams& params) {
  sequence_.clear();
  cursor_ = 0;
  if (config_.kind == PlannerKind::fixed3p) {
    const auto views = bootstrap_poses(map.shelf(), ws_);
    sequence_.assign(views.begin(), views.end());
  } else if (config_.kind == PlannerKind::global) {
    const std::vector<CameraPose> pool = sample_valid(config_.n_candidates);
    const VisibilityPredictor predictor(map, params, config_.prediction);
    std::vector<std::vector<int>> sets;
    sets.reserve(pool.size());
    for (const CameraPose& p : pool) sets.push_back(predictor.visible_unknown(p));
    for (std::size_t k : coverage_order(sets)) sequence_.push_back(pool[k]);
  }
}

CameraPose ViewPlanner::next(const HeightMap& map, const MapParams& params,
                             const CameraPose& current) {
  switch (config_.kind) {
    case PlannerKind::random:
      return sample_valid(1).front();
    case PlannerKind::greedy: {
      const std::vector<CameraPose> poses = sample_valid(config_.n_candidates);
      return poses[greedy_choice(map, params, poses, current, config_.reward,
                                 config_.prediction)];
    }
    case PlannerKind::fixed3p:
    case PlannerKind::global:
      break;
  }
  if (sequence_.empty()) begin_episode(map, params);
  if (config_.kind == PlannerKind::fixed3p) {
    return sequence_[cursor_++ % sequence_.size()];
  }
  // Once the sequence is used up the last pose repeats.
  const CameraPose p = sequence_[std::min(cursor_, sequence_.size() - 1)];
  ++cursor_;
  return p;
}

CameraPose plan_next_view(PlannerKind kind, const HeightMap& map, const MapParams& params,
                          const Workspace& ws, int n_candidates, const CameraPose& current,
                          std::uint64_t seed) {
  PlannerConfig config;
  config.kind = kind;
  config.n_candidates = n_candidates;
  ViewPlanner planner(config, ws, seed);
  planner.begin_episode(map, params);
  return planner.next(map, params, current);
}

}  // namespace vpush
