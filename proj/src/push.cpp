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

#include "vpush/push.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace vpush {

namespace {

// Walks the grid cells crossed by segment a -> b and returns the first
// occupied one.
std::optional<int> first_occupied_cell(const HeightMap& map, const MapParams& params,
                                       const Vec2& a, const Vec2& b) {
  const double cell = map.cell_size();
  Vec2 dir = b - a;
  const double len = dir.norm();
  if (len <= 0.0) return std::nullopt;
  dir /= len;

  double t0 = 0.0;
  double t1 = len;
  const Vec2 hi(map.rows() * cell, map.cols() * cell);
  for (int k = 0; k < 2; ++k) {
    if (std::abs(dir[k]) < 1e-15) {
      if (a[k] < 0.0 || a[k] > hi[k]) return std::nullopt;
      continue;
    }
    double e0 = (0.0 - a[k]) / dir[k];
    double e1 = (hi[k] - a[k]) / dir[k];
    if (e0 > e1) std::swap(e0, e1);
    t0 = std::max(t0, e0);
    t1 = std::min(t1, e1);
  }
  if (t0 > t1) return std::nullopt;

  // A start on a grid line belongs to the cell the segment moves into.
  const Vec2 p = a + t0 * dir;
  auto first_index = [cell](double v, double d, int n) {
    const double bias = d > 0.0 ? 1e-9 : (d < 0.0 ? -1e-9 : 0.0);
    return std::clamp(static_cast<int>(std::floor(v / cell + bias)), 0, n - 1);
  };
  int r = first_index(p.x(), dir.x(), map.rows());
  int c = first_index(p.y(), dir.y(), map.cols());
  const int step_r = dir.x() > 0.0 ? 1 : (dir.x() < 0.0 ? -1 : 0);
  const int step_c = dir.y() > 0.0 ? 1 : (dir.y() < 0.0 ? -1 : 0);
  auto boundary_t = [&](double origin, double d, int index, int step) {
    if (step == 0) return kInf;
    const double edge = (step > 0 ? index + 1 : index) * cell;
    return (edge - origin) / d;
  };
  double next_r = boundary_t(a.x(), dir.x(), r, step_r);
  double next_c = boundary_t(a.y(), dir.y(), c, step_c);
  const double delta_r = step_r != 0 ? cell / std::abs(dir.x()) : kInf;
  const double delta_c = step_c != 0 ? cell / std::abs(dir.y()) : kInf;

  while (map.in_bounds(r, c)) {
    const int i = map.index(r, c);
    if (map.state(i, params) == CellState::occupied) return i;
    if (std::min(next_r, next_c) > t1) break;
    // Through a grid corner the diagonal neighbours are only touched at a point.
    const bool corner = std::abs(next_r - next_c) <= 1e-9 * cell;
    if (corner) {
      r += step_r;
      c += step_c;
      next_r += delta_r;
      next_c += delta_c;
    } else if (next_r < next_c) {
      r += step_r;
      next_r += delta_r;
    } else {
      c += step_c;
      next_c += delta_c;
    }
  }
  return std::nullopt;
}

// Travel limit of a footprint moving along `dir` before it meets a side
// wall or the back panel. The front is open.
double wall_limit(const Footprint& f, const ShelfSpec& shelf, const Vec2& dir) {
  constexpr double kTiny = 1e-12;
  double limit = kInf;
  const auto [x0, x1] = project(f, Vec2::UnitX());
  const auto [y0, y1] = project(f, Vec2::UnitY());
  if (dir.x() > kTiny) limit = std::min(limit, (shelf.depth - x1) / dir.x());
  if (dir.y() > kTiny) limit = std::min(limit, (shelf.width - y1) / dir.y());
  if (dir.y() < -kTiny) limit = std::min(limit, y0 / -dir.y());
  return std::max(limit, 0.0);
}

// Shortest chain distance from `source` to every object: how far the source
// must travel before each object starts to move.
std::vector<double> chain_distances(const std::vector<std::vector<double>>& gap,
                                    std::size_t source, ChainSolver solver) {
  const std::size_t n = gap.size();
  std::vector<double> dist(n, kInf);
  dist[source] = 0.0;
  if (solver == ChainSolver::front_to_back) {
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({0.0, source});
    std::vector<bool> done(n, false);
    while (!queue.empty()) {
      const auto [d, i] = queue.top();
      queue.pop();
      if (done[i]) continue;
      done[i] = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || done[j] || !std::isfinite(gap[i][j])) continue;
        if (d + gap[i][j] < dist[j]) {
          dist[j] = d + gap[i][j];
          queue.push({dist[j], j});
        }
      }
    }
    return dist;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(dist[i])) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && dist[i] + gap[i][j] < dist[j]) {
          dist[j] = dist[i] + gap[i][j];
          changed = true;
        }
      }
    }
  }
  return dist;
}

}  // namespace

Vec2 PushCandidate::unit() const {
  // Exact values on the axes keep axis-aligned pushes free of rounding.
  static const double kDiag = std::sqrt(0.5);
  static const Vec2 kUnits[kPushDirections] = {
      {1.0, 0.0},  {kDiag, kDiag},   {0.0, 1.0},  {-kDiag, kDiag},
      {-1.0, 0.0}, {-kDiag, -kDiag}, {0.0, -1.0}, {kDiag, -kDiag}};
  return kUnits[((direction % kPushDirections) + kPushDirections) % kPushDirections];
}

std::vector<Vec2> push_ray_origins(const ShelfSpec& shelf, const PushConfig& config) {
  const double x = -config.origin_setback;
  return {Vec2(x, shelf.width), Vec2(x, 0.5 * shelf.width), Vec2(x, 0.0)};
}

std::vector<int> push_contact_cells(const HeightMap& map, const MapParams& params,
                                    const PushConfig& config) {
  const ShelfSpec& shelf = map.shelf();
  std::vector<int> cells;
  std::set<int> seen;
  const int n = std::max(config.rays_per_origin, 1);
  for (const Vec2& origin : push_ray_origins(shelf, config)) {
    for (int k = 0; k < n; ++k) {
      const Vec2 target(shelf.depth, shelf.width * (k + 0.5) / n);
      if (auto cell = first_occupied_cell(map, params, origin, target)) {
        if (seen.insert(*cell).second) cells.push_back(*cell);
      }
    }
  }
  return cells;
}

std::vector<PushCandidate> sample_candidates(const HeightMap& map, const MapParams& params,
                                             const PushConfig& config) {
  std::vector<PushCandidate> out;
  const double board = map.shelf().board_height;
  for (int cell : push_contact_cells(map, params, config)) {
    const int r = cell / map.cols();
    const int c = cell % map.cols();
    const Vec2 xy = map.cell_center(r, c);
    const double z = board + std::min(0.5 * map.height(cell), config.max_contact_height);
    for (int d = 0; d < kPushDirections; ++d) {
      out.push_back({Vec3(xy.x(), xy.y(), z), d, config.length, cell});
    }
  }
  return out;
}

PushMap make_push_map(const HeightMap& map, const PushCandidate& candidate) {
  const Vec2 start = candidate.start.head<2>();
  if (!map.cell_of(start)) throw Error("make_push_map: push start outside the map");

  PushMap pm;
  pm.rows = map.rows();
  pm.cols = map.cols();
  pm.cell_size = map.cell_size();
  pm.probability.assign(static_cast<std::size_t>(map.size()), 0.5);
  pm.height.assign(static_cast<std::size_t>(map.size()), 0.0);

  const Vec2 u = candidate.unit();
  const Vec2 v(-u.y(), u.x());
  const Vec2 center = map.center();
  const double cell = map.cell_size();

  for (int r = 0; r < pm.rows; ++r) {
    for (int c = 0; c < pm.cols; ++c) {
      const Vec2 local = map.cell_center(r, c) - center;
      const Vec2 world = start + local.x() * u + local.y() * v;
      const double gx = world.x() / cell - 0.5;
      const double gy = world.y() / cell - 0.5;
      const int r0 = static_cast<int>(std::floor(gx));
      const int c0 = static_cast<int>(std::floor(gy));
      const double fx = gx - r0;
      const double fy = gy - c0;
      double p = 0.0;
      double h = 0.0;
      for (int dr = 0; dr < 2; ++dr) {
        for (int dc = 0; dc < 2; ++dc) {
          const double w = (dr ? fx : 1.0 - fx) * (dc ? fy : 1.0 - fy);
          if (w == 0.0) continue;
          const int rr = r0 + dr;
          const int cc = c0 + dc;
          if (map.in_bounds(rr, cc)) {
            p += w * map.probability(map.index(rr, cc));
            h += w * map.height(map.index(rr, cc));
          } else {
            p += w * 0.5;
          }
        }
      }
      const auto k = static_cast<std::size_t>(r * pm.cols + c);
      pm.probability[k] = p;
      pm.height[k] = h;
    }
  }
  return pm;
}

double PushOutcome::total_displacement() const {
  double total = 0.0;
  for (const auto& [id, d] : displacement) total += d;
  return total;
}

PushOutcome execute_push(const SceneState& scene, const PushCandidate& candidate,
                         const PushConfig& config) {
  PushOutcome out;
  out.scene_after = scene;
  for (const auto& o : scene.objects) out.displacement[o.id] = 0.0;

  const Vec2 start = candidate.start.head<2>();
  const std::size_t n = scene.objects.size();
  std::vector<Footprint> footprints;
  footprints.reserve(n);
  for (const auto& o : scene.objects) footprints.push_back(o.footprint());

  // Contacted object: closest footprint within tolerance, lowest index on ties.
  std::optional<std::size_t> source;
  double best = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = footprint_distance(footprints[i], Footprint::disc(start, 0.0));
    if (d <= config.contact_tolerance && d < best) {
      best = d;
      source = i;
    }
  }
  if (!source) {
    out.status = PushOutcome::Status::no_contact;
    return out;
  }
  out.contacted_id = scene.objects[*source].id;

  const Vec2 dir = candidate.unit();
  std::vector<std::vector<double>> gap(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) gap[i][j] = sweep_distance(footprints[i], footprints[j], dir);
    }
  }
  const std::vector<double> dist = chain_distances(gap, *source, config.chain_solver);

  double travel = std::max(candidate.length, 0.0);
  std::vector<double> limits(n, kInf);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(dist[j])) continue;
    limits[j] = wall_limit(footprints[j], scene.shelf, dir);
    travel = std::min(travel, dist[j] + limits[j]);
  }
  out.travel = travel;

  std::vector<ObjectPrimitive> remaining;
  for (std::size_t j = 0; j < n; ++j) {
    ObjectPrimitive obj = scene.objects[j];
    const double d = std::isfinite(dist[j]) ? std::max(0.0, travel - dist[j]) : 0.0;
    if (std::isfinite(dist[j]) && dist[j] <= travel &&
        dist[j] + limits[j] <= travel + 1e-12) {
      out.wall_collision = true;
    }
    obj.position += d * dir;
    out.displacement[obj.id] = d;
    if (obj.position.x() < 0.0) {
      out.drops.push_back(obj.id);
    } else {
      remaining.push_back(obj);
    }
  }
  out.scene_after.objects = std::move(remaining);
  return out;
}

PushScorer::PushScorer(const SceneState& scene, const HeightMap& map,
                       const EpisodeConfig& episode, const PushConfig& config)
    : scene_(scene), map_(map), episode_(episode), config_(config) {
  view_ = bootstrap_poses(scene.shelf, episode.workspace)[0];
  rays_ = pixel_rays(camera_frame(view_), episode.camera);
  base_image_ = SceneRaycaster(scene).render(view_, episode.camera);
  unknown_before_ = map.unknown_count(episode.map);

  const auto n = static_cast<std::size_t>(map.size());
  base_cell_.assign(rays_.size(), -1);
  base_hit_.assign(rays_.size(), 0);
  base_hits_.assign(n, 0);
  base_misses_.assign(n, 0);
  const Vec3 origin = view_.position();
  for (std::size_t p = 0; p < rays_.size(); ++p) {
    const double r = base_image_.range[p];
    if (!DepthImage::has_return(r)) continue;
    const auto e = point_evidence(map, origin + r * rays_[p], episode.map);
    if (!e) continue;
    base_cell_[p] = e->cell;
    base_hit_[p] = e->hit;
    ++(e->hit ? base_hits_ : base_misses_)[static_cast<std::size_t>(e->cell)];
  }
  unknown_base_ = unknown_before_;
  for (int i = 0; i < map.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (base_hits_[k] == 0 && base_misses_[k] == 0) continue;
    const bool was = map.state(i, episode.map) == CellState::unknown;
    const bool now = state_after(map, i, base_hits_[k], base_misses_[k], episode.map) ==
                     CellState::unknown;
    unknown_base_ += static_cast<int>(now) - static_cast<int>(was);
  }
}

template <class F>
void PushScorer::for_each_touched(const PushOutcome& outcome, F&& f) const {
  std::vector<std::size_t> moved_before;
  for (std::size_t k = 0; k < scene_.objects.size(); ++k) {
    const int id = scene_.objects[k].id;
    const bool dropped = std::find(outcome.drops.begin(), outcome.drops.end(), id) !=
                         outcome.drops.end();
    if (dropped || outcome.displacement.at(id) > 0.0) moved_before.push_back(k);
  }
  if (moved_before.empty()) return;

  std::vector<std::size_t> moved_after;
  const auto& after = outcome.scene_after.objects;
  for (std::size_t k = 0; k < after.size(); ++k) {
    if (outcome.displacement.at(after[k].id) > 0.0) moved_after.push_back(k);
  }

  const SceneRaycaster old_caster(scene_);
  const SceneRaycaster new_caster(outcome.scene_after);
  const Vec3 origin = view_.position();
  const CameraIntrinsics& intr = episode_.camera;
  for (std::size_t p = 0; p < rays_.size(); ++p) {
    const Vec3& dir = rays_[p];
    const bool touched =
        std::any_of(moved_before.begin(), moved_before.end(),
                    [&](std::size_t k) { return old_caster.may_hit_object(k, origin, dir); }) ||
        std::any_of(moved_after.begin(), moved_after.end(),
                    [&](std::size_t k) { return new_caster.may_hit_object(k, origin, dir); });
    if (!touched) continue;
    const double t = new_caster.first_hit(origin, dir);
    f(p, (t >= intr.min_range && t <= intr.max_range) ? t : DepthImage::kNoReturn);
  }
}

DepthImage PushScorer::rerender(const PushOutcome& outcome) const {
  DepthImage img = base_image_;
  for_each_touched(outcome, [&](std::size_t p, double r) { img.range[p] = r; });
  return img;
}

PushScore PushScorer::score(const PushCandidate& candidate) const {
  PushScore result;
  result.outcome = execute_push(scene_, candidate, config_);
  if (result.outcome.status != PushOutcome::Status::ok) return result;

  // Only cells whose evidence changes can end up in a different state than
  // with the unchanged view.
  std::vector<int> hits;
  std::vector<int> misses;
  std::vector<int> cells;
  auto touch = [&](int cell) {
    if (hits.empty()) {
      hits = base_hits_;
      misses = base_misses_;
    }
    cells.push_back(cell);
  };
  const Vec3 origin = view_.position();
  for_each_touched(result.outcome, [&](std::size_t p, double r) {
    std::optional<PointEvidence> e;
    if (DepthImage::has_return(r)) e = point_evidence(map_, origin + r * rays_[p], episode_.map);
    const int new_cell = e ? e->cell : -1;
    const bool new_hit = e && e->hit;
    if (new_cell == base_cell_[p] && (new_cell < 0 || new_hit == (base_hit_[p] != 0))) return;
    if (base_cell_[p] >= 0) {
      touch(base_cell_[p]);
      --(base_hit_[p] ? hits : misses)[static_cast<std::size_t>(base_cell_[p])];
    }
    if (new_cell >= 0) {
      touch(new_cell);
      ++(new_hit ? hits : misses)[static_cast<std::size_t>(new_cell)];
    }
  });

  int unknown_after = unknown_base_;
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  const MapParams& mp = episode_.map;
  for (int i : cells) {
    const auto k = static_cast<std::size_t>(i);
    const bool base = state_after(map_, i, base_hits_[k], base_misses_[k], mp) ==
                      CellState::unknown;
    const bool now = state_after(map_, i, hits[k], misses[k], mp) == CellState::unknown;
    unknown_after += static_cast<int>(now) - static_cast<int>(base);
  }

  result.valid = true;
  result.revealed = unknown_before_ - unknown_after;
  result.outcome.delta_entropy = static_cast<double>(result.revealed) / map_.size();
  result.score = result.outcome.delta_entropy -
                 config_.lambda * result.outcome.total_displacement() -
                 config_.drop_penalty * static_cast<double>(result.outcome.drops.size());
  return result;
}

PushScore score_push(const SceneState& scene, const HeightMap& map,
                     const PushCandidate& candidate, double lambda,
                     const EpisodeConfig& episode, PushConfig config) {
  config.lambda = lambda;
  return PushScorer(scene, map, episode, config).score(candidate);
}

std::optional<PushSelection> select_best_push(const PushScorer& scorer,
                                              const std::vector<PushCandidate>& candidates) {
  std::optional<PushSelection> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    PushScore s = scorer.score(candidates[i]);
    if (!s.valid) continue;
    if (!best || s.score > best->score.score) best = PushSelection{i, std::move(s)};
  }
  return best;
}

}  // namespace vpush
