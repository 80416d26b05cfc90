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

#include "vpush/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace vpush {

bool MapParams::valid() const {
  return cell_size > 0.0 && tau_unknown > 0.0 && tau_unknown < 0.5 &&
         hit_log_odds > 0.0 && miss_log_odds < 0.0 && clamp_log_odds > 0.0 &&
         occupied_height > board_tolerance && board_tolerance >= 0.0;
}

CellState classify(double probability, double tau_unknown) {
  if (probability > 0.5 + tau_unknown) return CellState::occupied;
  if (probability < 0.5 - tau_unknown) return CellState::free;
  return CellState::unknown;
}

double probability_from_log_odds(double l) { return 1.0 / (1.0 + std::exp(-l)); }

HeightMap::HeightMap(const ShelfSpec& shelf, double cell_size)
    : shelf_(shelf), cell_(cell_size) {
  if (!shelf.valid() || cell_size <= 0.0) throw Error("HeightMap: invalid geometry");
  const double fr = shelf.depth / cell_size;
  const double fc = shelf.width / cell_size;
  rows_ = static_cast<int>(std::lround(fr));
  cols_ = static_cast<int>(std::lround(fc));
  if (rows_ < 1 || cols_ < 1 || std::abs(fr - rows_) > 1e-6 || std::abs(fc - cols_) > 1e-6) {
    throw Error("HeightMap: cell size must divide the shelf footprint");
  }
  const auto n = static_cast<std::size_t>(rows_ * cols_);
  log_odds_.assign(n, 0.0);
  height_.assign(n, 0.0);
  observed_.assign(n, 0);
  hit_seen_.assign(n, 0);
}

std::optional<std::pair<int, int>> HeightMap::cell_of(const Vec2& p) const {
  const int r = static_cast<int>(std::floor(p.x() / cell_));
  const int c = static_cast<int>(std::floor(p.y() / cell_));
  if (!in_bounds(r, c)) return std::nullopt;
  return std::make_pair(r, c);
}

CellState HeightMap::state(int i, const MapParams& params) const {
  return classify(probability(i), params.tau_unknown);
}

int HeightMap::unknown_count(const MapParams& params) const {
  int n = 0;
  for (int i = 0; i < size(); ++i) {
    if (state(i, params) == CellState::unknown) ++n;
  }
  return n;
}

void HeightMap::set_cell(int i, double log_odds, double height, bool observed) {
  const auto k = static_cast<std::size_t>(i);
  log_odds_[k] = log_odds;
  height_[k] = height;
  observed_[k] = observed ? 1 : 0;
  hit_seen_[k] = log_odds > 0.0 ? 1 : 0;
}

struct IntegrationAccess {
  static void apply(HeightMap& m, std::size_t k, int hits, int misses, double max_h,
                    const MapParams& p) {
    m.observed_[k] = 1;
    m.height_[k] = std::max(m.height_[k], max_h);
    double& l = m.log_odds_[k];
    if (hits > 0) {
      l = std::min(std::max(l, 0.0) + hits * p.hit_log_odds, p.clamp_log_odds);
      m.hit_seen_[k] = 1;
    } else if (misses > 0 && !m.hit_seen_[k]) {
      l = std::max(l + misses * p.miss_log_odds, -p.clamp_log_odds);
    }
  }
};

std::optional<PointEvidence> point_evidence(const HeightMap& map, const Vec3& p,
                                            const MapParams& params) {
  constexpr double kWallEps = 1e-6;
  const ShelfSpec& shelf = map.shelf();
  const double h = p.z() - shelf.board_height;
  const bool inside = p.x() > kWallEps && p.x() < shelf.depth - kWallEps &&
                      p.y() > kWallEps && p.y() < shelf.width - kWallEps &&
                      h >= -params.board_tolerance && h < shelf.height - kWallEps;
  if (!inside) return std::nullopt;
  const auto cell = map.cell_of(p.head<2>());
  if (!cell) return std::nullopt;
  PointEvidence e;
  e.cell = map.index(cell->first, cell->second);
  if (h > params.occupied_height) {
    e.hit = true;
  } else if (std::abs(h) > params.board_tolerance) {
    return std::nullopt;
  }
  e.height = std::clamp(h, 0.0, shelf.height);
  return e;
}

CellState state_after(const HeightMap& map, int i, int hits, int misses,
                      const MapParams& params) {
  double l = map.log_odds(i);
  if (hits > 0) {
    l = std::min(std::max(l, 0.0) + hits * params.hit_log_odds, params.clamp_log_odds);
  } else if (misses > 0 && !map.hit_seen(i)) {
    l = std::max(l + misses * params.miss_log_odds, -params.clamp_log_odds);
  }
  return classify(probability_from_log_odds(l), params.tau_unknown);
}

IntegrationStats integrate(HeightMap& map, std::span<const Vec3> cloud,
                           const MapParams& params) {
  const auto n = static_cast<std::size_t>(map.size());
  std::vector<int> hits(n, 0);
  std::vector<int> misses(n, 0);
  std::vector<double> max_h(n, -1.0);
  IntegrationStats stats;

  for (const Vec3& p : cloud) {
    const auto e = point_evidence(map, p, params);
    if (!e) {
      ++stats.ignored;
      continue;
    }
    const auto k = static_cast<std::size_t>(e->cell);
    if (e->hit) {
      ++hits[k];
      ++stats.hits;
    } else {
      ++misses[k];
      ++stats.misses;
    }
    max_h[k] = std::max(max_h[k], e->height);
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (hits[k] == 0 && misses[k] == 0) continue;
    IntegrationAccess::apply(map, k, hits[k], misses[k], max_h[k], params);
  }
  return stats;
}

double entropy(const HeightMap& map, const MapParams& params) {
  return static_cast<double>(map.unknown_count(params)) / map.size();
}

double information_gain(int unknown_prev, int unknown_now) {
  if (unknown_prev <= 0) return 0.0;
  const double ig = static_cast<double>(unknown_prev - unknown_now) / unknown_prev;
  return std::max(ig, -1.0);
}

double motion_cost(const CameraPose& from, const CameraPose& to) {
  return (to.position() - from.position()).norm();
}

UnknownRegion largest_unknown_center(const HeightMap& map, const MapParams& params) {
  const int rows = map.rows();
  const int cols = map.cols();
  const double z = map.shelf().board_height + 0.5 * map.shelf().height;
  std::vector<int> label(static_cast<std::size_t>(map.size()), -1);
  std::vector<bool> unknown(static_cast<std::size_t>(map.size()));
  for (int i = 0; i < map.size(); ++i) {
    unknown[static_cast<std::size_t>(i)] = map.state(i, params) == CellState::unknown;
  }

  int best_area = 0;
  Vec2 best_centroid = map.center();
  int next_label = 0;
  std::deque<int> queue;
  for (int start = 0; start < map.size(); ++start) {
    if (!unknown[static_cast<std::size_t>(start)] || label[static_cast<std::size_t>(start)] >= 0) {
      continue;
    }
    const int id = next_label++;
    label[static_cast<std::size_t>(start)] = id;
    queue.assign(1, start);
    int area = 0;
    // Integer index sums keep the centroid independent of visiting order.
    long sum_r = 0;
    long sum_c = 0;
    while (!queue.empty()) {
      const int i = queue.front();
      queue.pop_front();
      const int r = i / cols;
      const int c = i % cols;
      ++area;
      sum_r += r;
      sum_c += c;
      constexpr int dr[] = {-1, 1, 0, 0};
      constexpr int dc[] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const int nr = r + dr[k];
        const int nc = c + dc[k];
        if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
        const auto j = static_cast<std::size_t>(nr * cols + nc);
        if (unknown[j] && label[j] < 0) {
          label[j] = id;
          queue.push_back(static_cast<int>(j));
        }
      }
    }
    // Strict comparison keeps the first component found in row-major order.
    if (area > best_area) {
      best_area = area;
      const double cell = map.cell_size();
      best_centroid = Vec2(cell * (static_cast<double>(sum_r) / area + 0.5),
                           cell * (static_cast<double>(sum_c) / area + 0.5));
    }
  }
  return {Vec3(best_centroid.x(), best_centroid.y(), z), best_area};
}

std::array<double, kPooledFeatureCount> pooled_features(const HeightMap& map) {
  constexpr int kBlockRows = 4;
  constexpr int kBlockCols = 8;
  std::array<double, kPooledFeatureCount> out{};
  for (int br = 0; br < kBlockRows; ++br) {
    const int r0 = br * map.rows() / kBlockRows;
    const int r1 = (br + 1) * map.rows() / kBlockRows;
    for (int bc = 0; bc < kBlockCols; ++bc) {
      const int c0 = bc * map.cols() / kBlockCols;
      const int c1 = (bc + 1) * map.cols() / kBlockCols;
      double sum = 0.0;
      int count = 0;
      for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) {
          sum += map.probability(map.index(r, c));
          ++count;
        }
      }
      out[static_cast<std::size_t>(br * kBlockCols + bc)] = count > 0 ? sum / count : 0.5;
    }
  }
  return out;
}

}  // namespace vpush
