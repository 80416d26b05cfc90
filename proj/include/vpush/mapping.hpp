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

#ifndef VPUSH_MAPPING_HPP
#define VPUSH_MAPPING_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vpush/geometry.hpp"
#include "vpush/scene.hpp"
#include "vpush/sensor.hpp"

namespace vpush {

struct MapParams {
  double cell_size = 0.01;
  double tau_unknown = 0.2;
  double hit_log_odds = 0.85;
  double miss_log_odds = -0.4;
  double clamp_log_odds = 3.5;      ///< log-odds stay within +-clamp
  double occupied_height = 0.015;   ///< above-board height counted as a hit
  double board_tolerance = 0.002;   ///< returns this close to the board are free evidence

  bool valid() const;
};

enum class CellState { occupied, free, unknown };

/// Strict thresholds: p exactly at 0.5 +- tau is unknown.
CellState classify(double probability, double tau_unknown);

double probability_from_log_odds(double l);

/// 2.5D occupancy height map over the shelf footprint. Row r covers
/// x in [r, r+1) * cell, column c covers y in [c, c+1) * cell.
class HeightMap {
 public:
  HeightMap(const ShelfSpec& shelf, double cell_size);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }
  double cell_size() const { return cell_; }
  const ShelfSpec& shelf() const { return shelf_; }

  int index(int r, int c) const { return r * cols_ + c; }
  bool in_bounds(int r, int c) const { return r >= 0 && r < rows_ && c >= 0 && c < cols_; }
  std::optional<std::pair<int, int>> cell_of(const Vec2& p) const;
  Vec2 cell_center(int r, int c) const { return {(r + 0.5) * cell_, (c + 0.5) * cell_}; }
  Vec2 center() const { return {0.5 * shelf_.depth, 0.5 * shelf_.width}; }

  double log_odds(int i) const { return log_odds_[static_cast<std::size_t>(i)]; }
  double probability(int i) const { return probability_from_log_odds(log_odds(i)); }
  /// Maximum observed height above the board; 0 for unobserved cells.
  double height(int i) const { return height_[static_cast<std::size_t>(i)]; }
  bool observed(int i) const { return observed_[static_cast<std::size_t>(i)] != 0; }
  /// True once the cell has received above-board evidence.
  bool hit_seen(int i) const { return hit_seen_[static_cast<std::size_t>(i)] != 0; }
  CellState state(int i, const MapParams& params) const;

  int unknown_count(const MapParams& params) const;

  /// Direct cell write, used for synthetic maps.
  void set_cell(int i, double log_odds, double height, bool observed = true);

  bool operator==(const HeightMap&) const = default;

 private:
  friend struct IntegrationAccess;

  ShelfSpec shelf_;
  double cell_ = 0.0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> log_odds_;
  std::vector<double> height_;
  std::vector<std::uint8_t> observed_;
  std::vector<std::uint8_t> hit_seen_;
};

struct IntegrationStats {
  int hits = 0;
  int misses = 0;
  int ignored = 0;
};

/// What one point tells about its cell.
struct PointEvidence {
  int cell = -1;
  bool hit = false;     ///< above-board return; otherwise board (free) evidence
  double height = 0.0;  ///< above the board, clamped to the shelf interior
};

/// Evidence of a single point, or nothing for ignored points.
std::optional<PointEvidence> point_evidence(const HeightMap& map, const Vec3& p,
                                            const MapParams& params);

/// Cell state after a cloud contributing `hits` and `misses` to cell `i`,
/// without touching the map.
CellState state_after(const HeightMap& map, int i, int hits, int misses,
                      const MapParams& params);

/// Folds a shelf-frame point cloud into the map. Points above the occupied
/// height are hits, points on the board are misses, everything else
/// (walls, back panel, underside of the top, outside the footprint) is
/// ignored. Evidence is aggregated per cell before it is applied, so point
/// order never matters. A cell that ever saw a hit ignores later misses, and
/// a hit lifts a negative belief to zero before adding its evidence.
IntegrationStats integrate(HeightMap& map, std::span<const Vec3> cloud,
                           const MapParams& params);

/// Fraction of unknown cells.
double entropy(const HeightMap& map, const MapParams& params);

/// Relative decrease of unknown cells; 0 when there was nothing unknown,
/// never below -1.
double information_gain(int unknown_prev, int unknown_now);

/// Euclidean distance between camera positions; angles do not contribute.
double motion_cost(const CameraPose& from, const CameraPose& to);

struct UnknownRegion {
  Vec3 center = Vec3::Zero();
  int area = 0;  ///< cells
};

/// Centroid of the largest 4-connected unknown component.
UnknownRegion largest_unknown_center(const HeightMap& map, const MapParams& params);

inline constexpr int kPooledFeatureCount = 32;

/// Mean occupancy probability over a 4 x 8 block partition, row-major.
std::array<double, kPooledFeatureCount> pooled_features(const HeightMap& map);

}  // namespace vpush

#endif  // VPUSH_MAPPING_HPP
