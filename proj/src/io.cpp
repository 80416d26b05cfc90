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

#include "vpush/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <vector>

namespace vpush {

namespace {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
}

// Display row/col for map cell (r, c): back at the top, left wall on the left.
void write_grid(std::ostream& os, int rows, int cols, const auto& value) {
  os << "P5\n" << cols << ' ' << rows << "\n255\n";
  for (int r = rows - 1; r >= 0; --r) {
    for (int c = cols - 1; c >= 0; --c) os.put(static_cast<char>(value(r, c)));
  }
}

}  // namespace

void write_depth_pgm(std::ostream& os, const DepthImage& img) {
  os << "P5\n" << img.width << ' ' << img.height << "\n65535\n";
  for (double r : img.range) {
    const long mm = DepthImage::has_return(r) ? std::clamp(std::lround(r * 1000.0), 1L, 65535L) : 0L;
    os.put(static_cast<char>((mm >> 8) & 0xff));
    os.put(static_cast<char>(mm & 0xff));
  }
}

void write_map_pgm(std::ostream& os, const HeightMap& map, const MapParams& params,
                   MapLayer layer) {
  const double max_h = map.shelf().height;
  write_grid(os, map.rows(), map.cols(), [&](int r, int c) -> std::uint8_t {
    const int i = map.index(r, c);
    switch (layer) {
      case MapLayer::state:
        switch (map.state(i, params)) {
          case CellState::occupied: return 0;
          case CellState::unknown: return 128;
          case CellState::free: return 255;
        }
        return 128;
      case MapLayer::probability: return to_byte(map.probability(i));
      case MapLayer::height: return to_byte(map.height(i) / max_h);
    }
    return 0;
  });
}

void write_push_map_pgm(std::ostream& os, const PushMap& pm, MapLayer layer,
                        double max_height) {
  write_grid(os, pm.rows, pm.cols, [&](int r, int c) -> std::uint8_t {
    const auto k = static_cast<std::size_t>(r * pm.cols + c);
    if (layer == MapLayer::height) return to_byte(pm.height[k] / max_height);
    return to_byte(pm.probability[k]);
  });
}

void write_scene_ppm(std::ostream& os, const SceneState& scene, double pixels_per_meter) {
  const ShelfSpec& shelf = scene.shelf;
  const int rows = std::max(1, static_cast<int>(std::lround(shelf.depth * pixels_per_meter)));
  const int cols = std::max(1, static_cast<int>(std::lround(shelf.width * pixels_per_meter)));
  std::vector<Footprint> footprints;
  for (const auto& o : scene.objects) footprints.push_back(o.footprint());
  os << "P6\n" << cols << ' ' << rows << "\n255\n";
  for (int r = rows - 1; r >= 0; --r) {
    for (int c = cols - 1; c >= 0; --c) {
      const Vec2 p((r + 0.5) / pixels_per_meter, (c + 0.5) / pixels_per_meter);
      std::uint8_t rgb[3] = {235, 235, 235};
      for (std::size_t k = 0; k < footprints.size(); ++k) {
        if (!contains(footprints[k], p)) continue;
        // Distinct, stable color per object id.
        const auto h = static_cast<std::uint32_t>(scene.objects[k].id) * 2654435761u;
        rgb[0] = static_cast<std::uint8_t>(40 + (h >> 8) % 160);
        rgb[1] = static_cast<std::uint8_t>(40 + (h >> 16) % 160);
        rgb[2] = static_cast<std::uint8_t>(40 + (h >> 24) % 160);
      }
      os.write(reinterpret_cast<const char*>(rgb), 3);
    }
  }
}

void write_xyz(std::ostream& os, std::span<const Vec3> cloud) {
  char buf[96];
  for (const Vec3& p : cloud) {
    std::snprintf(buf, sizeof buf, "%.6f %.6f %.6f\n", p.x(), p.y(), p.z());
    os << buf;
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace vpush
