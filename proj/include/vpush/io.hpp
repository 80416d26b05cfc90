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

#ifndef VPUSH_IO_HPP
#define VPUSH_IO_HPP

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <span>

#include "vpush/mapping.hpp"
#include "vpush/push.hpp"
#include "vpush/sensor.hpp"

namespace vpush {

/// 16-bit binary PGM in millimeters; pixels without a return are 0.
void write_depth_pgm(std::ostream& os, const DepthImage& img);

enum class MapLayer { state, probability, height };

/// 8-bit binary PGM, one pixel per cell, front of the shelf at the bottom
/// and the left wall on the left. State: occupied 0, unknown 128, free 255.
void write_map_pgm(std::ostream& os, const HeightMap& map, const MapParams& params,
                   MapLayer layer);

/// Same orientation convention; heights scale against `max_height`.
void write_push_map_pgm(std::ostream& os, const PushMap& pm, MapLayer layer,
                        double max_height);

/// Top view of the scene, `pixels_per_meter` resolution, one color per object.
void write_scene_ppm(std::ostream& os, const SceneState& scene, double pixels_per_meter);

/// Whitespace-separated x y z, one point per line.
void write_xyz(std::ostream& os, std::span<const Vec3> cloud);

/// Opens `path` for binary writing; throws Error on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace vpush

#endif  // VPUSH_IO_HPP
