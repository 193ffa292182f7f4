// Copyright 2026 The vdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vdepth/geometry.hpp"
#include "vdepth/image.hpp"

namespace vdepth {

// One KITTI label row. DontCare rows keep their sentinel field values, so
// range invariants only apply to real objects.
struct ObjectLabel {
  std::string category;
  double truncation = 0;    // fraction [0, 1]
  int occlusion = 0;        // 0 visible .. 3 unknown
  double alpha = 0;         // observation angle, radians [-pi, pi)
  Rect2D bbox2d;            // pixels
  double height = 0;        // meters
  double width = 0;
  double length = 0;
  double x = 0;             // bottom-center of the box, camera coordinates
  double y = 0;
  double z = 0;
  double rotation_y = 0;    // radians [-pi, pi)
  std::optional<double> score;

  bool is_dontcare() const { return category == "DontCare"; }
};

// Depth maps travel as single-channel 16-bit PNG, meters = raw / 256, 0 invalid.
SparseDepthMap load_depth(const std::string& path);
void save_depth(const SparseDepthMap& map, const std::string& path);

// 8-bit RGB PNG.
RGBImage load_rgb(const std::string& path);
void save_rgb(const RGBImage& image, const std::string& path);

// Label text <-> structs. Lines have 15 whitespace-separated fields, 16 with a
// trailing detection score. Throws Errc::malformed_line with the line number.
std::vector<ObjectLabel> parse_labels(const std::string& text);
std::string serialize_labels(const std::vector<ObjectLabel>& labels);

std::vector<ObjectLabel> load_labels(const std::string& path);
void save_labels(const std::vector<ObjectLabel>& labels, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace vdepth
