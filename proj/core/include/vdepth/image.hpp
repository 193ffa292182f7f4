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

#include <array>
#include <cstdint>
#include <vector>

namespace vdepth {

// 8-bit RGB image, row-major, 3 bytes per pixel.
struct RGBImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  static RGBImage filled(int width, int height, std::uint8_t r, std::uint8_t g,
                         std::uint8_t b);

  std::uint8_t& at(int x, int y, int channel) {
    return pixels[(static_cast<size_t>(y) * width + x) * 3 + channel];
  }
  std::uint8_t at(int x, int y, int channel) const {
    return pixels[(static_cast<size_t>(y) * width + x) * 3 + channel];
  }
  std::array<std::uint8_t, 3> rgb(int x, int y) const {
    const size_t base = (static_cast<size_t>(y) * width + x) * 3;
    return {pixels[base], pixels[base + 1], pixels[base + 2]};
  }
  void set_rgb(int x, int y, const std::array<std::uint8_t, 3>& color) {
    const size_t base = (static_cast<size_t>(y) * width + x) * 3;
    pixels[base] = color[0];
    pixels[base + 1] = color[1];
    pixels[base + 2] = color[2];
  }
  bool inside(int x, int y) const {
    return x >= 0 && y >= 0 && x < width && y < height;
  }
};

// Per-pixel metric depth in meters; 0 marks an invalid pixel.
struct SparseDepthMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  static SparseDepthMap zeros(int width, int height);

  double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
  bool valid(int x, int y) const { return at(x, y) > 0.0; }
  size_t valid_count() const;
};

// Boolean per-pixel mask stored as 0/1 bytes.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;

  static Mask zeros(int width, int height);

  std::uint8_t& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
  size_t count() const;
};

}  // namespace vdepth
