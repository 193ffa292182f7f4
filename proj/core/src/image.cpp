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

#include "vdepth/image.hpp"

#include <algorithm>

namespace vdepth {

RGBImage RGBImage::filled(int width, int height, std::uint8_t r, std::uint8_t g,
                          std::uint8_t b) {
  RGBImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<size_t>(width) * height * 3);
  for (size_t i = 0; i < img.pixels.size(); i += 3) {
    img.pixels[i] = r;
    img.pixels[i + 1] = g;
    img.pixels[i + 2] = b;
  }
  return img;
}

SparseDepthMap SparseDepthMap::zeros(int width, int height) {
  SparseDepthMap d;
  d.width = width;
  d.height = height;
  d.values.assign(static_cast<size_t>(width) * height, 0.0);
  return d;
}

size_t SparseDepthMap::valid_count() const {
  return static_cast<size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return v > 0.0; }));
}

Mask Mask::zeros(int width, int height) {
  Mask m;
  m.width = width;
  m.height = height;
  m.values.assign(static_cast<size_t>(width) * height, 0);
  return m;
}

size_t Mask::count() const {
  return static_cast<size_t>(std::count_if(values.begin(), values.end(),
                                           [](std::uint8_t v) { return v != 0; }));
}

}  // namespace vdepth
