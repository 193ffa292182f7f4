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
#include <limits>
#include <optional>
#include <vector>

#include "vdepth/camera.hpp"
#include "vdepth/image.hpp"
#include "vdepth/scene.hpp"

namespace vdepth {

// 3x3 neighborhood stack of an RGB image: 27 channels per pixel, laid out as
// offset_index * 3 + color. offset_index = (dy + 1) * 3 + (dx + 1), so index 4
// is the center and reproduces the input image.
struct ContextualImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // (y * width + x) * 27 + channel

  static constexpr int kChannels = 27;
  static constexpr int kOffsets = 9;
  static constexpr int kCenterOffset = 4;

  static constexpr int offset_dx(int offset_index) { return offset_index % 3 - 1; }
  static constexpr int offset_dy(int offset_index) { return offset_index / 3 - 1; }

  std::uint8_t at(int x, int y, int offset_index, int color) const {
    return data[(static_cast<size_t>(y) * width + x) * kChannels + offset_index * 3 + color];
  }
  // An offset sample is valid when the neighbor it was copied from lies inside
  // the image.
  bool offset_valid(int x, int y, int offset_index) const {
    const int sx = x + offset_dx(offset_index);
    const int sy = y + offset_dy(offset_index);
    return sx >= 0 && sy >= 0 && sx < width && sy < height;
  }
};

ContextualImage unfold_context(const RGBImage& rgb);

// Splats below this projective depth are dropped instead of rendered.
constexpr double kSplatNearPlane = 0.1;  // meters

// Depth-keyed splat target. The smallest key wins a pixel; keys order
// lexicographically by (w, priority, source, offset), which makes the result
// independent of submission order.
struct SplatKey {
  double w = 0;
  std::uint8_t priority = 0;  // 0 = center offset, 1 = off-center, 2 = foreground
  std::uint64_t source = 0;   // source pixel index (or emission index)
  std::uint8_t offset = 0;
};

class SplatBuffer {
 public:
  SplatBuffer(int width, int height);

  // Out-of-bounds destinations are dropped silently.
  void submit(int x, int y, const std::array<std::uint8_t, 3>& color, const SplatKey& key);

  bool filled(int x, int y) const { return cells_[index(x, y)].key.w < kEmpty; }
  double w(int x, int y) const { return cells_[index(x, y)].key.w; }
  std::array<std::uint8_t, 3> color(int x, int y) const { return cells_[index(x, y)].color; }

  int width() const { return width_; }
  int height() const { return height_; }

 private:
  struct Cell {
    SplatKey key;
    std::array<std::uint8_t, 3> color{};
  };
  static constexpr double kEmpty = std::numeric_limits<double>::infinity();

  size_t index(int x, int y) const { return static_cast<size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<Cell> cells_;
};

// One synthesized view. render_depth stores the winning projective depth w per
// pixel, 0 where nothing landed; hole_mask is exactly (render_depth == 0);
// fg_mask marks pixels a foreground splat won and never overlaps hole_mask.
struct RenderOutput {
  RGBImage rgb;
  SparseDepthMap render_depth;
  Mask hole_mask;
  Mask fg_mask;
};

// Renders the background under a camera displacement of dz along z: every pixel
// with valid source depth is reprojected, and its 9 contextual samples land at
// the reprojected pixel plus their own offset, competing in one depth buffer.
// Throws Errc::size_mismatch when ctx and depth disagree on size.
RenderOutput splat_background(const ContextualImage& ctx, const SparseDepthMap& depth,
                              const ProjectionMatrix& P, double dz);

// Dense depth over the pixels of a projected box: ray/box intersection depth
// per pixel, 0 where the ray misses. bounds is the clipped footprint of the
// projected hull.
struct DepthPatch {
  PixelRect bounds;
  std::vector<double> depth;

  int patch_width() const { return bounds.x1 - bounds.x0 + 1; }
  int patch_height() const { return bounds.y1 - bounds.y0 + 1; }
  double at(int x, int y) const {
    return depth[static_cast<size_t>(y - bounds.y0) * patch_width() + (x - bounds.x0)];
  }
  bool valid(int x, int y) const { return at(x, y) > 0.0; }
};

// nullopt when the projected box misses the image entirely. Throws
// Errc::behind_camera when a corner has non-positive projective weight.
std::optional<DepthPatch> box_surface_depth(const Box3D& box, const ProjectionMatrix& P,
                                            int width, int height);

struct ForegroundSplat {
  int x = 0;
  int y = 0;
  std::array<std::uint8_t, 3> color{};
  double w = 0;
};

// Warps every pixel backed by the box surface to its displaced position.
// Splats behind the near plane or outside the image are not emitted.
std::vector<ForegroundSplat> warp_foreground(const RGBImage& rgb, const ObjectLabel& label,
                                             const ProjectionMatrix& P, double dz);

// Zeroes depth inside each removable object's bbox2d.
SparseDepthMap remove_objects(const SparseDepthMap& depth,
                              const std::vector<ObjectLabel>& removable);

// Depth-tests the foreground splats against the background render and each
// other; a foreground splat needs strictly smaller w to take a filled pixel.
RenderOutput compose(const RenderOutput& background,
                     const std::vector<ForegroundSplat>& splats);

}  // namespace vdepth
