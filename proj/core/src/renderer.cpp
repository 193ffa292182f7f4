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

#include "vdepth/renderer.hpp"

#include <algorithm>
#include <cmath>

#include "vdepth/errors.hpp"

namespace vdepth {

namespace {

bool key_less(const SplatKey& a, const SplatKey& b) {
  if (a.w != b.w) return a.w < b.w;
  if (a.priority != b.priority) return a.priority < b.priority;
  if (a.source != b.source) return a.source < b.source;
  return a.offset < b.offset;
}

}  // namespace

ContextualImage unfold_context(const RGBImage& rgb) {
  ContextualImage ctx;
  ctx.width = rgb.width;
  ctx.height = rgb.height;
  ctx.data.assign(static_cast<size_t>(rgb.width) * rgb.height * ContextualImage::kChannels, 0);
  for (int y = 0; y < rgb.height; ++y) {
    for (int x = 0; x < rgb.width; ++x) {
      std::uint8_t* cell =
          ctx.data.data() + (static_cast<size_t>(y) * rgb.width + x) * ContextualImage::kChannels;
      for (int o = 0; o < ContextualImage::kOffsets; ++o) {
        const int sx = x + ContextualImage::offset_dx(o);
        const int sy = y + ContextualImage::offset_dy(o);
        if (!rgb.inside(sx, sy)) continue;
        const std::array<std::uint8_t, 3> color = rgb.rgb(sx, sy);
        cell[o * 3] = color[0];
        cell[o * 3 + 1] = color[1];
        cell[o * 3 + 2] = color[2];
      }
    }
  }
  return ctx;
}

SplatBuffer::SplatBuffer(int width, int height) : width_(width), height_(height) {
  Cell empty;
  empty.key.w = kEmpty;
  cells_.assign(static_cast<size_t>(width) * height, empty);
}

void SplatBuffer::submit(int x, int y, const std::array<std::uint8_t, 3>& color,
                         const SplatKey& key) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  Cell& cell = cells_[index(x, y)];
  if (key_less(key, cell.key)) {
    cell.key = key;
    cell.color = color;
  }
}

RenderOutput splat_background(const ContextualImage& ctx, const SparseDepthMap& depth,
                              const ProjectionMatrix& P, double dz) {
  if (ctx.width != depth.width || ctx.height != depth.height) {
    throw Error(Errc::size_mismatch, "contextual image and depth map sizes differ");
  }
  const int width = ctx.width;
  const int height = ctx.height;
  const Intrinsics intr = P.intrinsics();
  SplatBuffer buffer(width, height);

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double z = depth.at(x, y);
      if (!(z > 0.0)) continue;
      const double w_dst = z + dz + intr.p34;
      if (w_dst <= kSplatNearPlane) continue;
      CameraPoint point = unproject(static_cast<double>(x), static_cast<double>(y), z, intr);
      point.z += dz;
      const PixelProjection pix = project(point, P);
      const int ur = static_cast<int>(std::lround(pix.u));
      const int vr = static_cast<int>(std::lround(pix.v));
      const std::uint64_t source = static_cast<std::uint64_t>(y) * width + x;
      const std::uint8_t* cell =
          ctx.data.data() + (static_cast<size_t>(y) * width + x) * ContextualImage::kChannels;
      for (int o = 0; o < ContextualImage::kOffsets; ++o) {
        const int dx = ContextualImage::offset_dx(o);
        const int dy = ContextualImage::offset_dy(o);
        if (!ctx.offset_valid(x, y, o)) continue;
        SplatKey key;
        key.w = w_dst;
        key.priority = (o == ContextualImage::kCenterOffset) ? 0 : 1;
        key.source = source;
        key.offset = static_cast<std::uint8_t>(o);
        buffer.submit(ur + dx, vr + dy,
                      {cell[o * 3], cell[o * 3 + 1], cell[o * 3 + 2]}, key);
      }
    }
  }

  RenderOutput out;
  out.rgb = RGBImage::filled(width, height, 0, 0, 0);
  out.render_depth = SparseDepthMap::zeros(width, height);
  out.hole_mask = Mask::zeros(width, height);
  out.fg_mask = Mask::zeros(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (buffer.filled(x, y)) {
        out.rgb.set_rgb(x, y, buffer.color(x, y));
        out.render_depth.at(x, y) = buffer.w(x, y);
      } else {
        out.hole_mask.at(x, y) = 1;
      }
    }
  }
  return out;
}

std::optional<DepthPatch> box_surface_depth(const Box3D& box, const ProjectionMatrix& P,
                                            int width, int height) {
  const BoxProjection proj = project_box_2d(box, P, width, height);
  const std::optional<PixelRect> bounds = rect_pixel_bounds(proj.bbox, width, height);
  if (!bounds.has_value()) return std::nullopt;

  const Intrinsics intr = P.intrinsics();
  const double c = std::cos(box.rotation_y);
  const double s = std::sin(box.rotation_y);
  // Box-local frame: origin at bottom-center, x in [-w/2, w/2], y in [-h, 0],
  // z in [-l/2, l/2]. Local = R(-ry) * (p - location).
  const double lo[3] = {-box.width / 2.0, -box.height, -box.length / 2.0};
  const double hi[3] = {box.width / 2.0, 0.0, box.length / 2.0};

  DepthPatch patch;
  patch.bounds = *bounds;
  patch.depth.assign(
      static_cast<size_t>(patch.patch_width()) * patch.patch_height(), 0.0);

  for (int py = bounds->y0; py <= bounds->y1; ++py) {
    for (int px = bounds->x0; px <= bounds->x1; ++px) {
      const double u = static_cast<double>(px);
      const double v = static_cast<double>(py);
      // Camera ray parameterized by metric depth t: origin at z = 0.
      const double ox = (intr.p34 * u - intr.p14) / intr.fx - box.x;
      const double oy = (intr.p34 * v - intr.p24) / intr.fy - box.y;
      const double oz = -box.z;
      const double dx = (u - intr.cx) / intr.fx;
      const double dy = (v - intr.cy) / intr.fy;
      const double o_local[3] = {c * ox - s * oz, oy, s * ox + c * oz};
      const double d_local[3] = {c * dx - s, dy, s * dx + c};

      double t_near = 0.0;
      double t_far = std::numeric_limits<double>::infinity();
      bool hit = true;
      for (int axis = 0; axis < 3 && hit; ++axis) {
        const double o_a = o_local[axis];
        const double d_a = d_local[axis];
        if (d_a == 0.0) {
          if (o_a < lo[axis] || o_a > hi[axis]) hit = false;
          continue;
        }
        double t0 = (lo[axis] - o_a) / d_a;
        double t1 = (hi[axis] - o_a) / d_a;
        if (t0 > t1) std::swap(t0, t1);
        t_near = std::max(t_near, t0);
        t_far = std::min(t_far, t1);
        if (t_near > t_far) hit = false;
      }
      if (hit && t_near > 0.0) {
        patch.depth[static_cast<size_t>(py - bounds->y0) * patch.patch_width() +
                    (px - bounds->x0)] = t_near;
      }
    }
  }
  return patch;
}

std::vector<ForegroundSplat> warp_foreground(const RGBImage& rgb, const ObjectLabel& label,
                                             const ProjectionMatrix& P, double dz) {
  std::vector<ForegroundSplat> splats;
  const std::optional<DepthPatch> patch =
      box_surface_depth(Box3D::from_label(label), P, rgb.width, rgb.height);
  if (!patch.has_value()) return splats;

  const Intrinsics intr = P.intrinsics();
  for (int y = patch->bounds.y0; y <= patch->bounds.y1; ++y) {
    for (int x = patch->bounds.x0; x <= patch->bounds.x1; ++x) {
      const double z = patch->at(x, y);
      if (!(z > 0.0)) continue;
      const double w_dst = z + dz + intr.p34;
      if (w_dst <= kSplatNearPlane) continue;
      CameraPoint point = unproject(static_cast<double>(x), static_cast<double>(y), z, intr);
      point.z += dz;
      const PixelProjection pix = project(point, P);
      const int ur = static_cast<int>(std::lround(pix.u));
      const int vr = static_cast<int>(std::lround(pix.v));
      if (ur < 0 || vr < 0 || ur >= rgb.width || vr >= rgb.height) continue;
      splats.push_back({ur, vr, rgb.rgb(x, y), w_dst});
    }
  }
  return splats;
}

SparseDepthMap remove_objects(const SparseDepthMap& depth,
                              const std::vector<ObjectLabel>& removable) {
  SparseDepthMap out = depth;
  for (const ObjectLabel& label : removable) {
    const std::optional<PixelRect> bounds =
        rect_pixel_bounds(label.bbox2d, depth.width, depth.height);
    if (!bounds.has_value()) continue;
    for (int y = bounds->y0; y <= bounds->y1; ++y) {
      for (int x = bounds->x0; x <= bounds->x1; ++x) {
        out.at(x, y) = 0.0;
      }
    }
  }
  return out;
}

RenderOutput compose(const RenderOutput& background,
                     const std::vector<ForegroundSplat>& splats) {
  const int width = background.rgb.width;
  const int height = background.rgb.height;
  SplatBuffer buffer(width, height);
  for (size_t i = 0; i < splats.size(); ++i) {
    const ForegroundSplat& splat = splats[i];
    if (splat.w <= kSplatNearPlane) continue;
    SplatKey key;
    key.w = splat.w;
    key.priority = 2;
    key.source = i;
    buffer.submit(splat.x, splat.y, splat.color, key);
  }

  RenderOutput out = background;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!buffer.filled(x, y)) continue;
      const double bg_w = out.render_depth.at(x, y);
      if (bg_w > 0.0 && buffer.w(x, y) >= bg_w) continue;
      out.rgb.set_rgb(x, y, buffer.color(x, y));
      out.render_depth.at(x, y) = buffer.w(x, y);
      out.hole_mask.at(x, y) = 0;
      out.fg_mask.at(x, y) = 1;
    }
  }
  return out;
}

}  // namespace vdepth
