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

#include "vdepth/scene.hpp"

#include <algorithm>
#include <cmath>

#include "vdepth/errors.hpp"

namespace vdepth {

namespace {

Rect2D image_rect(int width, int height) {
  return {0.0, 0.0, static_cast<double>(width - 1), static_cast<double>(height - 1)};
}

Rect2D intersect_rect(const Rect2D& a, const Rect2D& b) {
  return {std::max(a.left, b.left), std::max(a.top, b.top), std::min(a.right, b.right),
          std::min(a.bottom, b.bottom)};
}

double occlusion_factor(int level) {
  switch (level) {
    case 0:
      return 1.0;
    case 1:
      return 0.5;
    case 2:
      return 0.25;
    default:
      return 0.0;
  }
}

}  // namespace

std::array<CameraPoint, 8> corners_3d(const Box3D& box) {
  if (!(box.height > 0.0) || !(box.width > 0.0) || !(box.length > 0.0)) {
    throw Error(Errc::degenerate_box, "box dimensions must be positive");
  }
  const double hw = box.width / 2.0;
  const double hl = box.length / 2.0;
  const double c = std::cos(box.rotation_y);
  const double s = std::sin(box.rotation_y);
  const double sx[4] = {hw, hw, -hw, -hw};
  const double sz[4] = {hl, -hl, -hl, hl};
  std::array<CameraPoint, 8> corners;
  for (int i = 0; i < 8; ++i) {
    const double lx = sx[i % 4];
    const double lz = sz[i % 4];
    const double ly = (i < 4) ? 0.0 : -box.height;
    corners[i].x = c * lx + s * lz + box.x;
    corners[i].y = ly + box.y;
    corners[i].z = -s * lx + c * lz + box.z;
  }
  return corners;
}

BoxProjection project_box_2d(const Box3D& box, const ProjectionMatrix& P, int width,
                             int height) {
  const std::array<CameraPoint, 8> corners = corners_3d(box);
  std::vector<Vec2> points;
  points.reserve(8);
  for (const CameraPoint& corner : corners) {
    const PixelProjection pix = project(corner, P);
    points.push_back({pix.u, pix.v});
  }
  BoxProjection out;
  out.hull = convex_hull(points);
  out.bbox_unclipped = bounding_rect(points);
  const Rect2D img = image_rect(width, height);
  // Clamping both corners equals the intersection when the box overlaps the
  // image, and collapses a fully outside box to an ordered zero-area rect on
  // the nearest edge, so serialized corners are never inverted.
  out.bbox = {std::clamp(out.bbox_unclipped.left, img.left, img.right),
              std::clamp(out.bbox_unclipped.top, img.top, img.bottom),
              std::clamp(out.bbox_unclipped.right, img.left, img.right),
              std::clamp(out.bbox_unclipped.bottom, img.top, img.bottom)};
  const double hull_area = std::abs(polygon_area(out.hull));
  if (hull_area > 1e-12) {
    const std::vector<Vec2> clipped = clip_to_rect(out.hull, img);
    const double clipped_area = std::abs(polygon_area(clipped));
    out.in_image_fraction = std::clamp(clipped_area / hull_area, 0.0, 1.0);
  } else {
    out.in_image_fraction = 0.0;
  }
  out.truncation = 1.0 - out.in_image_fraction;
  return out;
}

ObjectLabel shift_label(const ObjectLabel& label, double dz, const ProjectionMatrix& P,
                        int width, int height) {
  ObjectLabel shifted = label;
  shifted.z = label.z + dz;
  if (!(shifted.z > kNearPlane)) {
    throw Error(Errc::too_close, "shifted box center at z = " + std::to_string(shifted.z));
  }
  shifted.alpha = wrap_angle(shifted.rotation_y - std::atan2(shifted.x, shifted.z));
  const BoxProjection proj = project_box_2d(Box3D::from_label(shifted), P, width, height);
  shifted.bbox2d = proj.bbox;
  shifted.truncation = proj.truncation;
  return shifted;
}

double visibility(const ObjectLabel& label, int width, int height) {
  const Rect2D overlap = intersect_rect(label.bbox2d, image_rect(width, height));
  if (overlap.empty()) return 0.0;
  const double in_image = std::clamp(1.0 - label.truncation, 0.0, 1.0);
  return in_image * occlusion_factor(label.occlusion);
}

TrainingSplit filter_training(const std::vector<ObjectLabel>& labels, int width, int height) {
  TrainingSplit split;
  for (const ObjectLabel& label : labels) {
    if (label.is_dontcare()) {
      split.ignored.push_back(label);
      continue;
    }
    const double box_height = label.bbox2d.height();
    const bool size_ok = box_height >= 16.0 && box_height <= 256.0;
    const bool visible = visibility(label, width, height) >= 0.5;
    if (size_ok && visible) {
      split.kept.push_back(label);
    } else {
      split.ignored.push_back(label);
    }
  }
  return split;
}

RenderSplit filter_rendering(const std::vector<ObjectLabel>& labels,
                             const std::vector<double>& visibilities) {
  if (labels.size() != visibilities.size()) {
    throw Error(Errc::size_mismatch, "one visibility value per label required");
  }
  RenderSplit split;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].is_dontcare()) continue;
    if (labels[i].truncation > 0.0 || visibilities[i] < 0.6) {
      split.removable.push_back(i);
    } else {
      split.renderable.push_back(i);
    }
  }
  return split;
}

Sample mirror_sample(const Sample& sample) {
  const int width = sample.rgb.width;
  const int height = sample.rgb.height;
  if (sample.depth.width != width || sample.depth.height != height) {
    throw Error(Errc::size_mismatch, "rgb and depth dimensions differ");
  }
  const double flip = static_cast<double>(width - 1);

  RGBImage rgb = sample.rgb;
  SparseDepthMap depth = sample.depth;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int mx = width - 1 - x;
      rgb.set_rgb(x, y, sample.rgb.rgb(mx, y));
      depth.at(x, y) = sample.depth.at(mx, y);
    }
  }

  std::vector<ObjectLabel> labels = sample.labels;
  for (ObjectLabel& label : labels) {
    const double left = label.bbox2d.left;
    label.bbox2d.left = flip - label.bbox2d.right;
    label.bbox2d.right = flip - left;
    if (label.is_dontcare()) continue;
    label.x = -label.x;
    label.rotation_y = wrap_angle(M_PI - label.rotation_y);
    label.alpha = wrap_angle(label.rotation_y - std::atan2(label.x, label.z));
  }

  Intrinsics intr = sample.P.intrinsics();
  intr.cx = flip - intr.cx;
  intr.p14 = flip * intr.p34 - intr.p14;
  return Sample{std::move(rgb), std::move(depth), std::move(labels),
                ProjectionMatrix::from_intrinsics(intr)};
}

}  // namespace vdepth
