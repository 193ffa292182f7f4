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
#include <cstddef>
#include <vector>

#include "vdepth/camera.hpp"
#include "vdepth/geometry.hpp"
#include "vdepth/image.hpp"
#include "vdepth/kitti_io.hpp"

namespace vdepth {

// Oriented 3D box, KITTI convention: location is the bottom-face center,
// y points down, rotation about the y axis. At rotation_y = 0 the width spans
// x and the length spans z.
struct Box3D {
  double height = 0;
  double width = 0;
  double length = 0;
  double x = 0;
  double y = 0;
  double z = 0;
  double rotation_y = 0;

  static Box3D from_label(const ObjectLabel& label) {
    return {label.height, label.width, label.length,
            label.x,      label.y,     label.z,      label.rotation_y};
  }
};

// Corners 0..3 are the bottom face (y = box.y), 4..7 the top face, each in
// (+x,+z), (+x,-z), (-x,-z), (-x,+z) order before rotation.
std::array<CameraPoint, 8> corners_3d(const Box3D& box);

// Projection of a box into the image plane. The hull is the unclipped convex
// hull of the 8 projected corners; fractions are ratios of polygon areas
// against the image rectangle [0, W-1] x [0, H-1].
struct BoxProjection {
  Rect2D bbox;              // axis-aligned, clipped to the image rectangle
  Rect2D bbox_unclipped;
  std::vector<Vec2> hull;
  double in_image_fraction = 0;
  double truncation = 0;    // 1 - in_image_fraction
};

// Throws Errc::behind_camera when any corner has projective weight <= 0.
BoxProjection project_box_2d(const Box3D& box, const ProjectionMatrix& P, int width,
                             int height);

constexpr double kNearPlane = 0.5;  // meters

// Moves the box dz meters along the camera z axis. rotation_y, dimensions and
// x, y stay fixed; alpha, bbox2d and truncation are recomputed from the shifted
// geometry. Throws Errc::too_close when z + dz <= kNearPlane and propagates
// Errc::behind_camera when a corner ends up at non-positive projective weight.
ObjectLabel shift_label(const ObjectLabel& label, double dz, const ProjectionMatrix& P,
                        int width, int height);

// In-image fraction (1 - truncation) scaled by an occlusion factor:
// level 0 -> 1.0, 1 -> 0.5, 2 -> 0.25, 3 and unknown -> 0.0. Returns 0 when the
// stored bbox2d does not intersect the image rectangle.
double visibility(const ObjectLabel& label, int width, int height);

struct TrainingSplit {
  std::vector<ObjectLabel> kept;
  std::vector<ObjectLabel> ignored;
};

// Objects with 2D height < 16 px, > 256 px, or visibility < 0.5 become ignore
// regions. DontCare rows always land in ignored.
TrainingSplit filter_training(const std::vector<ObjectLabel>& labels, int width, int height);

struct RenderSplit {
  std::vector<std::size_t> renderable;
  std::vector<std::size_t> removable;
};

// Index lists into `labels`. Objects truncated by the camera (truncation > 0)
// or with visibility below 0.6 get their pixels erased and inpainted instead of
// warped. DontCare rows join neither list.
RenderSplit filter_rendering(const std::vector<ObjectLabel>& labels,
                             const std::vector<double>& visibilities);

struct Sample {
  RGBImage rgb;
  SparseDepthMap depth;
  std::vector<ObjectLabel> labels;
  ProjectionMatrix P;
};

// Horizontal flip of the full sample. Pixel u maps to (W-1) - u, so the
// adjusted matrix keeps projection consistent with the flipped image:
// cx' = (W-1) - cx, p14' = (W-1) * p34 - p14. Involution.
Sample mirror_sample(const Sample& sample);

}  // namespace vdepth
