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

#include <functional>
#include <string>
#include <vector>

#include "vdepth/kitti_io.hpp"
#include "vdepth/scene.hpp"

namespace vdepth {

// Rotated-footprint (x-z plane) intersection over union via convex polygon
// clipping. Throws Errc::degenerate_box for non-positive dimensions.
double iou_bev(const Box3D& a, const Box3D& b);

// Footprint intersection area times vertical overlap, over the volume union.
double iou_3d(const Box3D& a, const Box3D& b);

// KITTI-convention buckets: easy requires 2D height >= 40 px, occlusion 0 and
// truncation <= 0.15; moderate height >= 25, occlusion <= 1, truncation
// <= 0.30; hard height >= 25, occlusion <= 2, truncation <= 0.50. The
// strictest satisfied bucket wins; below hard is none.
enum class Difficulty { easy, moderate, hard, none };

Difficulty difficulty(const ObjectLabel& label);

enum class ApMode { eleven_point, forty_point };

// Ground truth and detections of one frame; detections carry the score field.
struct EvalFrame {
  std::vector<ObjectLabel> gts;
  std::vector<ObjectLabel> dets;
};

struct PRPoint {
  double recall = 0;
  double precision = 0;
};

struct ApResult {
  double ap = 0;  // percentage
  std::vector<PRPoint> curve;
};

using LabelIou = std::function<double(const ObjectLabel&, const ObjectLabel&)>;

// Overlap measures usable as the matching function.
double label_iou_bev(const ObjectLabel& a, const ObjectLabel& b);
double label_iou_3d(const ObjectLabel& a, const ObjectLabel& b);
double label_iou_2d(const ObjectLabel& a, const ObjectLabel& b);

// Greedy score-descending matching per frame; each ground-truth box matches at
// most once. Ground truth of the category harder than `level` is ignored:
// detections matching it count neither way, and it never counts as missed.
// Detections overlapping a DontCare region with 2D IoU > 0.5 are ignored too.
// AP is the mean of max-interpolated precision at 11 (0, 0.1, .., 1) or 40
// (1/40, .., 1) recall points, as a percentage.
ApResult average_precision(const std::vector<EvalFrame>& frames, const std::string& category,
                           Difficulty level, const LabelIou& iou_fn, double iou_thresh,
                           ApMode mode);

}  // namespace vdepth
