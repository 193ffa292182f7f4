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

#include <cstddef>
#include <span>
#include <vector>

#include "vdepth/camera.hpp"
#include "vdepth/geometry.hpp"
#include "vdepth/kitti_io.hpp"

namespace vdepth {

// Joint 2D-3D prior placed at every grid position: a 2D box size in pixels
// plus 3D dimensions, depth and yaw in metric units.
struct Anchor2D3D {
  double w2d = 0;    // pixels
  double h2d = 0;
  double w3d = 0;    // meters
  double h3d = 0;
  double l3d = 0;
  double z = 0;      // meters
  double theta = 0;  // radians, [-pi, pi)
};

// Regression output relative to an anchor. Centers are offsets in units of the
// anchor's 2D size, sizes are log ratios, depth is additive meters and the
// angle is an additive residual.
struct BoxPrediction {
  double u2d = 0;
  double v2d = 0;
  double w2d = 0;
  double h2d = 0;
  double w3d = 0;
  double h3d = 0;
  double l3d = 0;
  double dz = 0;
  double theta = 0;
};

struct DecodedBox {
  double x2d = 0;  // 2D center, pixels
  double y2d = 0;
  double w2d = 0;
  double h2d = 0;
  double h3d = 0;  // meters
  double w3d = 0;
  double l3d = 0;
  double theta = 0;
  double x = 0;    // location recovered from the 2D center and depth
  double y = 0;
  double z = 0;
  double score = 0;

  Rect2D rect() const {
    return {x2d - w2d / 2.0, y2d - h2d / 2.0, x2d + w2d / 2.0, y2d + h2d / 2.0};
  }
};

// Applies a prediction to the anchor at grid position (u, v): centers move by
// size-scaled offsets, sizes scale by e^p, depth adds, angle wraps, and the 3D
// location comes from recover_location at the decoded center. Throws
// Errc::behind_camera when the decoded depth is not in front of the camera.
DecodedBox decode(const Anchor2D3D& anchor, double u, double v, const BoxPrediction& pred,
                  const ProjectionMatrix& P);

// Exact inverse of decode on every regression field.
BoxPrediction encode(const Anchor2D3D& anchor, double u, double v, const DecodedBox& target);

enum class AnchorRole { positive, negative, ignored };

struct AnchorAssignment {
  AnchorRole role = AnchorRole::negative;
  std::size_t gt_index = 0;  // meaningful for positives only
};

// IoU >= 0.5 against a ground-truth box makes an anchor positive (argmax box,
// ties to the lower index); otherwise IoU > 0.5 against any ignore region makes
// it ignored; everything else is negative.
std::vector<AnchorAssignment> assign_targets(std::span<const Rect2D> anchors,
                                             std::span<const Rect2D> gt_boxes,
                                             std::span<const Rect2D> ignore_regions);

struct HardNegativeSelection {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
};

// Keeps every positive anchor and the min(3 * #positives, #negatives) negatives
// with the largest loss; loss ties break toward the lower index. Index lists
// come back sorted ascending. Throws Errc::non_finite and Errc::size_mismatch.
HardNegativeSelection ohnm_select(std::span<const double> losses,
                                  std::span<const AnchorAssignment> assignments);

// Greedy score-descending suppression on 2D IoU. Returns indices of the kept
// boxes in descending-score order (score ties keep the lower index first).
std::vector<std::size_t> nms(std::span<const DecodedBox> boxes, double score_thresh = 0.75,
                             double iou_thresh = 0.4);

// Data-derived priors: labels are split into equal-count depth bins and each
// bin contributes one anchor with mean sizes, mean depth and circular-mean yaw.
// DontCare rows are skipped; empty bins produce no anchor.
std::vector<Anchor2D3D> anchor_priors_from_labels(const std::vector<ObjectLabel>& labels,
                                                  int num_bins = 12);

}  // namespace vdepth
