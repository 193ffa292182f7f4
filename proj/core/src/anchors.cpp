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

#include "vdepth/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vdepth/errors.hpp"

namespace vdepth {

DecodedBox decode(const Anchor2D3D& anchor, double u, double v, const BoxPrediction& pred,
                  const ProjectionMatrix& P) {
  DecodedBox box;
  box.x2d = u + anchor.w2d * pred.u2d;
  box.y2d = v + anchor.h2d * pred.v2d;
  box.w2d = anchor.w2d * std::exp(pred.w2d);
  box.h2d = anchor.h2d * std::exp(pred.h2d);
  box.w3d = anchor.w3d * std::exp(pred.w3d);
  box.h3d = anchor.h3d * std::exp(pred.h3d);
  box.l3d = anchor.l3d * std::exp(pred.l3d);
  box.theta = wrap_angle(anchor.theta + pred.theta);
  box.z = anchor.z + pred.dz;
  const CameraPoint location = recover_location(box.x2d, box.y2d, box.z, P);
  box.x = location.x;
  box.y = location.y;
  return box;
}

BoxPrediction encode(const Anchor2D3D& anchor, double u, double v, const DecodedBox& target) {
  if (!(target.w2d > 0.0) || !(target.h2d > 0.0) || !(target.w3d > 0.0) ||
      !(target.h3d > 0.0) || !(target.l3d > 0.0)) {
    throw Error(Errc::degenerate_box, "target sizes must be positive");
  }
  BoxPrediction pred;
  pred.u2d = (target.x2d - u) / anchor.w2d;
  pred.v2d = (target.y2d - v) / anchor.h2d;
  pred.w2d = std::log(target.w2d / anchor.w2d);
  pred.h2d = std::log(target.h2d / anchor.h2d);
  pred.w3d = std::log(target.w3d / anchor.w3d);
  pred.h3d = std::log(target.h3d / anchor.h3d);
  pred.l3d = std::log(target.l3d / anchor.l3d);
  pred.theta = wrap_angle(target.theta - anchor.theta);
  pred.dz = target.z - anchor.z;
  return pred;
}

std::vector<AnchorAssignment> assign_targets(std::span<const Rect2D> anchors,
                                             std::span<const Rect2D> gt_boxes,
                                             std::span<const Rect2D> ignore_regions) {
  std::vector<AnchorAssignment> out(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    double best_iou = 0.0;
    std::size_t best_gt = 0;
    for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
      const double iou = iou_rect(anchors[i], gt_boxes[g]);
      if (iou > best_iou) {
        best_iou = iou;
        best_gt = g;
      }
    }
    if (best_iou >= 0.5) {
      out[i] = {AnchorRole::positive, best_gt};
      continue;
    }
    bool ignored = false;
    for (const Rect2D& region : ignore_regions) {
      if (iou_rect(anchors[i], region) > 0.5) {
        ignored = true;
        break;
      }
    }
    out[i] = {ignored ? AnchorRole::ignored : AnchorRole::negative, 0};
  }
  return out;
}

HardNegativeSelection ohnm_select(std::span<const double> losses,
                                  std::span<const AnchorAssignment> assignments) {
  if (losses.size() != assignments.size()) {
    throw Error(Errc::size_mismatch, "one loss per anchor required");
  }
  for (const double loss : losses) {
    if (!std::isfinite(loss)) throw Error(Errc::non_finite, "loss values must be finite");
  }
  HardNegativeSelection sel;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i].role == AnchorRole::positive) {
      sel.positives.push_back(i);
    } else if (assignments[i].role == AnchorRole::negative) {
      negatives.push_back(i);
    }
  }
  const std::size_t quota = std::min(3 * sel.positives.size(), negatives.size());
  std::partial_sort(negatives.begin(), negatives.begin() + quota, negatives.end(),
                    [&losses](std::size_t a, std::size_t b) {
                      if (losses[a] != losses[b]) return losses[a] > losses[b];
                      return a < b;
                    });
  negatives.resize(quota);
  std::sort(negatives.begin(), negatives.end());
  sel.negatives = std::move(negatives);
  return sel;
}

std::vector<std::size_t> nms(std::span<const DecodedBox> boxes, double score_thresh,
                             double iou_thresh) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (boxes[i].score > score_thresh) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&boxes](std::size_t a, std::size_t b) {
    if (boxes[a].score != boxes[b].score) return boxes[a].score > boxes[b].score;
    return a < b;
  });
  std::vector<std::size_t> kept;
  for (const std::size_t i : order) {
    bool suppressed = false;
    for (const std::size_t k : kept) {
      if (iou_rect(boxes[i].rect(), boxes[k].rect()) > iou_thresh) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(i);
  }
  return kept;
}

std::vector<Anchor2D3D> anchor_priors_from_labels(const std::vector<ObjectLabel>& labels,
                                                  int num_bins) {
  if (num_bins < 1) throw Error(Errc::value_out_of_range, "num_bins must be >= 1");
  std::vector<const ObjectLabel*> objects;
  for (const ObjectLabel& label : labels) {
    if (!label.is_dontcare()) objects.push_back(&label);
  }
  std::sort(objects.begin(), objects.end(),
            [](const ObjectLabel* a, const ObjectLabel* b) { return a->z < b->z; });

  std::vector<Anchor2D3D> priors;
  const std::size_t n = objects.size();
  for (int bin = 0; bin < num_bins; ++bin) {
    const std::size_t begin = n * bin / num_bins;
    const std::size_t end = n * (bin + 1) / num_bins;
    if (begin >= end) continue;
    Anchor2D3D prior;
    double sin_sum = 0.0;
    double cos_sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const ObjectLabel& label = *objects[i];
      prior.w2d += label.bbox2d.width();
      prior.h2d += label.bbox2d.height();
      prior.w3d += label.width;
      prior.h3d += label.height;
      prior.l3d += label.length;
      prior.z += label.z;
      sin_sum += std::sin(label.rotation_y);
      cos_sum += std::cos(label.rotation_y);
    }
    const double count = static_cast<double>(end - begin);
    prior.w2d /= count;
    prior.h2d /= count;
    prior.w3d /= count;
    prior.h3d /= count;
    prior.l3d /= count;
    prior.z /= count;
    prior.theta = (sin_sum == 0.0 && cos_sum == 0.0)
                      ? 0.0
                      : wrap_angle(std::atan2(sin_sum, cos_sum));
    priors.push_back(prior);
  }
  return priors;
}

}  // namespace vdepth
