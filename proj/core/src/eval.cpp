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

#include "vdepth/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vdepth/errors.hpp"
#include "vdepth/geometry.hpp"

namespace vdepth {

namespace {

constexpr double kAreaEpsilon = 1e-12;

// Bottom-face footprint in the x-z plane, counter-clockwise.
std::array<Vec2, 4> footprint(const Box3D& box) {
  const std::array<CameraPoint, 8> corners = corners_3d(box);
  return {{{corners[0].x, corners[0].z},
           {corners[3].x, corners[3].z},
           {corners[2].x, corners[2].z},
           {corners[1].x, corners[1].z}}};
}

double clipped_area(const std::array<Vec2, 4>& subject, const std::array<Vec2, 4>& clip) {
  std::vector<Vec2> poly(subject.begin(), subject.end());
  for (int i = 0; i < 4 && !poly.empty(); ++i) {
    poly = clip_polygon(poly, clip[i], clip[(i + 1) % 4]);
  }
  return std::abs(polygon_area(poly));
}

// Averaging the two clip orders makes the result symmetric bit-for-bit.
double footprint_intersection(const Box3D& a, const Box3D& b) {
  const std::array<Vec2, 4> fa = footprint(a);
  const std::array<Vec2, 4> fb = footprint(b);
  const double area = (clipped_area(fa, fb) + clipped_area(fb, fa)) / 2.0;
  return area > kAreaEpsilon ? area : 0.0;
}

}  // namespace

double iou_bev(const Box3D& a, const Box3D& b) {
  const double inter = footprint_intersection(a, b);
  const double area_a = a.width * a.length;
  const double area_b = b.width * b.length;
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double iou_3d(const Box3D& a, const Box3D& b) {
  const double inter_area = footprint_intersection(a, b);
  const double overlap_y =
      std::min(a.y, b.y) - std::max(a.y - a.height, b.y - b.height);
  const double inter_vol = overlap_y > 0.0 ? inter_area * overlap_y : 0.0;
  const double vol_a = a.width * a.length * a.height;
  const double vol_b = b.width * b.length * b.height;
  const double uni = vol_a + vol_b - inter_vol;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter_vol / uni, 0.0, 1.0);
}

Difficulty difficulty(const ObjectLabel& label) {
  const double h = label.bbox2d.height();
  if (h >= 40.0 && label.occlusion <= 0 && label.truncation <= 0.15) return Difficulty::easy;
  if (h >= 25.0 && label.occlusion <= 1 && label.truncation <= 0.30) return Difficulty::moderate;
  if (h >= 25.0 && label.occlusion <= 2 && label.truncation <= 0.50) return Difficulty::hard;
  return Difficulty::none;
}

double label_iou_bev(const ObjectLabel& a, const ObjectLabel& b) {
  return iou_bev(Box3D::from_label(a), Box3D::from_label(b));
}

double label_iou_3d(const ObjectLabel& a, const ObjectLabel& b) {
  return iou_3d(Box3D::from_label(a), Box3D::from_label(b));
}

double label_iou_2d(const ObjectLabel& a, const ObjectLabel& b) {
  return iou_rect(a.bbox2d, b.bbox2d);
}

ApResult average_precision(const std::vector<EvalFrame>& frames, const std::string& category,
                           Difficulty level, const LabelIou& iou_fn, double iou_thresh,
                           ApMode mode) {
  const int level_rank = static_cast<int>(level);

  struct FrameState {
    std::vector<std::size_t> valid_gts;
    std::vector<std::size_t> ignored_gts;
    std::vector<std::size_t> dontcare_gts;
    std::vector<bool> matched;
  };

  std::vector<FrameState> states(frames.size());
  std::size_t n_valid = 0;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    FrameState& state = states[f];
    state.matched.assign(frames[f].gts.size(), false);
    for (std::size_t g = 0; g < frames[f].gts.size(); ++g) {
      const ObjectLabel& gt = frames[f].gts[g];
      if (gt.is_dontcare()) {
        state.dontcare_gts.push_back(g);
      } else if (gt.category == category) {
        if (static_cast<int>(difficulty(gt)) <= level_rank) {
          state.valid_gts.push_back(g);
          ++n_valid;
        } else {
          state.ignored_gts.push_back(g);
        }
      }
    }
  }

  struct DetRef {
    std::size_t frame;
    std::size_t det;
    double score;
  };
  std::vector<DetRef> dets;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (std::size_t d = 0; d < frames[f].dets.size(); ++d) {
      const ObjectLabel& det = frames[f].dets[d];
      if (det.category != category) continue;
      dets.push_back({f, d, det.score.value_or(0.0)});
    }
  }
  std::sort(dets.begin(), dets.end(), [](const DetRef& a, const DetRef& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.det < b.det;
  });

  ApResult result;
  if (n_valid == 0) return result;

  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const DetRef& ref : dets) {
    const ObjectLabel& det = frames[ref.frame].dets[ref.det];
    FrameState& state = states[ref.frame];

    double best_iou = 0.0;
    std::size_t best_gt = 0;
    bool found = false;
    for (const std::size_t g : state.valid_gts) {
      if (state.matched[g]) continue;
      const double iou = iou_fn(det, frames[ref.frame].gts[g]);
      if (iou >= iou_thresh && iou > best_iou) {
        best_iou = iou;
        best_gt = g;
        found = true;
      }
    }
    if (found) {
      state.matched[best_gt] = true;
      ++tp;
      result.curve.push_back({static_cast<double>(tp) / static_cast<double>(n_valid),
                              static_cast<double>(tp) / static_cast<double>(tp + fp)});
      continue;
    }

    bool ignored = false;
    for (const std::size_t g : state.ignored_gts) {
      if (iou_fn(det, frames[ref.frame].gts[g]) >= iou_thresh) {
        ignored = true;
        break;
      }
    }
    if (!ignored) {
      for (const std::size_t g : state.dontcare_gts) {
        if (label_iou_2d(det, frames[ref.frame].gts[g]) > 0.5) {
          ignored = true;
          break;
        }
      }
    }
    if (ignored) continue;

    ++fp;
    result.curve.push_back({static_cast<double>(tp) / static_cast<double>(n_valid),
                            static_cast<double>(tp) / static_cast<double>(tp + fp)});
  }

  const int n_points = mode == ApMode::eleven_point ? 11 : 40;
  double sum = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double r = mode == ApMode::eleven_point ? static_cast<double>(i) / 10.0
                                                  : static_cast<double>(i + 1) / 40.0;
    double best = 0.0;
    for (const PRPoint& point : result.curve) {
      if (point.recall >= r - 1e-9) best = std::max(best, point.precision);
    }
    sum += best;
  }
  result.ap = 100.0 * sum / static_cast<double>(n_points);
  return result;
}

}  // namespace vdepth
