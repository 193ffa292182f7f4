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

#include "vdepth/aux_loss.hpp"

#include <cmath>
#include <optional>

#include "vdepth/errors.hpp"
#include "vdepth/geometry.hpp"

namespace vdepth {

double smooth_l1(double residual, double beta) {
  if (!std::isfinite(residual)) throw Error(Errc::non_finite, "residual must be finite");
  if (!(beta > 0.0)) throw Error(Errc::value_out_of_range, "beta must be positive");
  const double r = std::abs(residual);
  if (r < beta) return 0.5 * r * r / beta;
  return r - 0.5 * beta;
}

DepthLossBreakdown weighted_depth_loss(const SparseDepthMap& pred, const SparseDepthMap& gt,
                                       const Mask& fg_mask, double lambda_fg,
                                       double lambda_bg, double beta) {
  if (pred.width != gt.width || pred.height != gt.height || fg_mask.width != gt.width ||
      fg_mask.height != gt.height) {
    throw Error(Errc::size_mismatch, "pred, gt and mask sizes differ");
  }
  DepthLossBreakdown out;
  double fg_sum = 0.0;
  double bg_sum = 0.0;
  for (std::size_t i = 0; i < gt.values.size(); ++i) {
    const double g = gt.values[i];
    if (!(g > 0.0)) continue;
    const double term = smooth_l1(pred.values[i] - g, beta);
    if (fg_mask.values[i] != 0) {
      fg_sum += term;
      ++out.n_fg;
    } else {
      bg_sum += term;
      ++out.n_bg;
    }
  }
  out.fg_loss = out.n_fg > 0 ? fg_sum / static_cast<double>(out.n_fg) : 0.0;
  out.bg_loss = out.n_bg > 0 ? bg_sum / static_cast<double>(out.n_bg) : 0.0;
  out.total = lambda_fg * out.fg_loss + lambda_bg * out.bg_loss;
  return out;
}

Mask foreground_mask(const std::vector<ObjectLabel>& labels, int width, int height) {
  Mask mask = Mask::zeros(width, height);
  for (const ObjectLabel& label : labels) {
    if (label.is_dontcare()) continue;
    const std::optional<PixelRect> bounds = rect_pixel_bounds(label.bbox2d, width, height);
    if (!bounds.has_value()) continue;
    for (int y = bounds->y0; y <= bounds->y1; ++y) {
      for (int x = bounds->x0; x <= bounds->x1; ++x) {
        mask.at(x, y) = 1;
      }
    }
  }
  return mask;
}

}  // namespace vdepth
