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
#include <vector>

#include "vdepth/image.hpp"
#include "vdepth/kitti_io.hpp"

namespace vdepth {

// 0.5 r^2 / beta for |r| < beta, |r| - 0.5 beta otherwise.
// Throws Errc::non_finite for a non-finite residual, Errc::value_out_of_range
// for beta <= 0.
double smooth_l1(double residual, double beta = 1.0);

struct DepthLossBreakdown {
  double fg_loss = 0;  // mean over foreground pixels with nonzero ground truth
  double bg_loss = 0;
  double total = 0;    // lambda_fg * fg_loss + lambda_bg * bg_loss
  std::size_t n_fg = 0;
  std::size_t n_bg = 0;
};

// Depth regression loss split by the foreground mask. Pixels with zero ground
// truth are excluded everywhere; an empty side contributes zero. Throws
// Errc::size_mismatch.
DepthLossBreakdown weighted_depth_loss(const SparseDepthMap& pred, const SparseDepthMap& gt,
                                       const Mask& fg_mask, double lambda_fg = 2.5,
                                       double lambda_bg = 1.0, double beta = 1.0);

// Union of the objects' bbox2d footprints; DontCare rows are skipped.
Mask foreground_mask(const std::vector<ObjectLabel>& labels, int width, int height);

}  // namespace vdepth
