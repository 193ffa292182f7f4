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

#include <string>

#include "vdepth/image.hpp"

namespace vdepth {

struct InpaintConfig {
  int max_iterations = 200;
  double convergence_epsilon = 0.5;  // 8-bit units
  int pyramid_levels = 5;
};

// Fills masked pixels with a pull-push pyramid pass followed by Jacobi
// diffusion; unmasked pixels come back byte-identical. Deterministic.
// Throws Errc::size_mismatch, Errc::value_out_of_range for a bad config, and
// Errc::all_pixels_invalid when the mask covers the whole image.
RGBImage fill_holes(const RGBImage& rgb, const Mask& holes, const InpaintConfig& cfg);

// Hands the fill to an external command. {rgb}, {mask} and {out} in the
// command expand to PNG paths inside work_dir; the mask is written as 8-bit
// gray with 255 marking holes. Non-zero exit, timeout, or an output of the
// wrong size raise Errc::inpaint_failed. Unmasked pixels are restored from the
// input afterwards, so the preservation guarantee holds here too.
struct ExternalInpainter {
  std::string command;
  std::string work_dir;
  double timeout_sec = 60.0;
};

RGBImage fill_holes_external(const RGBImage& rgb, const Mask& holes,
                             const ExternalInpainter& inpainter);

}  // namespace vdepth
