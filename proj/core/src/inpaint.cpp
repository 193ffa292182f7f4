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

#include "vdepth/inpaint.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <thread>
#include <vector>

#include "png_io.hpp"
#include "vdepth/errors.hpp"

namespace vdepth {

namespace {

struct PyramidLevel {
  int width = 0;
  int height = 0;
  std::vector<float> color;   // 3 floats per pixel
  std::vector<float> weight;  // 0 = unknown
};

PyramidLevel downsample(const PyramidLevel& fine) {
  PyramidLevel coarse;
  coarse.width = (fine.width + 1) / 2;
  coarse.height = (fine.height + 1) / 2;
  coarse.color.assign(static_cast<size_t>(coarse.width) * coarse.height * 3, 0.0f);
  coarse.weight.assign(static_cast<size_t>(coarse.width) * coarse.height, 0.0f);
  for (int y = 0; y < coarse.height; ++y) {
    for (int x = 0; x < coarse.width; ++x) {
      float wsum = 0.0f;
      float c[3] = {0.0f, 0.0f, 0.0f};
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          const int fx = 2 * x + dx;
          const int fy = 2 * y + dy;
          if (fx >= fine.width || fy >= fine.height) continue;
          const size_t fi = static_cast<size_t>(fy) * fine.width + fx;
          const float w = fine.weight[fi];
          if (w <= 0.0f) continue;
          wsum += w;
          c[0] += w * fine.color[fi * 3];
          c[1] += w * fine.color[fi * 3 + 1];
          c[2] += w * fine.color[fi * 3 + 2];
        }
      }
      if (wsum > 0.0f) {
        const size_t ci = static_cast<size_t>(y) * coarse.width + x;
        coarse.color[ci * 3] = c[0] / wsum;
        coarse.color[ci * 3 + 1] = c[1] / wsum;
        coarse.color[ci * 3 + 2] = c[2] / wsum;
        coarse.weight[ci] = std::min(wsum, 1.0f);
      }
    }
  }
  return coarse;
}

}  // namespace

RGBImage fill_holes(const RGBImage& rgb, const Mask& holes, const InpaintConfig& cfg) {
  if (rgb.width != holes.width || rgb.height != holes.height) {
    throw Error(Errc::size_mismatch, "mask and image sizes differ");
  }
  if (cfg.max_iterations < 1 || cfg.pyramid_levels < 1) {
    throw Error(Errc::value_out_of_range, "inpaint config counts must be >= 1");
  }
  const size_t hole_total = holes.count();
  if (hole_total == 0) return rgb;
  const size_t pixel_total = static_cast<size_t>(rgb.width) * rgb.height;
  if (hole_total == pixel_total) {
    throw Error(Errc::all_pixels_invalid, "no valid pixels to fill from");
  }

  // Pull: average known colors down the pyramid.
  std::vector<PyramidLevel> pyramid(1);
  pyramid[0].width = rgb.width;
  pyramid[0].height = rgb.height;
  pyramid[0].color.resize(pixel_total * 3);
  pyramid[0].weight.resize(pixel_total);
  double mean[3] = {0.0, 0.0, 0.0};
  for (size_t i = 0; i < pixel_total; ++i) {
    const bool known = holes.values[i] == 0;
    pyramid[0].weight[i] = known ? 1.0f : 0.0f;
    for (int ch = 0; ch < 3; ++ch) {
      const float v = static_cast<float>(rgb.pixels[i * 3 + ch]);
      pyramid[0].color[i * 3 + ch] = known ? v : 0.0f;
      if (known) mean[ch] += v;
    }
  }
  for (double& m : mean) m /= static_cast<double>(pixel_total - hole_total);
  for (int level = 1; level < cfg.pyramid_levels; ++level) {
    if (pyramid.back().width == 1 && pyramid.back().height == 1) break;
    pyramid.push_back(downsample(pyramid.back()));
  }

  // Push: unknown pixels inherit from the parent level; the coarsest level
  // falls back to the global mean so every pixel ends up defined.
  PyramidLevel& top = pyramid.back();
  for (size_t i = 0; i < top.weight.size(); ++i) {
    if (top.weight[i] <= 0.0f) {
      for (int ch = 0; ch < 3; ++ch) top.color[i * 3 + ch] = static_cast<float>(mean[ch]);
    }
  }
  for (int level = static_cast<int>(pyramid.size()) - 2; level >= 0; --level) {
    PyramidLevel& fine = pyramid[level];
    const PyramidLevel& coarse = pyramid[level + 1];
    for (int y = 0; y < fine.height; ++y) {
      for (int x = 0; x < fine.width; ++x) {
        const size_t fi = static_cast<size_t>(y) * fine.width + x;
        if (fine.weight[fi] > 0.0f) continue;
        const size_t ci = static_cast<size_t>(y / 2) * coarse.width + (x / 2);
        fine.color[fi * 3] = coarse.color[ci * 3];
        fine.color[fi * 3 + 1] = coarse.color[ci * 3 + 1];
        fine.color[fi * 3 + 2] = coarse.color[ci * 3 + 2];
      }
    }
  }

  // Diffusion: Jacobi neighbor averaging over hole pixels with double
  // buffering, so the result does not depend on traversal order.
  std::vector<size_t> hole_indices;
  hole_indices.reserve(hole_total);
  for (size_t i = 0; i < pixel_total; ++i) {
    if (holes.values[i] != 0) hole_indices.push_back(i);
  }
  std::vector<float> front = std::move(pyramid[0].color);
  std::vector<float> back = front;
  const int width = rgb.width;
  const int height = rgb.height;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    float max_delta = 0.0f;
    for (const size_t i : hole_indices) {
      const int x = static_cast<int>(i % width);
      const int y = static_cast<int>(i / width);
      float sum[3] = {0.0f, 0.0f, 0.0f};
      int n = 0;
      const auto add = [&](size_t j) {
        sum[0] += front[j * 3];
        sum[1] += front[j * 3 + 1];
        sum[2] += front[j * 3 + 2];
        ++n;
      };
      if (x > 0) add(i - 1);
      if (x + 1 < width) add(i + 1);
      if (y > 0) add(i - width);
      if (y + 1 < height) add(i + width);
      for (int ch = 0; ch < 3; ++ch) {
        const float v = sum[ch] / static_cast<float>(n);
        max_delta = std::max(max_delta, std::abs(v - front[i * 3 + ch]));
        back[i * 3 + ch] = v;
      }
    }
    std::swap(front, back);
    if (max_delta < static_cast<float>(cfg.convergence_epsilon)) break;
  }

  RGBImage out = rgb;
  for (const size_t i : hole_indices) {
    for (int ch = 0; ch < 3; ++ch) {
      const long v = std::lround(front[i * 3 + ch]);
      out.pixels[i * 3 + ch] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
    }
  }
  return out;
}

RGBImage fill_holes_external(const RGBImage& rgb, const Mask& holes,
                             const ExternalInpainter& inpainter) {
  if (rgb.width != holes.width || rgb.height != holes.height) {
    throw Error(Errc::size_mismatch, "mask and image sizes differ");
  }
  const std::string rgb_path = inpainter.work_dir + "/inpaint_rgb.png";
  const std::string mask_path = inpainter.work_dir + "/inpaint_mask.png";
  const std::string out_path = inpainter.work_dir + "/inpaint_out.png";
  png_io::write_rgb8(rgb_path, rgb.width, rgb.height, rgb.pixels);
  std::vector<std::uint8_t> mask_bytes(holes.values.size());
  for (size_t i = 0; i < holes.values.size(); ++i) {
    mask_bytes[i] = holes.values[i] ? 255 : 0;
  }
  png_io::write_gray8(mask_path, holes.width, holes.height, mask_bytes);

  std::string command = inpainter.command;
  const auto expand = [&command](const std::string& token, const std::string& value) {
    for (size_t pos = command.find(token); pos != std::string::npos;
         pos = command.find(token, pos + value.size())) {
      command.replace(pos, token.size(), value);
    }
  };
  expand("{rgb}", rgb_path);
  expand("{mask}", mask_path);
  expand("{out}", out_path);
  // A stale output from an earlier run must never pass for this run's result.
  std::remove(out_path.c_str());

  const pid_t pid = fork();
  if (pid < 0) throw Error(Errc::inpaint_failed, "fork failed");
  if (pid == 0) {
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  const auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(inpainter.timeout_sec));
  int status = 0;
  for (;;) {
    const pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) throw Error(Errc::inpaint_failed, "waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      throw Error(Errc::inpaint_failed, "external inpainter timed out");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error(Errc::inpaint_failed, "external inpainter exited with failure");
  }

  RGBImage filled;
  filled.pixels = png_io::read_rgb8(out_path, &filled.width, &filled.height);
  if (filled.width != rgb.width || filled.height != rgb.height) {
    throw Error(Errc::inpaint_failed, "external inpainter returned a different size");
  }
  for (size_t i = 0; i < holes.values.size(); ++i) {
    if (holes.values[i] == 0) {
      filled.pixels[i * 3] = rgb.pixels[i * 3];
      filled.pixels[i * 3 + 1] = rgb.pixels[i * 3 + 1];
      filled.pixels[i * 3 + 2] = rgb.pixels[i * 3 + 2];
    }
  }
  return filled;
}

}  // namespace vdepth
