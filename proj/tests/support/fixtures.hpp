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

#include <cstdint>
#include <string>
#include <vector>

#include "vdepth/camera.hpp"
#include "vdepth/image.hpp"
#include "vdepth/kitti_io.hpp"
#include "vdepth/scene.hpp"

namespace vdepth::testing {

// Deterministic 64-bit stream for fixture construction (splitmix64).
struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
};

// Stateless pixel hash for sparsity patterns and noise.
std::uint64_t pixel_hash(std::uint64_t seed, std::uint64_t x, std::uint64_t y);

// KITTI-like rectified projection matrix.
ProjectionMatrix kitti_projection();

// Per-pixel varying RGB texture (smooth waves plus hash noise), deterministic
// in the seed.
RGBImage textured_rgb(int width, int height, std::uint64_t seed);

struct FrameBundle {
  RGBImage rgb;
  SparseDepthMap depth;
  std::vector<ObjectLabel> labels;
  ProjectionMatrix P;
};

// Synthetic street scene: ground plane, back wall and n_boxes labeled cars,
// with depth raycast analytically so image, depth and labels stay consistent.
// density in (0, 1] keeps that fraction of depth pixels.
FrameBundle make_frame(std::uint64_t seed, int width = 1248, int height = 384,
                       int n_boxes = 3, double density = 0.55);

// Fronto-parallel textured plane filling the image at constant depth z, dense.
FrameBundle make_plane_frame(std::uint64_t seed, int width, int height, double z);

// Car label at a given pose; bbox2d, truncation and alpha are derived from the
// projection.
ObjectLabel make_car(double x, double y, double z, double ry, const ProjectionMatrix& P,
                     int width, int height, double h = 1.5, double w = 1.7, double l = 4.0);

// Writes images/, depth/, calib/, label/ and split.txt under root.
void write_dataset(const std::string& root, const std::vector<std::string>& ids,
                   const std::vector<FrameBundle>& frames, const std::string& calib_key = "P2");

// Fresh directory under the system temp dir; caller owns cleanup (tests leave
// them for post-mortem, the OS tmp reaper collects them).
std::string make_temp_dir(const std::string& tag);

void remove_tree(const std::string& path);

// Reads a whole file as bytes; empty on failure.
std::vector<unsigned char> slurp(const std::string& path);

// Compares two directory trees byte for byte (same relative paths, same file
// contents). Returns a description of the first difference, empty when equal.
std::string compare_trees(const std::string& a, const std::string& b);

}  // namespace vdepth::testing
