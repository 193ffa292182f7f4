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
#include <cstdint>
#include <string>
#include <vector>

#include "vdepth/camera.hpp"
#include "vdepth/image.hpp"
#include "vdepth/inpaint.hpp"
#include "vdepth/kitti_io.hpp"
#include "vdepth/scene.hpp"

namespace vdepth {

// Dataset roots hold images/, depth/, calib/ and label/ directories with one
// file per frame id.
struct AugmentConfig {
  std::string input_root;
  std::string output_root;
  std::string split_file;          // one frame id per line
  std::uint64_t seed = 0;
  int n_pos_samples = 2;
  std::array<double, 2> pos_range = {0.0, 5.0};   // meters
  int n_neg_samples = 1;
  std::array<double, 2> neg_range = {-1.0, 0.0};  // meters
  double mirror_prob = 0.25;
  int pad_width = 1248;
  int pad_height = 384;
  int workers = 1;
  std::string calib_key = "P2";
  InpaintConfig inpaint;
  std::string external_inpaint_command;  // empty = built-in fill
  double external_inpaint_timeout_sec = 60.0;
};

// Reads a JSON config file; unknown keys are rejected. Throws
// Errc::malformed_line / Errc::value_out_of_range / Errc::io_error.
AugmentConfig load_augment_config(const std::string& path);

void check_augment_config(const AugmentConfig& cfg);

// Deterministic per-frame random stream: the state depends only on the seed
// and the frame id, so worker scheduling cannot change any sample.
class FrameRng {
 public:
  FrameRng(std::uint64_t seed, const std::string& frame_id);

  std::uint64_t next();
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)

 private:
  std::uint64_t state_;
};

// n_pos_samples values from pos_range followed by n_neg_samples from
// neg_range, in draw order.
std::vector<double> sample_displacements(FrameRng& rng, const AugmentConfig& cfg);

struct FrameData {
  std::string id;
  RGBImage rgb;
  SparseDepthMap depth;
  std::vector<ObjectLabel> labels;
  ProjectionMatrix P;
};

FrameData load_frame(const AugmentConfig& cfg, const std::string& frame_id);

// One synthesized training sample: remove unrenderable objects, splat the
// background and the remaining foregrounds under dz, fill holes, shift the
// labels, pad to the configured size, then optionally mirror.
struct RenderedSample {
  RGBImage rgb;
  SparseDepthMap render_depth;  // projective depth per pixel, 0 = hole
  Mask hole_mask;               // pre-inpaint holes
  std::vector<ObjectLabel> labels;
  std::array<double, 12> calib;
  std::vector<int> dropped_objects;  // input label row indices
  bool mirrored = false;
  int source_width = 0;
  int source_height = 0;
};

RenderedSample synthesize_sample(const FrameData& frame, double dz, bool mirror,
                                 const AugmentConfig& cfg);

struct SampleRecord {
  std::string id;
  std::string source_frame;
  double dz = 0;
  bool mirrored = false;
  std::string image_path;  // relative to the output root
  std::string label_path;
  std::string calib_path;
  std::vector<int> dropped_objects;
  int source_width = 0;
  int source_height = 0;
};

struct FrameIssue {
  std::string frame;
  std::string message;
};

struct AugmentResult {
  std::vector<SampleRecord> samples;
  std::vector<FrameIssue> errors;
  std::string manifest_path;
};

// Runs the full augmentation over the split with a worker pool and writes
// images/, label/, calib/ and manifest.json under the output root. Per-frame
// failures land in the manifest and in `errors`; unusable configuration or an
// unwritable output root throw.
AugmentResult augment(const AugmentConfig& cfg);

std::vector<std::string> read_split(const std::string& path);

// Serializes a projection matrix as "<key>: <12 numbers>" with round-trip
// precision.
std::string serialize_calibration(const std::array<double, 12>& values,
                                  const std::string& key);

struct ValidationReport {
  std::vector<FrameIssue> issues;
  std::size_t frames_checked = 0;
};

// Existence, parseability, size consistency and label sanity for every frame
// of the split (or every image file when no split is given).
ValidationReport validate_dataset(const std::string& root, const std::string& split_file,
                                  const std::string& calib_key = "P2");

}  // namespace vdepth
