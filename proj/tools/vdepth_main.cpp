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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vdepth/errors.hpp"
#include "vdepth/eval.hpp"
#include "vdepth/kitti_io.hpp"
#include "vdepth/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitFatal = 2;

int run_augment(const std::string& config_path, const std::vector<std::uint64_t>& seed,
                const std::vector<int>& workers) {
  vdepth::AugmentConfig cfg = vdepth::load_augment_config(config_path);
  if (!seed.empty()) cfg.seed = seed.back();
  if (!workers.empty()) cfg.workers = workers.back();
  const vdepth::AugmentResult result = vdepth::augment(cfg);
  std::printf("wrote %zu samples, %zu frame errors, manifest at %s\n", result.samples.size(),
              result.errors.size(), result.manifest_path.c_str());
  for (const vdepth::FrameIssue& issue : result.errors) {
    std::fprintf(stderr, "frame %s: %s\n", issue.frame.c_str(), issue.message.c_str());
  }
  return result.errors.empty() ? kExitOk : kExitPartial;
}

int run_validate(const std::string& root, const std::string& split,
                 const std::string& calib_key) {
  const vdepth::ValidationReport report = vdepth::validate_dataset(root, split, calib_key);
  for (const vdepth::FrameIssue& issue : report.issues) {
    std::printf("%s: %s\n", issue.frame.empty() ? "(dataset)" : issue.frame.c_str(),
                issue.message.c_str());
  }
  std::printf("checked %zu frames, %zu issues\n", report.frames_checked, report.issues.size());
  return report.issues.empty() ? kExitOk : kExitPartial;
}

int run_score(const std::string& gt_dir, const std::string& det_dir,
              const std::string& category, const std::vector<double>& thresholds,
              const std::string& metric, int points) {
  std::vector<std::string> frames;
  for (const auto& entry : fs::directory_iterator(gt_dir)) {
    if (entry.path().extension() == ".txt") frames.push_back(entry.path().stem().string());
  }
  std::sort(frames.begin(), frames.end());

  std::vector<vdepth::EvalFrame> eval_frames;
  eval_frames.reserve(frames.size());
  for (const std::string& frame : frames) {
    vdepth::EvalFrame ef;
    ef.gts = vdepth::load_labels(gt_dir + "/" + frame + ".txt");
    const std::string det_path = det_dir + "/" + frame + ".txt";
    if (fs::exists(det_path)) ef.dets = vdepth::load_labels(det_path);
    eval_frames.push_back(std::move(ef));
  }

  vdepth::LabelIou iou_fn;
  if (metric == "3d") {
    iou_fn = vdepth::label_iou_3d;
  } else if (metric == "bev") {
    iou_fn = vdepth::label_iou_bev;
  } else {
    iou_fn = vdepth::label_iou_2d;
  }
  const vdepth::ApMode mode =
      points == 11 ? vdepth::ApMode::eleven_point : vdepth::ApMode::forty_point;

  for (const double thresh : thresholds) {
    std::printf("%s AP%d@%.2f (%s):", category.c_str(), points, thresh, metric.c_str());
    const char* names[3] = {"easy", "moderate", "hard"};
    const vdepth::Difficulty levels[3] = {vdepth::Difficulty::easy,
                                          vdepth::Difficulty::moderate,
                                          vdepth::Difficulty::hard};
    for (int i = 0; i < 3; ++i) {
      const vdepth::ApResult ap =
          vdepth::average_precision(eval_frames, category, levels[i], iou_fn, thresh, mode);
      std::printf(" %s %.2f", names[i], ap.ap);
    }
    std::printf("\n");
  }
  return kExitOk;
}

int run_render_one(const std::string& config_path, const std::string& frame_id, double dz,
                   bool mirror, const std::string& out_dir) {
  vdepth::AugmentConfig cfg = vdepth::load_augment_config(config_path);
  const vdepth::FrameData frame = vdepth::load_frame(cfg, frame_id);
  const vdepth::RenderedSample sample = vdepth::synthesize_sample(frame, dz, mirror, cfg);

  fs::create_directories(out_dir);
  vdepth::save_rgb(sample.rgb, out_dir + "/image.png");
  vdepth::save_labels(sample.labels, out_dir + "/label.txt");
  vdepth::write_text_file(out_dir + "/calib.txt",
                          vdepth::serialize_calibration(sample.calib, cfg.calib_key));
  vdepth::save_depth(sample.render_depth, out_dir + "/render_depth.png");
  vdepth::RGBImage mask_image =
      vdepth::RGBImage::filled(sample.hole_mask.width, sample.hole_mask.height, 0, 0, 0);
  for (int y = 0; y < sample.hole_mask.height; ++y) {
    for (int x = 0; x < sample.hole_mask.width; ++x) {
      const std::uint8_t v = sample.hole_mask.at(x, y) ? 255 : 0;
      mask_image.set_rgb(x, y, {v, v, v});
    }
  }
  vdepth::save_rgb(mask_image, out_dir + "/hole_mask.png");
  std::printf("rendered %s at dz=%g (%zu labels, %zu holes) into %s\n", frame_id.c_str(), dz,
              sample.labels.size(), sample.hole_mask.count(), out_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"virtual-depth training frame synthesis and scoring"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::uint64_t> seed_override;
  std::vector<int> workers_override;
  CLI::App* augment = app.add_subcommand("augment", "synthesize displaced frames for a split");
  augment->add_option("--config", config_path, "JSON config file")->required();
  augment->add_option("--seed", seed_override, "override the config seed");
  augment->add_option("--workers", workers_override, "override the worker count");

  std::string val_root;
  std::string val_split;
  std::string val_calib_key = "P2";
  CLI::App* validate = app.add_subcommand("validate", "check a dataset tree");
  validate->add_option("--root", val_root, "dataset root")->required();
  validate->add_option("--split", val_split, "frame id list (default: every image)");
  validate->add_option("--calib-key", val_calib_key, "projection matrix key");

  std::string gt_dir;
  std::string det_dir;
  std::string category = "Car";
  std::vector<double> thresholds;
  std::string metric = "3d";
  int points = 11;
  CLI::App* score = app.add_subcommand("score", "average precision of detections");
  score->add_option("--gt", gt_dir, "ground-truth label directory")->required();
  score->add_option("--det", det_dir, "detection label directory")->required();
  score->add_option("--category", category, "object category");
  score->add_option("--iou", thresholds, "IoU thresholds (default 0.7 0.5)");
  score->add_option("--metric", metric, "overlap measure")
      ->check(CLI::IsMember({"3d", "bev", "2d"}));
  score->add_option("--points", points, "interpolation points")
      ->check(CLI::IsMember({11, 40}));

  std::string render_config;
  std::string render_frame;
  double render_dz = 0.0;
  bool render_mirror = false;
  std::string render_out = "render_one";
  CLI::App* render_one = app.add_subcommand("render-one", "debug-render a single frame");
  render_one->add_option("--config", render_config, "JSON config file")->required();
  render_one->add_option("--frame", render_frame, "frame id")->required();
  render_one->add_option("--dz", render_dz, "displacement in meters")->required();
  render_one->add_flag("--mirror", render_mirror, "mirror the sample");
  render_one->add_option("--out", render_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (augment->parsed()) return run_augment(config_path, seed_override, workers_override);
    if (validate->parsed()) return run_validate(val_root, val_split, val_calib_key);
    if (score->parsed()) {
      if (thresholds.empty()) thresholds = {0.7, 0.5};
      return run_score(gt_dir, det_dir, category, thresholds, metric, points);
    }
    if (render_one->parsed()) {
      return run_render_one(render_config, render_frame, render_dz, render_mirror, render_out);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFatal;
  }
  return kExitFatal;
}
