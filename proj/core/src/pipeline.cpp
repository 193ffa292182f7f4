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

#include "vdepth/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vdepth/errors.hpp"
#include "vdepth/inpaint.hpp"
#include "vdepth/renderer.hpp"

namespace vdepth {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = kFnvOffset;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= kFnvPrime;
  }
  return hash;
}

double json_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw Error(Errc::malformed_line, std::string("config key '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

std::array<double, 2> json_range(const json& j, const char* key,
                                 const std::array<double, 2>& fallback) {
  if (!j.contains(key)) return fallback;
  const json& value = j.at(key);
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
      !value[1].is_number()) {
    throw Error(Errc::malformed_line,
                std::string("config key '") + key + "' must be [lo, hi]");
  }
  return {value[0].get<double>(), value[1].get<double>()};
}

RGBImage pad_image(const RGBImage& rgb, int width, int height) {
  RGBImage out = RGBImage::filled(width, height, 0, 0, 0);
  for (int y = 0; y < rgb.height; ++y) {
    std::copy_n(rgb.pixels.begin() + static_cast<size_t>(y) * rgb.width * 3,
                static_cast<size_t>(rgb.width) * 3,
                out.pixels.begin() + static_cast<size_t>(y) * width * 3);
  }
  return out;
}

SparseDepthMap pad_depth(const SparseDepthMap& depth, int width, int height) {
  SparseDepthMap out = SparseDepthMap::zeros(width, height);
  for (int y = 0; y < depth.height; ++y) {
    std::copy_n(depth.values.begin() + static_cast<size_t>(y) * depth.width,
                static_cast<size_t>(depth.width),
                out.values.begin() + static_cast<size_t>(y) * width);
  }
  return out;
}

Mask pad_mask(const Mask& mask, int width, int height) {
  Mask out = Mask::zeros(width, height);
  for (int y = 0; y < mask.height; ++y) {
    std::copy_n(mask.values.begin() + static_cast<size_t>(y) * mask.width,
                static_cast<size_t>(mask.width),
                out.values.begin() + static_cast<size_t>(y) * width);
  }
  return out;
}

Mask mirror_mask(const Mask& mask) {
  Mask out = mask;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      out.at(x, y) = mask.at(mask.width - 1 - x, y);
    }
  }
  return out;
}

json sample_to_json(const SampleRecord& record) {
  json entry;
  entry["id"] = record.id;
  entry["source_frame"] = record.source_frame;
  entry["dz"] = record.dz;
  entry["mirrored"] = record.mirrored;
  entry["image"] = record.image_path;
  entry["label"] = record.label_path;
  entry["calib"] = record.calib_path;
  entry["dropped_objects"] = record.dropped_objects;
  entry["source_size"] = {record.source_width, record.source_height};
  return entry;
}

}  // namespace

AugmentConfig load_augment_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw Error(Errc::malformed_line, std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::malformed_line, "config must be a JSON object");

  static const std::set<std::string> known = {
      "input_root",    "output_root",  "split",        "seed",
      "n_pos_samples", "pos_range",    "n_neg_samples", "neg_range",
      "mirror_prob",   "pad_to",       "workers",      "calib_key",
      "inpaint",       "external_inpaint"};
  for (const auto& item : j.items()) {
    if (known.find(item.key()) == known.end()) {
      throw Error(Errc::malformed_line, "unknown config key '" + item.key() + "'");
    }
  }

  AugmentConfig cfg;
  cfg.input_root = j.value("input_root", std::string{});
  cfg.output_root = j.value("output_root", std::string{});
  cfg.split_file = j.value("split", std::string{});
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      throw Error(Errc::malformed_line, "config key 'seed' must be an integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  cfg.n_pos_samples = static_cast<int>(json_number(j, "n_pos_samples", cfg.n_pos_samples));
  cfg.n_neg_samples = static_cast<int>(json_number(j, "n_neg_samples", cfg.n_neg_samples));
  cfg.pos_range = json_range(j, "pos_range", cfg.pos_range);
  cfg.neg_range = json_range(j, "neg_range", cfg.neg_range);
  cfg.mirror_prob = json_number(j, "mirror_prob", cfg.mirror_prob);
  const std::array<double, 2> pad =
      json_range(j, "pad_to", {static_cast<double>(cfg.pad_height),
                               static_cast<double>(cfg.pad_width)});
  cfg.pad_height = static_cast<int>(pad[0]);
  cfg.pad_width = static_cast<int>(pad[1]);
  cfg.workers = static_cast<int>(json_number(j, "workers", cfg.workers));
  cfg.calib_key = j.value("calib_key", cfg.calib_key);
  if (j.contains("inpaint")) {
    const json& ip = j.at("inpaint");
    cfg.inpaint.max_iterations =
        static_cast<int>(json_number(ip, "max_iterations", cfg.inpaint.max_iterations));
    cfg.inpaint.convergence_epsilon =
        json_number(ip, "convergence_epsilon", cfg.inpaint.convergence_epsilon);
    cfg.inpaint.pyramid_levels =
        static_cast<int>(json_number(ip, "pyramid_levels", cfg.inpaint.pyramid_levels));
  }
  if (j.contains("external_inpaint")) {
    const json& ext = j.at("external_inpaint");
    cfg.external_inpaint_command = ext.value("command", std::string{});
    cfg.external_inpaint_timeout_sec =
        json_number(ext, "timeout_sec", cfg.external_inpaint_timeout_sec);
  }
  check_augment_config(cfg);
  return cfg;
}

void check_augment_config(const AugmentConfig& cfg) {
  if (cfg.n_pos_samples < 0 || cfg.n_neg_samples < 0) {
    throw Error(Errc::value_out_of_range, "sample counts must be >= 0");
  }
  if (!(cfg.pos_range[0] <= cfg.pos_range[1]) || !(cfg.neg_range[0] <= cfg.neg_range[1])) {
    throw Error(Errc::value_out_of_range, "displacement ranges must be ordered");
  }
  if (!(cfg.mirror_prob >= 0.0 && cfg.mirror_prob <= 1.0)) {
    throw Error(Errc::value_out_of_range, "mirror_prob must be in [0, 1]");
  }
  if (cfg.pad_width < 1 || cfg.pad_height < 1) {
    throw Error(Errc::value_out_of_range, "pad size must be positive");
  }
  if (cfg.workers < 1) {
    throw Error(Errc::value_out_of_range, "workers must be >= 1");
  }
  if (cfg.inpaint.max_iterations < 1 || cfg.inpaint.pyramid_levels < 1) {
    throw Error(Errc::value_out_of_range, "inpaint config counts must be >= 1");
  }
}

FrameRng::FrameRng(std::uint64_t seed, const std::string& frame_id)
    : state_(seed ^ fnv1a(frame_id)) {}

std::uint64_t FrameRng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double FrameRng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double FrameRng::uniform(double lo, double hi) {
  double v = lo + uniform() * (hi - lo);
  if (v >= hi && hi > lo) v = std::nextafter(hi, lo);
  return v;
}

std::vector<double> sample_displacements(FrameRng& rng, const AugmentConfig& cfg) {
  std::vector<double> dzs;
  dzs.reserve(static_cast<size_t>(cfg.n_pos_samples) + cfg.n_neg_samples);
  for (int i = 0; i < cfg.n_pos_samples; ++i) {
    dzs.push_back(rng.uniform(cfg.pos_range[0], cfg.pos_range[1]));
  }
  for (int i = 0; i < cfg.n_neg_samples; ++i) {
    dzs.push_back(rng.uniform(cfg.neg_range[0], cfg.neg_range[1]));
  }
  return dzs;
}

FrameData load_frame(const AugmentConfig& cfg, const std::string& frame_id) {
  const std::string root = cfg.input_root;
  RGBImage rgb = load_rgb(root + "/images/" + frame_id + ".png");
  SparseDepthMap depth = load_depth(root + "/depth/" + frame_id + ".png");
  if (rgb.width != depth.width || rgb.height != depth.height) {
    throw Error(Errc::size_mismatch, "rgb and depth dimensions differ for " + frame_id);
  }
  std::vector<ObjectLabel> labels = load_labels(root + "/label/" + frame_id + ".txt");
  ProjectionMatrix P =
      parse_calibration(read_text_file(root + "/calib/" + frame_id + ".txt"), cfg.calib_key);
  return FrameData{frame_id, std::move(rgb), std::move(depth), std::move(labels), P};
}

RenderedSample synthesize_sample(const FrameData& frame, double dz, bool mirror,
                                 const AugmentConfig& cfg) {
  const int width = frame.rgb.width;
  const int height = frame.rgb.height;
  if (width > cfg.pad_width || height > cfg.pad_height) {
    throw Error(Errc::size_mismatch, "frame larger than pad size");
  }

  std::vector<double> visibilities(frame.labels.size(), 0.0);
  for (size_t i = 0; i < frame.labels.size(); ++i) {
    visibilities[i] = visibility(frame.labels[i], width, height);
  }
  const RenderSplit split = filter_rendering(frame.labels, visibilities);

  std::vector<ObjectLabel> removable;
  for (const size_t i : split.removable) removable.push_back(frame.labels[i]);
  const SparseDepthMap depth_clean = remove_objects(frame.depth, removable);

  const ContextualImage ctx = unfold_context(frame.rgb);
  RenderOutput bg = splat_background(ctx, depth_clean, frame.P, dz);

  std::vector<ForegroundSplat> splats;
  for (const size_t i : split.renderable) {
    std::vector<ForegroundSplat> object_splats =
        warp_foreground(frame.rgb, frame.labels[i], frame.P, dz);
    splats.insert(splats.end(), object_splats.begin(), object_splats.end());
  }
  RenderOutput composed = compose(bg, splats);

  RGBImage filled;
  if (!cfg.external_inpaint_command.empty()) {
    ExternalInpainter ext;
    ext.command = cfg.external_inpaint_command;
    const fs::path work_dir =
        fs::path(cfg.output_root.empty() ? "." : cfg.output_root) / ("_inpaint_" + frame.id);
    fs::create_directories(work_dir);
    ext.work_dir = work_dir.string();
    ext.timeout_sec = cfg.external_inpaint_timeout_sec;
    filled = fill_holes_external(composed.rgb, composed.hole_mask, ext);
    std::error_code cleanup_ec;
    fs::remove_all(work_dir, cleanup_ec);
  } else if (composed.hole_mask.count() ==
             static_cast<size_t>(width) * static_cast<size_t>(height)) {
    filled = composed.rgb;  // nothing rendered; keep the black canvas
  } else {
    filled = fill_holes(composed.rgb, composed.hole_mask, cfg.inpaint);
  }

  RenderedSample out;
  out.source_width = width;
  out.source_height = height;
  const std::set<size_t> removable_set(split.removable.begin(), split.removable.end());
  for (size_t i = 0; i < frame.labels.size(); ++i) {
    const ObjectLabel& label = frame.labels[i];
    if (label.is_dontcare()) {
      out.labels.push_back(label);
      continue;
    }
    if (removable_set.count(i) != 0) {
      out.dropped_objects.push_back(static_cast<int>(i));
      continue;
    }
    try {
      out.labels.push_back(shift_label(label, dz, frame.P, width, height));
    } catch (const Error& e) {
      if (e.code() == Errc::too_close || e.code() == Errc::behind_camera) {
        out.dropped_objects.push_back(static_cast<int>(i));
      } else {
        throw;
      }
    }
  }

  out.rgb = pad_image(filled, cfg.pad_width, cfg.pad_height);
  out.render_depth = pad_depth(composed.render_depth, cfg.pad_width, cfg.pad_height);
  out.hole_mask = pad_mask(composed.hole_mask, cfg.pad_width, cfg.pad_height);
  out.calib = frame.P.data();
  out.mirrored = mirror;

  if (mirror) {
    Sample mirrored = mirror_sample(
        Sample{std::move(out.rgb), std::move(out.render_depth), std::move(out.labels), frame.P});
    out.rgb = std::move(mirrored.rgb);
    out.render_depth = std::move(mirrored.depth);
    out.labels = std::move(mirrored.labels);
    out.calib = mirrored.P.data();
    out.hole_mask = mirror_mask(out.hole_mask);
  }
  return out;
}

std::vector<std::string> read_split(const std::string& path) {
  std::istringstream stream(read_text_file(path));
  std::vector<std::string> frames;
  std::string line;
  while (std::getline(stream, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    size_t begin = 0;
    while (begin < line.size() && line[begin] == ' ') ++begin;
    if (begin < line.size()) frames.push_back(line.substr(begin));
  }
  return frames;
}

std::string serialize_calibration(const std::array<double, 12>& values,
                                  const std::string& key) {
  std::string out = key + ":";
  char buf[64];
  for (const double v : values) {
    std::snprintf(buf, sizeof(buf), " %.17g", v);
    out += buf;
  }
  out += "\n";
  return out;
}

AugmentResult augment(const AugmentConfig& cfg) {
  check_augment_config(cfg);
  if (cfg.output_root.empty()) {
    throw Error(Errc::io_error, "output_root is required");
  }
  const std::vector<std::string> frames = read_split(cfg.split_file);

  std::error_code ec;
  for (const char* sub : {"images", "label", "calib"}) {
    fs::create_directories(fs::path(cfg.output_root) / sub, ec);
    if (ec) {
      throw Error(Errc::io_error, "cannot create output directory: " + ec.message());
    }
  }

  std::mutex merge_mutex;
  AugmentResult result;
  std::atomic<size_t> next_frame{0};

  const auto worker = [&]() {
    std::vector<SampleRecord> local_samples;
    std::vector<FrameIssue> local_errors;
    for (;;) {
      const size_t f = next_frame.fetch_add(1);
      if (f >= frames.size()) break;
      const std::string& frame_id = frames[f];
      try {
        FrameRng rng(cfg.seed, frame_id);
        const std::vector<double> dzs = sample_displacements(rng, cfg);
        std::vector<bool> mirrors(dzs.size());
        for (size_t k = 0; k < dzs.size(); ++k) {
          mirrors[k] = rng.uniform() < cfg.mirror_prob;
        }
        const FrameData frame = load_frame(cfg, frame_id);
        // Synthesize the whole frame before touching disk so a failed sample
        // leaves no stray files behind.
        std::vector<RenderedSample> rendered;
        rendered.reserve(dzs.size());
        for (size_t k = 0; k < dzs.size(); ++k) {
          rendered.push_back(synthesize_sample(frame, dzs[k], mirrors[k], cfg));
        }
        for (size_t k = 0; k < dzs.size(); ++k) {
          const RenderedSample& sample = rendered[k];
          SampleRecord record;
          record.id = frame_id + "_" + std::to_string(k);
          record.source_frame = frame_id;
          record.dz = dzs[k];
          record.mirrored = sample.mirrored;
          record.image_path = "images/" + record.id + ".png";
          record.label_path = "label/" + record.id + ".txt";
          record.calib_path = "calib/" + record.id + ".txt";
          record.dropped_objects = sample.dropped_objects;
          record.source_width = sample.source_width;
          record.source_height = sample.source_height;
          save_rgb(sample.rgb, cfg.output_root + "/" + record.image_path);
          save_labels(sample.labels, cfg.output_root + "/" + record.label_path);
          write_text_file(cfg.output_root + "/" + record.calib_path,
                          serialize_calibration(sample.calib, cfg.calib_key));
          local_samples.push_back(std::move(record));
        }
      } catch (const std::exception& e) {
        local_errors.push_back({frame_id, e.what()});
      }
    }
    const std::lock_guard<std::mutex> lock(merge_mutex);
    result.samples.insert(result.samples.end(),
                          std::make_move_iterator(local_samples.begin()),
                          std::make_move_iterator(local_samples.end()));
    result.errors.insert(result.errors.end(), local_errors.begin(), local_errors.end());
  };

  const int n_workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(frames.size())));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::sort(result.samples.begin(), result.samples.end(),
            [](const SampleRecord& a, const SampleRecord& b) { return a.id < b.id; });
  std::sort(result.errors.begin(), result.errors.end(),
            [](const FrameIssue& a, const FrameIssue& b) { return a.frame < b.frame; });

  json manifest;
  manifest["config"]["seed"] = cfg.seed;
  manifest["config"]["n_pos_samples"] = cfg.n_pos_samples;
  manifest["config"]["pos_range"] = cfg.pos_range;
  manifest["config"]["n_neg_samples"] = cfg.n_neg_samples;
  manifest["config"]["neg_range"] = cfg.neg_range;
  manifest["config"]["mirror_prob"] = cfg.mirror_prob;
  manifest["config"]["pad_to"] = {cfg.pad_height, cfg.pad_width};
  manifest["config"]["calib_key"] = cfg.calib_key;
  manifest["config"]["inpaint"] = {{"max_iterations", cfg.inpaint.max_iterations},
                                   {"convergence_epsilon", cfg.inpaint.convergence_epsilon},
                                   {"pyramid_levels", cfg.inpaint.pyramid_levels}};
  manifest["samples"] = json::array();
  for (const SampleRecord& record : result.samples) {
    manifest["samples"].push_back(sample_to_json(record));
  }
  manifest["errors"] = json::array();
  for (const FrameIssue& issue : result.errors) {
    manifest["errors"].push_back({{"frame", issue.frame}, {"message", issue.message}});
  }

  result.manifest_path = cfg.output_root + "/manifest.json";
  write_text_file(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

ValidationReport validate_dataset(const std::string& root, const std::string& split_file,
                                  const std::string& calib_key) {
  ValidationReport report;
  std::vector<std::string> frames;
  if (!split_file.empty()) {
    frames = read_split(split_file);
  } else {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(fs::path(root) / "images", ec)) {
      if (entry.path().extension() == ".png") frames.push_back(entry.path().stem().string());
    }
    if (ec) {
      report.issues.push_back({"", "cannot list " + root + "/images: " + ec.message()});
      return report;
    }
    std::sort(frames.begin(), frames.end());
  }

  // Synthesized output trees carry no depth directory at all; only treat
  // depth as a required modality when the dataset ships one.
  const bool expect_depth = fs::is_directory(fs::path(root) / "depth");
  for (const std::string& frame_id : frames) {
    ++report.frames_checked;
    const auto complain = [&](const std::string& message) {
      report.issues.push_back({frame_id, message});
    };
    RGBImage rgb;
    SparseDepthMap depth;
    bool have_rgb = false;
    bool have_depth = false;
    try {
      rgb = load_rgb(root + "/images/" + frame_id + ".png");
      have_rgb = true;
    } catch (const std::exception& e) {
      complain(std::string("image: ") + e.what());
    }
    if (expect_depth) {
      try {
        depth = load_depth(root + "/depth/" + frame_id + ".png");
        have_depth = true;
      } catch (const std::exception& e) {
        complain(std::string("depth: ") + e.what());
      }
    }
    if (have_rgb && have_depth &&
        (rgb.width != depth.width || rgb.height != depth.height)) {
      complain("depth size does not match image size");
    }
    try {
      parse_calibration(read_text_file(root + "/calib/" + frame_id + ".txt"), calib_key);
    } catch (const std::exception& e) {
      complain(std::string("calib: ") + e.what());
    }
    try {
      const std::vector<ObjectLabel> labels = load_labels(root + "/label/" + frame_id + ".txt");
      for (size_t i = 0; i < labels.size(); ++i) {
        const ObjectLabel& label = labels[i];
        if (label.bbox2d.right < label.bbox2d.left ||
            label.bbox2d.bottom < label.bbox2d.top) {
          complain("label row " + std::to_string(i + 1) + ": bbox corners not ordered");
        }
        if (label.is_dontcare()) continue;
        if (!(label.height > 0.0) || !(label.width > 0.0) || !(label.length > 0.0)) {
          complain("label row " + std::to_string(i + 1) + ": non-positive dimensions");
        }
        if (label.truncation < 0.0 || label.truncation > 1.0) {
          complain("label row " + std::to_string(i + 1) + ": truncation out of [0, 1]");
        }
      }
    } catch (const std::exception& e) {
      complain(std::string("label: ") + e.what());
    }
  }
  return report;
}

}  // namespace vdepth
