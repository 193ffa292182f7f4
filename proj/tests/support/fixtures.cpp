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

#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "vdepth/pipeline.hpp"

namespace fs = std::filesystem;

namespace vdepth::testing {

std::uint64_t TestRng::next() {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double TestRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double TestRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t pixel_hash(std::uint64_t seed, std::uint64_t x, std::uint64_t y) {
  std::uint64_t z = seed ^ (x * 0x9E3779B97F4A7C15ULL) ^ (y * 0xC2B2AE3D27D4EB4FULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ProjectionMatrix kitti_projection() {
  return ProjectionMatrix({721.5377, 0.0, 609.5593, 44.85728,  //
                           0.0, 721.5377, 172.854, 0.2163791,  //
                           0.0, 0.0, 1.0, 2.745884e-3});
}

RGBImage textured_rgb(int width, int height, std::uint64_t seed) {
  RGBImage rgb = RGBImage::filled(width, height, 0, 0, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double fx = static_cast<double>(x);
      const double fy = static_cast<double>(y);
      const double wave = 70.0 * std::sin(fx * 0.11) * std::cos(fy * 0.07) +
                          40.0 * std::sin((fx + 2.0 * fy) * 0.031);
      const std::uint64_t h = pixel_hash(seed, x, y);
      const auto channel = [&](int c, double base) {
        const double noise = static_cast<double>((h >> (c * 8)) & 0xFF) / 255.0 * 60.0 - 30.0;
        return static_cast<std::uint8_t>(std::clamp(base + wave + noise, 0.0, 255.0));
      };
      rgb.set_rgb(x, y, {channel(0, 120.0), channel(1, 128.0), channel(2, 136.0)});
    }
  }
  return rgb;
}

namespace {

// Ray through pixel center in the convention where the parameter t equals the
// metric z of the hit point.
struct PixelRay {
  CameraPoint origin;
  CameraPoint dir;
};

PixelRay pixel_ray(double u, double v, const Intrinsics& k) {
  PixelRay ray;
  ray.origin = {(k.p34 * u - k.p14) / k.fx, (k.p34 * v - k.p24) / k.fy, 0.0};
  ray.dir = {(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
  return ray;
}

// Slab-test depth of an oriented box, nullopt on miss. Used only to build
// consistent fixtures; renderer tests check box depth against a triangle-mesh
// oracle instead.
std::optional<double> box_ray_depth(const Box3D& box, const PixelRay& ray) {
  const double c = std::cos(box.rotation_y);
  const double s = std::sin(box.rotation_y);
  const CameraPoint rel = {ray.origin.x - box.x, ray.origin.y - box.y, ray.origin.z - box.z};
  const CameraPoint o = {c * rel.x - s * rel.z, rel.y, s * rel.x + c * rel.z};
  const CameraPoint d = {c * ray.dir.x - s * ray.dir.z, ray.dir.y,
                         s * ray.dir.x + c * ray.dir.z};
  const double lo[3] = {-box.width / 2, -box.height, -box.length / 2};
  const double hi[3] = {box.width / 2, 0.0, box.length / 2};
  const double ov[3] = {o.x, o.y, o.z};
  const double dv[3] = {d.x, d.y, d.z};
  double t_near = 0.0;
  double t_far = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (dv[i] == 0.0) {
      if (ov[i] < lo[i] || ov[i] > hi[i]) return std::nullopt;
      continue;
    }
    double t0 = (lo[i] - ov[i]) / dv[i];
    double t1 = (hi[i] - ov[i]) / dv[i];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (!(t_near > 0.0)) return std::nullopt;
  return t_near;
}

}  // namespace

ObjectLabel make_car(double x, double y, double z, double ry, const ProjectionMatrix& P,
                     int width, int height, double h, double w, double l) {
  ObjectLabel label;
  label.category = "Car";
  label.occlusion = 0;
  label.height = h;
  label.width = w;
  label.length = l;
  label.x = x;
  label.y = y;
  label.z = z;
  label.rotation_y = wrap_angle(ry);
  label.alpha = wrap_angle(ry - std::atan2(x, z));
  const BoxProjection proj = project_box_2d(Box3D::from_label(label), P, width, height);
  label.bbox2d = proj.bbox;
  label.truncation = proj.truncation;
  return label;
}

FrameBundle make_frame(std::uint64_t seed, int width, int height, int n_boxes,
                       double density) {
  const ProjectionMatrix P = kitti_projection();
  const Intrinsics k = P.intrinsics();
  TestRng rng(seed * 0x51EDu + 17u);

  constexpr double kGroundY = 1.65;
  constexpr double kWallZ = 42.0;

  std::vector<ObjectLabel> labels;
  std::vector<Box3D> boxes;
  for (int i = 0; i < n_boxes; ++i) {
    // Spread the cars left to right so they rarely occlude each other fully.
    const double z = rng.uniform(9.0, 30.0);
    const double lane = (n_boxes <= 1) ? 0.0 : -1.0 + 2.0 * i / (n_boxes - 1.0);
    const double x = lane * z * 0.30 + rng.uniform(-0.8, 0.8);
    const double ry = rng.uniform(-M_PI, M_PI);
    ObjectLabel label = make_car(x, kGroundY, z, ry, P, width, height);
    labels.push_back(label);
    boxes.push_back(Box3D::from_label(label));
  }

  RGBImage rgb = textured_rgb(width, height, seed);
  SparseDepthMap depth = SparseDepthMap::zeros(width, height);

  const std::array<std::array<std::uint8_t, 3>, 6> tints = {{{200, 60, 50},
                                                             {60, 90, 200},
                                                             {230, 200, 60},
                                                             {70, 190, 90},
                                                             {190, 80, 190},
                                                             {90, 200, 200}}};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const PixelRay ray = pixel_ray(x, y, k);
      double z_hit = kWallZ;
      int box_hit = -1;
      if (ray.dir.y > 1e-9) {
        const double t_ground = (kGroundY - ray.origin.y) / ray.dir.y;
        const double z_ground = ray.origin.z + t_ground;
        if (z_ground > 0.5 && z_ground < z_hit) z_hit = z_ground;
      }
      for (std::size_t b = 0; b < boxes.size(); ++b) {
        if (const auto t = box_ray_depth(boxes[b], ray); t && *t < z_hit) {
          z_hit = *t;
          box_hit = static_cast<int>(b);
        }
      }
      if (box_hit >= 0) {
        // Tint object pixels so foreground warps are visually traceable.
        const auto& tint = tints[box_hit % tints.size()];
        const auto base = rgb.rgb(x, y);
        rgb.set_rgb(x, y,
                    {static_cast<std::uint8_t>((base[0] + 2 * tint[0]) / 3),
                     static_cast<std::uint8_t>((base[1] + 2 * tint[1]) / 3),
                     static_cast<std::uint8_t>((base[2] + 2 * tint[2]) / 3)});
        depth.at(x, y) = z_hit;  // object surfaces keep dense depth
      } else if (pixel_hash(seed ^ 0xD1CEu, x, y) % 1000 <
                 static_cast<std::uint64_t>(density * 1000.0)) {
        depth.at(x, y) = z_hit;
      }
    }
  }
  return FrameBundle{std::move(rgb), std::move(depth), std::move(labels), P};
}

FrameBundle make_plane_frame(std::uint64_t seed, int width, int height, double z) {
  RGBImage rgb = textured_rgb(width, height, seed);
  SparseDepthMap depth = SparseDepthMap::zeros(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) depth.at(x, y) = z;
  }
  return FrameBundle{std::move(rgb), std::move(depth), {}, kitti_projection()};
}

void write_dataset(const std::string& root, const std::vector<std::string>& ids,
                   const std::vector<FrameBundle>& frames, const std::string& calib_key) {
  if (ids.size() != frames.size()) throw std::runtime_error("ids/frames size mismatch");
  for (const char* sub : {"images", "depth", "calib", "label"}) {
    fs::create_directories(fs::path(root) / sub);
  }
  std::string split;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::string& id = ids[i];
    const FrameBundle& frame = frames[i];
    save_rgb(frame.rgb, root + "/images/" + id + ".png");
    save_depth(frame.depth, root + "/depth/" + id + ".png");
    save_labels(frame.labels, root + "/label/" + id + ".txt");
    write_text_file(root + "/calib/" + id + ".txt",
                    serialize_calibration(frame.P.data(), calib_key));
    split += id + "\n";
  }
  write_text_file(root + "/split.txt", split);
}

std::string make_temp_dir(const std::string& tag) {
  static std::atomic<std::uint64_t> counter{0};
  const fs::path base = fs::temp_directory_path() / "vdepth_tests";
  fs::create_directories(base);
  const fs::path dir =
      base / (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

void remove_tree(const std::string& path) {
  std::error_code ec;
  fs::remove_all(path, ec);
}

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

std::string compare_trees(const std::string& a, const std::string& b) {
  std::vector<std::string> rel_a;
  std::vector<std::string> rel_b;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.is_regular_file()) rel_a.push_back(fs::relative(entry.path(), a).string());
  }
  for (const auto& entry : fs::recursive_directory_iterator(b)) {
    if (entry.is_regular_file()) rel_b.push_back(fs::relative(entry.path(), b).string());
  }
  std::sort(rel_a.begin(), rel_a.end());
  std::sort(rel_b.begin(), rel_b.end());
  if (rel_a != rel_b) return "file lists differ";
  for (const std::string& rel : rel_a) {
    if (slurp(a + "/" + rel) != slurp(b + "/" + rel)) return "content differs: " + rel;
  }
  return {};
}

}  // namespace vdepth::testing
