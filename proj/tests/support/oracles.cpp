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

#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "vdepth/errors.hpp"

namespace vdepth::testing {

namespace {

struct V3 {
  double x = 0, y = 0, z = 0;
};

V3 sub(const V3& a, const V3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
V3 cross(const V3& a, const V3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double dot(const V3& a, const V3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// t of the ray/triangle intersection or nullopt; standard Moller-Trumbore.
std::optional<double> ray_triangle(const V3& o, const V3& d, const V3& v0, const V3& v1,
                                   const V3& v2) {
  const V3 e1 = sub(v1, v0);
  const V3 e2 = sub(v2, v0);
  const V3 p = cross(d, e2);
  const double det = dot(e1, p);
  if (std::abs(det) < 1e-14) return std::nullopt;
  const double inv = 1.0 / det;
  const V3 s = sub(o, v0);
  const double u = dot(s, p) * inv;
  if (u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;
  const V3 q = cross(s, e1);
  const double v = dot(d, q) * inv;
  if (v < -1e-12 || u + v > 1.0 + 1e-12) return std::nullopt;
  const double t = dot(e2, q) * inv;
  if (t <= 0.0) return std::nullopt;
  return t;
}

}  // namespace

std::optional<double> mesh_surface_depth(const Box3D& box, double u, double v,
                                         const Intrinsics& k) {
  // Corners built from scratch: local frame (width along x, length along z,
  // box.y at the bottom face), rotated by rotation_y about y.
  const double c = std::cos(box.rotation_y);
  const double s = std::sin(box.rotation_y);
  std::array<V3, 8> corners;
  int idx = 0;
  for (const double ly : {0.0, -box.height}) {
    for (const double lx : {-box.width / 2, box.width / 2}) {
      for (const double lz : {-box.length / 2, box.length / 2}) {
        corners[idx++] = {c * lx + s * lz + box.x, ly + box.y, -s * lx + c * lz + box.z};
      }
    }
  }
  // Corner order: bit 2 = top, bit 1 = +x side, bit 0 = +z side.
  static constexpr int faces[6][4] = {
      {0, 1, 3, 2},  // bottom
      {4, 5, 7, 6},  // top
      {0, 1, 5, 4},  // -x
      {2, 3, 7, 6},  // +x
      {0, 2, 6, 4},  // -z
      {1, 3, 7, 5},  // +z
  };
  const V3 origin = {(k.p34 * u - k.p14) / k.fx, (k.p34 * v - k.p24) / k.fy, 0.0};
  const V3 dir = {(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : faces) {
    for (const auto& tri : {std::array<int, 3>{f[0], f[1], f[2]},
                            std::array<int, 3>{f[0], f[2], f[3]}}) {
      if (const auto t = ray_triangle(origin, dir, corners[tri[0]], corners[tri[1]],
                                      corners[tri[2]])) {
        best = std::min(best, *t);
      }
    }
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best;  // dir.z == 1 and origin.z == 0, so t is the metric depth
}

double raster_iou_bev(const Box3D& a, const Box3D& b, int resolution) {
  const auto inside = [](const Box3D& box, double x, double z) {
    const double c = std::cos(box.rotation_y);
    const double s = std::sin(box.rotation_y);
    const double rx = x - box.x;
    const double rz = z - box.z;
    const double lx = c * rx - s * rz;
    const double lz = s * rx + c * rz;
    return std::abs(lx) <= box.width / 2 && std::abs(lz) <= box.length / 2;
  };
  const auto radius = [](const Box3D& box) {
    return std::hypot(box.width / 2, box.length / 2);
  };
  // Rectangle areas are exact; only the intersection needs sampling, over the
  // overlap of the two circumscribed squares.
  const double x0 = std::max(a.x - radius(a), b.x - radius(b));
  const double x1 = std::min(a.x + radius(a), b.x + radius(b));
  const double z0 = std::max(a.z - radius(a), b.z - radius(b));
  const double z1 = std::min(a.z + radius(a), b.z + radius(b));
  const double area_a = a.width * a.length;
  const double area_b = b.width * b.length;
  double inter = 0.0;
  if (x1 > x0 && z1 > z0) {
    std::int64_t n_ab = 0;
    for (int i = 0; i < resolution; ++i) {
      const double x = x0 + (x1 - x0) * (i + 0.5) / resolution;
      for (int j = 0; j < resolution; ++j) {
        const double z = z0 + (z1 - z0) * (j + 0.5) / resolution;
        if (inside(a, x, z) && inside(b, x, z)) ++n_ab;
      }
    }
    const double cell = (x1 - x0) * (z1 - z0) / (static_cast<double>(resolution) * resolution);
    inter = static_cast<double>(n_ab) * cell;
  }
  const double uni = area_a + area_b - inter;
  return uni <= 0.0 ? 0.0 : inter / uni;
}

ScalarLossRef scalar_depth_loss(const SparseDepthMap& pred, const SparseDepthMap& gt,
                                const Mask& fg_mask, double lambda_fg, double lambda_bg,
                                double beta) {
  double sum_fg = 0, sum_bg = 0;
  std::int64_t n_fg = 0, n_bg = 0;
  for (int y = 0; y < gt.height; ++y) {
    for (int x = 0; x < gt.width; ++x) {
      if (gt.at(x, y) <= 0.0) continue;
      const double r = std::abs(pred.at(x, y) - gt.at(x, y));
      const double l = r < beta ? 0.5 * r * r / beta : r - 0.5 * beta;
      if (fg_mask.at(x, y)) {
        sum_fg += l;
        ++n_fg;
      } else {
        sum_bg += l;
        ++n_bg;
      }
    }
  }
  ScalarLossRef ref;
  ref.fg = n_fg ? sum_fg / n_fg : 0.0;
  ref.bg = n_bg ? sum_bg / n_bg : 0.0;
  ref.total = lambda_fg * ref.fg + lambda_bg * ref.bg;
  return ref;
}

Shift2D best_alignment(const RGBImage& image, const RGBImage& reference, int x0, int y0,
                       int patch, int search) {
  Shift2D best{0, 0, -2.0};
  for (int dy = -search; dy <= search; ++dy) {
    for (int dx = -search; dx <= search; ++dx) {
      double sum_i = 0, sum_r = 0, sum_ii = 0, sum_rr = 0, sum_ir = 0;
      const int n = patch * patch * 3;
      for (int y = 0; y < patch; ++y) {
        for (int x = 0; x < patch; ++x) {
          const auto pi = image.rgb(x0 + x + dx, y0 + y + dy);
          const auto pr = reference.rgb(x0 + x, y0 + y);
          for (int c = 0; c < 3; ++c) {
            const double a = pi[c];
            const double b = pr[c];
            sum_i += a;
            sum_r += b;
            sum_ii += a * a;
            sum_rr += b * b;
            sum_ir += a * b;
          }
        }
      }
      const double cov = sum_ir - sum_i * sum_r / n;
      const double var_i = sum_ii - sum_i * sum_i / n;
      const double var_r = sum_rr - sum_r * sum_r / n;
      const double denom = std::sqrt(std::max(var_i * var_r, 1e-12));
      const double score = cov / denom;
      if (score > best.score) best = {dx, dy, score};
    }
  }
  return best;
}

}  // namespace vdepth::testing
