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

#include "vdepth/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "vdepth/errors.hpp"

namespace vdepth {

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (b.x - o.x) * (a.y - o.y);
}

}  // namespace

double Rect2D::area() const {
  return empty() ? 0.0 : width() * height();
}

double iou_rect(const Rect2D& a, const Rect2D& b) {
  if (a.empty() || b.empty()) {
    return 0.0;
  }
  const double il = std::max(a.left, b.left);
  const double it = std::max(a.top, b.top);
  const double ir = std::min(a.right, b.right);
  const double ib = std::min(a.bottom, b.bottom);
  if (ir <= il || ib <= it) {
    return 0.0;
  }
  const double inter = (ir - il) * (ib - it);
  return inter / (a.area() + b.area() - inter);
}

double polygon_area(std::span<const Vec2> polygon) {
  const size_t n = polygon.size();
  if (n < 3) {
    return 0.0;
  }
  double twice = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = polygon[i];
    const Vec2& q = polygon[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return twice / 2.0;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vec2& a, const Vec2& b) {
                             return a.x == b.x && a.y == b.y;
                           }),
               points.end());
  const size_t n = points.size();
  if (n < 3) {
    return points;
  }
  std::vector<Vec2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) {
      --k;
    }
    hull[k++] = points[i];
  }
  for (size_t i = n - 1, lower = k + 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) {
      --k;
    }
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Vec2> clip_polygon(std::span<const Vec2> polygon, const Vec2& a, const Vec2& b) {
  std::vector<Vec2> out;
  const size_t n = polygon.size();
  if (n == 0) {
    return out;
  }
  out.reserve(n + 1);
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = polygon[i];
    const Vec2& q = polygon[(i + 1) % n];
    const double sp = cross(a, b, p);
    const double sq = cross(a, b, q);
    if (sp >= 0) {
      out.push_back(p);
    }
    if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
      const double t = sp / (sp - sq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

std::vector<Vec2> clip_to_rect(std::span<const Vec2> polygon, const Rect2D& rect) {
  std::vector<Vec2> poly(polygon.begin(), polygon.end());
  // Edges wound so the rect interior is on the left of each directed edge.
  const Vec2 tl{rect.left, rect.top};
  const Vec2 tr{rect.right, rect.top};
  const Vec2 br{rect.right, rect.bottom};
  const Vec2 bl{rect.left, rect.bottom};
  poly = clip_polygon(poly, tl, tr);
  poly = clip_polygon(poly, tr, br);
  poly = clip_polygon(poly, br, bl);
  poly = clip_polygon(poly, bl, tl);
  return poly;
}

Rect2D bounding_rect(std::span<const Vec2> points) {
  Rect2D r;
  if (points.empty()) {
    return r;
  }
  r.left = r.right = points[0].x;
  r.top = r.bottom = points[0].y;
  for (const Vec2& p : points) {
    r.left = std::min(r.left, p.x);
    r.right = std::max(r.right, p.x);
    r.top = std::min(r.top, p.y);
    r.bottom = std::max(r.bottom, p.y);
  }
  return r;
}

std::optional<PixelRect> rect_pixel_bounds(const Rect2D& rect, int width, int height) {
  if (rect.empty()) {
    return std::nullopt;
  }
  PixelRect px;
  px.x0 = std::max(0, static_cast<int>(std::floor(rect.left)));
  px.y0 = std::max(0, static_cast<int>(std::floor(rect.top)));
  px.x1 = std::min(width - 1, static_cast<int>(std::ceil(rect.right)) - 1);
  px.y1 = std::min(height - 1, static_cast<int>(std::ceil(rect.bottom)) - 1);
  if (px.x1 < px.x0 || px.y1 < px.y0) {
    return std::nullopt;
  }
  return px;
}

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw Error(Errc::non_finite, "wrap_angle: non-finite angle");
  }
  const double two_pi = 2.0 * M_PI;
  double wrapped = std::remainder(theta, two_pi);  // in [-pi, pi]
  if (wrapped >= M_PI) {
    wrapped -= two_pi;
  }
  return wrapped;
}

}  // namespace vdepth
