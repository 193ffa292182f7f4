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

#include <optional>
#include <span>
#include <vector>

namespace vdepth {

struct Vec2 {
  double x = 0;
  double y = 0;
};

// Axis-aligned box in continuous pixel coordinates, left/top inclusive.
struct Rect2D {
  double left = 0;
  double top = 0;
  double right = 0;
  double bottom = 0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double area() const;
  bool empty() const { return right <= left || bottom <= top; }
};

// Intersection over union of two axis-aligned rectangles; 0 when either is empty.
double iou_rect(const Rect2D& a, const Rect2D& b);

// Signed shoelace area; positive for counter-clockwise winding in (x right, y down)
// screen coordinates is negative, so callers typically take the absolute value.
double polygon_area(std::span<const Vec2> polygon);

// Convex hull (monotone chain). Collinear points are dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// Clips a convex polygon against the half-plane on the left of the directed
// line a -> b (cross(b - a, p - a) >= 0).
std::vector<Vec2> clip_polygon(std::span<const Vec2> polygon, const Vec2& a, const Vec2& b);

std::vector<Vec2> clip_to_rect(std::span<const Vec2> polygon, const Rect2D& rect);

Rect2D bounding_rect(std::span<const Vec2> points);

// Integer pixels covered by a rect under the half-open footprint rule:
// pixel x spans [x, x+1), so x in [floor(left), ceil(right) - 1], clipped to the
// image. Inclusive bounds; nullopt when the clipped region is empty.
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
};
std::optional<PixelRect> rect_pixel_bounds(const Rect2D& rect, int width, int height);

// Normalizes an angle into [-pi, pi). Throws Errc::non_finite for NaN/inf.
double wrap_angle(double theta);

}  // namespace vdepth
