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
#include <cmath>

#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "vdepth/errors.hpp"
#include "vdepth/renderer.hpp"

using namespace vdepth;

TEST_SUITE("renderer") {

TEST_CASE("unfold_context stacks the 3x3 neighborhood per pixel") {
  const RGBImage rgb = testing::textured_rgb(7, 5, 99);
  const ContextualImage ctx = unfold_context(rgb);
  REQUIRE(ctx.width == 7);
  REQUIRE(ctx.height == 5);

  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) {
      for (int o = 0; o < ContextualImage::kOffsets; ++o) {
        if (!ctx.offset_valid(x, y, o)) continue;
        const auto expect = rgb.rgb(x + ContextualImage::offset_dx(o),
                                    y + ContextualImage::offset_dy(o));
        for (int c = 0; c < 3; ++c) CHECK(ctx.at(x, y, o, c) == expect[c]);
      }
    }
  }

  // Channel 4 is the identity slice.
  for (int c = 0; c < 3; ++c) {
    CHECK(ctx.at(3, 2, ContextualImage::kCenterOffset, c) == rgb.rgb(3, 2)[c]);
  }
  // Offset 0 is (dx, dy) = (-1, -1): invalid on the top-left corner, valid inside.
  CHECK_FALSE(ctx.offset_valid(0, 0, 0));
  CHECK(ctx.offset_valid(1, 1, 0));
  CHECK_FALSE(ctx.offset_valid(6, 2, 5));  // (+1, 0) off the right edge
}

TEST_CASE("splat buffer keeps the smallest depth regardless of order") {
  SplatBuffer a(4, 4);
  SplatBuffer b(4, 4);
  const SplatKey near{5.0, 1, 7, 0};
  const SplatKey far{8.0, 0, 2, 0};
  a.submit(1, 1, {10, 10, 10}, near);
  a.submit(1, 1, {20, 20, 20}, far);
  b.submit(1, 1, {20, 20, 20}, far);
  b.submit(1, 1, {10, 10, 10}, near);
  CHECK(a.w(1, 1) == 5.0);
  CHECK(b.w(1, 1) == 5.0);
  CHECK(a.color(1, 1) == std::array<std::uint8_t, 3>{10, 10, 10});
  CHECK(b.color(1, 1) == std::array<std::uint8_t, 3>{10, 10, 10});

  // Equal depth: center beats off-center, then lower source index.
  SplatBuffer c(4, 4);
  c.submit(2, 2, {1, 1, 1}, SplatKey{3.0, 1, 0, 3});
  c.submit(2, 2, {2, 2, 2}, SplatKey{3.0, 0, 9, 4});
  CHECK(c.color(2, 2) == std::array<std::uint8_t, 3>{2, 2, 2});
  SplatBuffer d(4, 4);
  d.submit(2, 2, {1, 1, 1}, SplatKey{3.0, 1, 5, 3});
  d.submit(2, 2, {2, 2, 2}, SplatKey{3.0, 1, 4, 3});
  CHECK(d.color(2, 2) == std::array<std::uint8_t, 3>{2, 2, 2});

  // Out-of-bounds submissions are dropped.
  d.submit(-1, 0, {9, 9, 9}, near);
  d.submit(0, 4, {9, 9, 9}, near);
  CHECK_FALSE(d.filled(0, 0));
}

TEST_CASE("splat buffer state is independent of submission order") {
  testing::TestRng rng(41);
  struct Item {
    int x, y;
    std::array<std::uint8_t, 3> color;
    SplatKey key;
  };
  std::vector<Item> items;
  for (int i = 0; i < 500; ++i) {
    Item item;
    item.x = static_cast<int>(rng.next() % 16);
    item.y = static_cast<int>(rng.next() % 12);
    item.color = {static_cast<std::uint8_t>(rng.next() % 256),
                  static_cast<std::uint8_t>(rng.next() % 256),
                  static_cast<std::uint8_t>(rng.next() % 256)};
    item.key.w = rng.uniform(0.5, 4.0);
    item.key.priority = static_cast<std::uint8_t>(rng.next() % 3);
    item.key.source = rng.next() % 64;
    item.key.offset = static_cast<std::uint8_t>(rng.next() % 9);
    items.push_back(item);
  }
  // Duplicate a few keys exactly so ties actually occur.
  for (int i = 0; i < 100; ++i) {
    Item copy = items[rng.next() % items.size()];
    copy.color = {7, 7, 7};
    copy.key.offset = static_cast<std::uint8_t>((copy.key.offset + 1) % 9);
    items.push_back(copy);
  }

  SplatBuffer fwd(16, 12);
  for (const Item& it : items) fwd.submit(it.x, it.y, it.color, it.key);

  std::vector<Item> shuffled = items;
  for (size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.next() % i]);
  }
  SplatBuffer rev(16, 12);
  for (const Item& it : shuffled) rev.submit(it.x, it.y, it.color, it.key);

  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 16; ++x) {
      REQUIRE(fwd.filled(x, y) == rev.filled(x, y));
      if (!fwd.filled(x, y)) continue;
      CHECK(fwd.w(x, y) == rev.w(x, y));
      CHECK(fwd.color(x, y) == rev.color(x, y));
    }
  }
}

TEST_CASE("splat at zero displacement reproduces the image at valid pixels") {
  const testing::FrameBundle frame = testing::make_frame(77, 320, 96, 2, 0.5);
  const ContextualImage ctx = unfold_context(frame.rgb);
  const RenderOutput out = splat_background(ctx, frame.depth, frame.P, 0.0);
  int checked = 0;
  for (int y = 0; y < 96; ++y) {
    for (int x = 0; x < 320; ++x) {
      if (frame.depth.at(x, y) <= 0.0) continue;
      CHECK_FALSE(out.hole_mask.at(x, y));
      CHECK(out.rgb.rgb(x, y) == frame.rgb.rgb(x, y));
      ++checked;
    }
  }
  CHECK(checked > 5000);
}

TEST_CASE("splat rejects mismatched sizes and sub-near-plane depths") {
  const testing::FrameBundle frame = testing::make_frame(5, 64, 48, 0, 1.0);
  const ContextualImage ctx = unfold_context(frame.rgb);
  SparseDepthMap wrong = SparseDepthMap::zeros(32, 48);
  CHECK_THROWS_AS(splat_background(ctx, wrong, frame.P, 0.0), Error);

  // Push the whole scene behind the near plane: every splat is dropped.
  SparseDepthMap shallow = SparseDepthMap::zeros(64, 48);
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 64; ++x) shallow.at(x, y) = 3.0;
  }
  const RenderOutput out = splat_background(ctx, shallow, frame.P, -2.95);
  CHECK(out.hole_mask.count() == static_cast<size_t>(64) * 48);
}

TEST_CASE("plane render under displacement is a central rescale") {
  const int width = 1242;
  const int height = 375;
  const double z = 10.0;
  const double dz = 10.0;
  const testing::FrameBundle frame = testing::make_plane_frame(13, width, height, z);
  const Intrinsics k = frame.P.intrinsics();

  const RenderOutput out = splat_background(unfold_context(frame.rgb), frame.depth, frame.P, dz);

  // Analytic reference: (u' - cx) = (u - cx) * w / w', nearest-neighbor sampled.
  const double scale = (z + k.p34) / (z + dz + k.p34);
  RGBImage ref = RGBImage::filled(width, height, 0, 0, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int sx = static_cast<int>(std::lround(k.cx + (x - k.cx) / scale));
      const int sy = static_cast<int>(std::lround(k.cy + (y - k.cy) / scale));
      if (sx < 0 || sy < 0 || sx >= width || sy >= height) continue;
      ref.set_rgb(x, y, frame.rgb.rgb(sx, sy));
    }
  }

  // Correlation peaks at zero shift on patches inside the shrunk plane
  // (u in [305, 926], v in [87, 273] after the rescale).
  const struct {
    int x0, y0;
  } patches[] = {{400, 120}, {560, 200}, {660, 230}, {760, 140}};
  for (const auto& p : patches) {
    const testing::Shift2D shift = testing::best_alignment(out.rgb, ref, p.x0, p.y0, 32, 3);
    CHECK(std::abs(shift.dx) <= 1);
    CHECK(std::abs(shift.dy) <= 1);
    CHECK(shift.score > 0.5);
  }

  // Holes appear only outside the shrunk plane, so the hole count grows with dz.
  const size_t holes_small =
      splat_background(unfold_context(frame.rgb), frame.depth, frame.P, 4.0).hole_mask.count();
  const size_t holes_large = out.hole_mask.count();
  CHECK(splat_background(unfold_context(frame.rgb), frame.depth, frame.P, 0.0)
            .hole_mask.count() == 0);
  CHECK(holes_small <= holes_large);
  CHECK(holes_large > 0);
}

TEST_CASE("box_surface_depth agrees with the triangle-mesh oracle") {
  const ProjectionMatrix P = testing::kitti_projection();
  const Intrinsics k = P.intrinsics();
  testing::TestRng rng(2718);
  int boxes_with_hits = 0;
  for (int i = 0; i < 100; ++i) {
    const double z = rng.uniform(6.0, 35.0);
    const Box3D box{rng.uniform(1.2, 2.2), rng.uniform(1.4, 2.0), rng.uniform(3.0, 5.0),
                    rng.uniform(-0.25, 0.25) * z, rng.uniform(1.2, 1.9), z,
                    rng.uniform(-M_PI, M_PI)};
    const auto patch = box_surface_depth(box, P, 1242, 375);
    if (!patch.has_value()) continue;
    bool any_hit = false;
    for (int y = patch->bounds.y0; y <= patch->bounds.y1; ++y) {
      for (int x = patch->bounds.x0; x <= patch->bounds.x1; ++x) {
        const auto mesh = testing::mesh_surface_depth(box, x, y, k);
        if (patch->valid(x, y)) {
          any_hit = true;
          REQUIRE(mesh.has_value());
          CHECK(std::abs(*mesh - patch->at(x, y)) < 1e-6);
        } else {
          CHECK_FALSE(mesh.has_value());
        }
      }
    }
    if (any_hit) ++boxes_with_hits;
  }
  CHECK(boxes_with_hits > 80);
}

TEST_CASE("box_surface_depth misses when the box is outside the image") {
  const ProjectionMatrix P = testing::kitti_projection();
  CHECK_FALSE(box_surface_depth(Box3D{1.5, 1.7, 4.0, -80.0, 1.65, 12.0, 0.0}, P, 1242, 375)
                  .has_value());
  CHECK_THROWS_AS(box_surface_depth(Box3D{1.5, 1.7, 4.0, 0.0, 1.65, 1.0, 0.0}, P, 1242, 375),
                  Error);  // a corner behind the image plane
}

TEST_CASE("warp_foreground keeps splats inside the surface depth interval") {
  const ProjectionMatrix P = testing::kitti_projection();
  const testing::FrameBundle frame = testing::make_frame(21, 1242, 375, 1, 0.6);
  REQUIRE(frame.labels.size() == 1);
  const ObjectLabel& label = frame.labels[0];
  const auto patch = box_surface_depth(Box3D::from_label(label), P, 1242, 375);
  REQUIRE(patch.has_value());

  double min_z = 1e18, max_z = 0.0;
  for (double d : patch->depth) {
    if (d > 0.0) {
      min_z = std::min(min_z, d);
      max_z = std::max(max_z, d);
    }
  }
  REQUIRE(min_z < max_z);

  const double dz = 3.0;
  const auto splats = warp_foreground(frame.rgb, label, P, dz);
  CHECK_FALSE(splats.empty());
  const double p34 = P.p34();
  for (const auto& s : splats) {
    CHECK(s.w >= min_z + dz + p34 - 1e-9);
    CHECK(s.w <= max_z + dz + p34 + 1e-9);
    CHECK(s.x >= 0);
    CHECK(s.x < 1242);
    CHECK(s.y >= 0);
    CHECK(s.y < 375);
  }

  // At dz = 0 every splat lands on its own pixel with its own color.
  for (const auto& s : warp_foreground(frame.rgb, label, P, 0.0)) {
    CHECK(s.color == frame.rgb.rgb(s.x, s.y));
  }

  // A displacement that pulls the whole surface behind the near plane emits
  // nothing.
  CHECK(warp_foreground(frame.rgb, label, P, -(max_z + p34 - 0.05)).empty());
}

TEST_CASE("remove_objects zeroes exactly the covered pixels") {
  SparseDepthMap depth = SparseDepthMap::zeros(20, 10);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 20; ++x) depth.at(x, y) = 4.0;
  }
  ObjectLabel label;
  label.category = "Car";
  label.bbox2d = {3.2, 2.7, 6.4, 5.1};
  const SparseDepthMap out = remove_objects(depth, {label});
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 20; ++x) {
      const bool covered = x >= 3 && x <= 6 && y >= 2 && y <= 5;
      CHECK(out.at(x, y) == (covered ? 0.0 : 4.0));
    }
  }
}

TEST_CASE("compose depth-tests foreground against background") {
  RenderOutput bg;
  bg.rgb = RGBImage::filled(3, 1, 50, 50, 50);
  bg.render_depth = SparseDepthMap::zeros(3, 1);
  bg.hole_mask = Mask::zeros(3, 1);
  bg.fg_mask = Mask::zeros(3, 1);
  bg.render_depth.at(0, 0) = 5.0;
  bg.render_depth.at(1, 0) = 5.0;
  // Pixel 2 is a hole.
  bg.hole_mask.at(2, 0) = 1;

  const std::vector<ForegroundSplat> splats = {
      {0, 0, {200, 0, 0}, 4.0},  // nearer: wins
      {1, 0, {0, 200, 0}, 5.0},  // equal depth: background keeps the pixel
      {2, 0, {0, 0, 200}, 9.0},  // any depth fills a hole
  };
  const RenderOutput out = compose(bg, splats);

  CHECK(out.rgb.rgb(0, 0) == std::array<std::uint8_t, 3>{200, 0, 0});
  CHECK(out.render_depth.at(0, 0) == 4.0);
  CHECK(out.fg_mask.at(0, 0) == 1);

  CHECK(out.rgb.rgb(1, 0) == std::array<std::uint8_t, 3>{50, 50, 50});
  CHECK(out.fg_mask.at(1, 0) == 0);

  CHECK(out.rgb.rgb(2, 0) == std::array<std::uint8_t, 3>{0, 0, 200});
  CHECK(out.hole_mask.at(2, 0) == 0);
  CHECK(out.fg_mask.at(2, 0) == 1);
  CHECK(out.render_depth.at(2, 0) == 9.0);

  // Two foreground splats on one pixel: the nearer one wins.
  const RenderOutput duel = compose(bg, {{0, 0, {1, 1, 1}, 4.5}, {0, 0, {2, 2, 2}, 4.0}});
  CHECK(duel.rgb.rgb(0, 0) == std::array<std::uint8_t, 3>{2, 2, 2});
}

}  // TEST_SUITE
