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
#include <string>

namespace vdepth {

// Point in camera coordinates: x right, y down, z forward, meters.
struct CameraPoint {
  double x = 0;
  double y = 0;
  double z = 0;
};

// Pinhole parameters of a rectified projection matrix. fx/fy/cx/cy are in
// pixels; p14/p24/p34 are the affine terms of P (pixel*m, pixel*m, m).
struct Intrinsics {
  double fx = 0;
  double fy = 0;
  double cx = 0;
  double cy = 0;
  double p14 = 0;
  double p24 = 0;
  double p34 = 0;
};

// 3x4 homogeneous projection in rectified-camera form: row 3 is [0, 0, 1, p34],
// the off-diagonal focal terms are zero and fx, fy are positive. Row-major.
class ProjectionMatrix {
 public:
  explicit ProjectionMatrix(const std::array<double, 12>& row_major);
  static ProjectionMatrix from_intrinsics(const Intrinsics& intr);

  double at(int row, int col) const { return m_[row * 4 + col]; }
  const std::array<double, 12>& data() const { return m_; }
  double p34() const { return m_[11]; }

  Intrinsics intrinsics() const;

 private:
  std::array<double, 12> m_;
};

struct PixelProjection {
  double u = 0;
  double v = 0;
  double w = 0;  // projective depth, z + p34 for rectified matrices
};

// Extracts the matrix after "<key>:" from KITTI-style calibration text.
// Throws Errc::missing_key, malformed_number, non_rectified_matrix.
ProjectionMatrix parse_calibration(const std::string& text, const std::string& key);

// Projects a camera-space point. Throws Errc::behind_camera when w <= 0.
PixelProjection project(const CameraPoint& p, const ProjectionMatrix& P);

// Maps a pixel with known metric depth (the z coordinate) back to camera space.
// Exact inverse of project for rectified matrices, affine terms included.
// Throws Errc::non_positive_depth.
CameraPoint unproject(double u, double v, double depth, const Intrinsics& intr);

// Solves P * [x, y, z, 1]^T = (z + p34) * [u, v, 1]^T for x and y.
// Throws Errc::behind_camera when z + p34 <= 0.
CameraPoint recover_location(double u, double v, double z, const ProjectionMatrix& P);

}  // namespace vdepth
