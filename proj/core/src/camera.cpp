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

#include "vdepth/camera.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "vdepth/errors.hpp"

namespace vdepth {

namespace {

constexpr double kRectifiedTolerance = 1e-9;

bool near(double value, double target) {
  return std::fabs(value - target) <= kRectifiedTolerance;
}

}  // namespace

ProjectionMatrix::ProjectionMatrix(const std::array<double, 12>& row_major)
    : m_(row_major) {
  for (double v : m_) {
    if (!std::isfinite(v)) {
      throw Error(Errc::non_rectified_matrix, "projection matrix has non-finite entries");
    }
  }
  if (!near(m_[8], 0.0) || !near(m_[9], 0.0) || !near(m_[10], 1.0)) {
    throw Error(Errc::non_rectified_matrix, "row 3 must be [0, 0, 1, p34]");
  }
  if (!near(m_[1], 0.0) || !near(m_[4], 0.0)) {
    throw Error(Errc::non_rectified_matrix, "focal block must be diagonal");
  }
  if (m_[0] <= 0.0 || m_[5] <= 0.0) {
    throw Error(Errc::non_rectified_matrix, "focal lengths must be positive");
  }
  // Snap the structural entries so projective weights are exact.
  m_[1] = m_[4] = m_[8] = m_[9] = 0.0;
  m_[10] = 1.0;
}

ProjectionMatrix ProjectionMatrix::from_intrinsics(const Intrinsics& intr) {
  return ProjectionMatrix({intr.fx, 0.0, intr.cx, intr.p14,
                           0.0, intr.fy, intr.cy, intr.p24,
                           0.0, 0.0, 1.0, intr.p34});
}

Intrinsics ProjectionMatrix::intrinsics() const {
  Intrinsics intr;
  intr.fx = m_[0];
  intr.fy = m_[5];
  intr.cx = m_[2];
  intr.cy = m_[6];
  intr.p14 = m_[3];
  intr.p24 = m_[7];
  intr.p34 = m_[11];
  return intr;
}

ProjectionMatrix parse_calibration(const std::string& text, const std::string& key) {
  std::istringstream lines(text);
  std::string line;
  const std::string prefix = key + ":";
  while (std::getline(lines, line)) {
    if (line.compare(0, prefix.size(), prefix) != 0) {
      continue;
    }
    std::array<double, 12> values{};
    const char* cursor = line.c_str() + prefix.size();
    for (int i = 0; i < 12; ++i) {
      char* end = nullptr;
      values[i] = std::strtod(cursor, &end);
      if (end == cursor) {
        throw Error(Errc::malformed_number,
                    "calibration entry '" + key + "' needs 12 numbers");
      }
      cursor = end;
    }
    char* end = nullptr;
    std::strtod(cursor, &end);
    if (end != cursor) {
      throw Error(Errc::malformed_number,
                  "calibration entry '" + key + "' has more than 12 numbers");
    }
    return ProjectionMatrix(values);
  }
  throw Error(Errc::missing_key, "calibration key '" + key + "' not found");
}

PixelProjection project(const CameraPoint& p, const ProjectionMatrix& P) {
  const auto& m = P.data();
  const double w = m[8] * p.x + m[9] * p.y + m[10] * p.z + m[11];
  if (w <= 0.0) {
    throw Error(Errc::behind_camera, "projective weight is not positive");
  }
  PixelProjection out;
  out.u = (m[0] * p.x + m[1] * p.y + m[2] * p.z + m[3]) / w;
  out.v = (m[4] * p.x + m[5] * p.y + m[6] * p.z + m[7]) / w;
  out.w = w;
  return out;
}

CameraPoint unproject(double u, double v, double depth, const Intrinsics& intr) {
  if (!(depth > 0.0)) {
    throw Error(Errc::non_positive_depth, "unproject needs depth > 0");
  }
  const double w = depth + intr.p34;
  CameraPoint p;
  p.x = (w * u - intr.cx * depth - intr.p14) / intr.fx;
  p.y = (w * v - intr.cy * depth - intr.p24) / intr.fy;
  p.z = depth;
  return p;
}

CameraPoint recover_location(double u, double v, double z, const ProjectionMatrix& P) {
  const double w = z + P.p34();
  if (w <= 0.0) {
    throw Error(Errc::behind_camera, "recover_location needs z + p34 > 0");
  }
  const auto& m = P.data();
  CameraPoint p;
  p.x = (w * u - m[2] * z - m[3]) / m[0];
  p.y = (w * v - m[6] * z - m[7]) / m[5];
  p.z = z;
  return p;
}

}  // namespace vdepth
