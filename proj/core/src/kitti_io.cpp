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

#include "vdepth/kitti_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "png_io.hpp"
#include "vdepth/errors.hpp"

namespace vdepth {

namespace {

constexpr double kDepthScale = 256.0;
constexpr double kMaxRaw = 65535.0;

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

double parse_number(const std::string& token, size_t line_index) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + token.size() || !std::isfinite(value)) {
    throw Error(Errc::malformed_line,
                "line " + std::to_string(line_index + 1) + ": bad number '" + token + "'");
  }
  return value;
}

}  // namespace

SparseDepthMap load_depth(const std::string& path) {
  int width = 0;
  int height = 0;
  const std::vector<std::uint16_t> raw = png_io::read_gray16(path, &width, &height);
  SparseDepthMap map = SparseDepthMap::zeros(width, height);
  for (size_t i = 0; i < raw.size(); ++i) {
    map.values[i] = static_cast<double>(raw[i]) / kDepthScale;
  }
  return map;
}

void save_depth(const SparseDepthMap& map, const std::string& path) {
  std::vector<std::uint16_t> raw(map.values.size());
  for (size_t i = 0; i < map.values.size(); ++i) {
    const double v = map.values[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(Errc::value_out_of_range, "depth value " + std::to_string(v));
    }
    const double scaled = std::round(v * kDepthScale);
    if (scaled > kMaxRaw) {
      throw Error(Errc::value_out_of_range,
                  "depth value " + std::to_string(v) + " exceeds the 16-bit range");
    }
    raw[i] = static_cast<std::uint16_t>(scaled);
  }
  png_io::write_gray16(path, map.width, map.height, raw);
}

RGBImage load_rgb(const std::string& path) {
  RGBImage image;
  image.pixels = png_io::read_rgb8(path, &image.width, &image.height);
  return image;
}

void save_rgb(const RGBImage& image, const std::string& path) {
  png_io::write_rgb8(path, image.width, image.height, image.pixels);
}

std::vector<ObjectLabel> parse_labels(const std::string& text) {
  std::vector<ObjectLabel> labels;
  std::istringstream stream(text);
  std::string line;
  size_t line_index = 0;
  for (; std::getline(stream, line); ++line_index) {
    const std::vector<std::string> tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 15 && tokens.size() != 16) {
      throw Error(Errc::malformed_line,
                  "line " + std::to_string(line_index + 1) + ": expected 15 or 16 fields, got " +
                      std::to_string(tokens.size()));
    }
    ObjectLabel label;
    label.category = tokens[0];
    label.truncation = parse_number(tokens[1], line_index);
    label.occlusion = static_cast<int>(std::lround(parse_number(tokens[2], line_index)));
    label.alpha = parse_number(tokens[3], line_index);
    label.bbox2d.left = parse_number(tokens[4], line_index);
    label.bbox2d.top = parse_number(tokens[5], line_index);
    label.bbox2d.right = parse_number(tokens[6], line_index);
    label.bbox2d.bottom = parse_number(tokens[7], line_index);
    label.height = parse_number(tokens[8], line_index);
    label.width = parse_number(tokens[9], line_index);
    label.length = parse_number(tokens[10], line_index);
    label.x = parse_number(tokens[11], line_index);
    label.y = parse_number(tokens[12], line_index);
    label.z = parse_number(tokens[13], line_index);
    label.rotation_y = parse_number(tokens[14], line_index);
    if (tokens.size() == 16) label.score = parse_number(tokens[15], line_index);
    labels.push_back(std::move(label));
  }
  return labels;
}

std::string serialize_labels(const std::vector<ObjectLabel>& labels) {
  std::string out;
  char buf[512];
  for (const ObjectLabel& label : labels) {
    int n = std::snprintf(buf, sizeof(buf),
                          "%s %.2f %d %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f",
                          label.category.c_str(), label.truncation, label.occlusion, label.alpha,
                          label.bbox2d.left, label.bbox2d.top, label.bbox2d.right,
                          label.bbox2d.bottom, label.height, label.width, label.length, label.x,
                          label.y, label.z, label.rotation_y);
    if (n < 0 || static_cast<size_t>(n) >= sizeof(buf)) {
      throw Error(Errc::io_error, "label row too long");
    }
    out.append(buf, static_cast<size_t>(n));
    if (label.score.has_value()) {
      n = std::snprintf(buf, sizeof(buf), " %.2f", *label.score);
      out.append(buf, static_cast<size_t>(n));
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<ObjectLabel> load_labels(const std::string& path) {
  return parse_labels(read_text_file(path));
}

void save_labels(const std::vector<ObjectLabel>& labels, const std::string& path) {
  write_text_file(path, serialize_labels(labels));
}

std::string read_text_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw Error(Errc::io_error, "cannot open " + path);
  std::ostringstream out;
  out << stream.rdbuf();
  if (stream.bad()) throw Error(Errc::io_error, "read failed: " + path);
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream) throw Error(Errc::io_error, "cannot open " + path);
  stream.write(content.data(), static_cast<std::streamsize>(content.size()));
  stream.flush();
  if (!stream) throw Error(Errc::io_error, "write failed: " + path);
}

}  // namespace vdepth
