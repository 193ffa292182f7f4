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

#include "png_io.hpp"

#include <png.h>

#include <bit>
#include <cstdio>
#include <memory>

#include "vdepth/errors.hpp"

namespace vdepth::png_io {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr file(std::fopen(path.c_str(), mode));
  if (!file) throw Error(Errc::io_error, "cannot open " + path);
  return file;
}

// The caller reports failures through exceptions; keep libpng off stderr.
void silent_error(png_structp png, png_const_charp) { longjmp(png_jmpbuf(png), 1); }
void silent_warning(png_structp, png_const_charp) {}

struct ReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~ReadGuard() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct WriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~WriteGuard() { png_destroy_write_struct(&png, &info); }
};

// Encoding is fixed to one compression level and one filter so that rewriting
// identical pixels reproduces identical bytes.
constexpr int kCompressionLevel = 1;

void begin_read(ReadGuard& g, const std::string& path) {
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, silent_error, silent_warning);
  if (g.png == nullptr) throw Error(Errc::io_error, "png reader allocation failed");
  g.info = png_create_info_struct(g.png);
  if (g.info == nullptr) throw Error(Errc::io_error, "png reader allocation failed");
}

void begin_write(WriteGuard& g) {
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, silent_error, silent_warning);
  if (g.png == nullptr) throw Error(Errc::io_error, "png writer allocation failed");
  g.info = png_create_info_struct(g.png);
  if (g.info == nullptr) throw Error(Errc::io_error, "png writer allocation failed");
}

void check_dims(int width, int height, std::size_t pixel_count, std::size_t channels) {
  if (width <= 0 || height <= 0 ||
      pixel_count != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels) {
    throw Error(Errc::size_mismatch, "pixel buffer does not match image dimensions");
  }
}

}  // namespace

std::vector<std::uint16_t> read_gray16(const std::string& path, int* width, int* height) {
  FilePtr file = open_file(path, "rb");
  ReadGuard g;
  begin_read(g, path);
  std::vector<std::uint16_t> pixels;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(g.png))) throw Error(Errc::corrupt_file, "png decode failed: " + path);
  png_init_io(g.png, file.get());
  png_read_info(g.png, g.info);
  const png_uint_32 w = png_get_image_width(g.png, g.info);
  const png_uint_32 h = png_get_image_height(g.png, g.info);
  const int bit_depth = png_get_bit_depth(g.png, g.info);
  const int color_type = png_get_color_type(g.png, g.info);
  if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 16) {
    throw Error(Errc::unsupported_bit_depth,
                path + ": expected 16-bit grayscale, got color type " +
                    std::to_string(color_type) + " depth " + std::to_string(bit_depth));
  }
  if constexpr (std::endian::native == std::endian::little) png_set_swap(g.png);
  pixels.resize(static_cast<std::size_t>(w) * h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) {
    rows[y] = reinterpret_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * w);
  }
  png_read_image(g.png, rows.data());
  png_read_end(g.png, nullptr);
  *width = static_cast<int>(w);
  *height = static_cast<int>(h);
  return pixels;
}

void write_gray16(const std::string& path, int width, int height,
                  const std::vector<std::uint16_t>& pixels) {
  check_dims(width, height, pixels.size(), 1);
  FilePtr file = open_file(path, "wb");
  WriteGuard g;
  begin_write(g);
  std::vector<png_bytep> rows(height);
  if (setjmp(png_jmpbuf(g.png))) throw Error(Errc::io_error, "png encode failed: " + path);
  png_init_io(g.png, file.get());
  png_set_compression_level(g.png, kCompressionLevel);
  png_set_filter(g.png, 0, PNG_FILTER_NONE);
  png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);
  if constexpr (std::endian::native == std::endian::little) png_set_swap(g.png);
  for (int y = 0; y < height; ++y) {
    rows[y] = reinterpret_cast<png_bytep>(
        const_cast<std::uint16_t*>(pixels.data() + static_cast<std::size_t>(y) * width));
  }
  png_write_image(g.png, rows.data());
  png_write_end(g.png, nullptr);
}

std::vector<std::uint8_t> read_rgb8(const std::string& path, int* width, int* height) {
  FilePtr file = open_file(path, "rb");
  ReadGuard g;
  begin_read(g, path);
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(g.png))) throw Error(Errc::corrupt_file, "png decode failed: " + path);
  png_init_io(g.png, file.get());
  png_read_info(g.png, g.info);
  const int bit_depth = png_get_bit_depth(g.png, g.info);
  const int color_type = png_get_color_type(g.png, g.info);
  if (bit_depth == 16) {
    throw Error(Errc::unsupported_bit_depth, path + ": expected 8-bit color, got 16-bit");
  }
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(g.png);
  if (png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(g.png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(g.png);
  }
  png_set_strip_alpha(g.png);
  png_read_update_info(g.png, g.info);
  const png_uint_32 w = png_get_image_width(g.png, g.info);
  const png_uint_32 h = png_get_image_height(g.png, g.info);
  if (png_get_channels(g.png, g.info) != 3 || png_get_bit_depth(g.png, g.info) != 8) {
    throw Error(Errc::unsupported_bit_depth, path + ": cannot normalize to 8-bit RGB");
  }
  pixels.resize(static_cast<std::size_t>(w) * h * 3);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) {
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * 3;
  }
  png_read_image(g.png, rows.data());
  png_read_end(g.png, nullptr);
  *width = static_cast<int>(w);
  *height = static_cast<int>(h);
  return pixels;
}

void write_rgb8(const std::string& path, int width, int height,
                const std::vector<std::uint8_t>& pixels) {
  check_dims(width, height, pixels.size(), 3);
  FilePtr file = open_file(path, "wb");
  WriteGuard g;
  begin_write(g);
  std::vector<png_bytep> rows(height);
  if (setjmp(png_jmpbuf(g.png))) throw Error(Errc::io_error, "png encode failed: " + path);
  png_init_io(g.png, file.get());
  png_set_compression_level(g.png, kCompressionLevel);
  png_set_filter(g.png, 0, PNG_FILTER_NONE);
  png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<std::uint8_t*>(pixels.data() + static_cast<std::size_t>(y) * width * 3);
  }
  png_write_image(g.png, rows.data());
  png_write_end(g.png, nullptr);
}

void write_gray8(const std::string& path, int width, int height,
                 const std::vector<std::uint8_t>& pixels) {
  check_dims(width, height, pixels.size(), 1);
  FilePtr file = open_file(path, "wb");
  WriteGuard g;
  begin_write(g);
  std::vector<png_bytep> rows(height);
  if (setjmp(png_jmpbuf(g.png))) throw Error(Errc::io_error, "png encode failed: " + path);
  png_init_io(g.png, file.get());
  png_set_compression_level(g.png, kCompressionLevel);
  png_set_filter(g.png, 0, PNG_FILTER_NONE);
  png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<std::uint8_t*>(pixels.data() + static_cast<std::size_t>(y) * width);
  }
  png_write_image(g.png, rows.data());
  png_write_end(g.png, nullptr);
}

std::vector<std::uint8_t> read_gray8(const std::string& path, int* width, int* height) {
  FilePtr file = open_file(path, "rb");
  ReadGuard g;
  begin_read(g, path);
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(g.png))) throw Error(Errc::corrupt_file, "png decode failed: " + path);
  png_init_io(g.png, file.get());
  png_read_info(g.png, g.info);
  const int bit_depth = png_get_bit_depth(g.png, g.info);
  const int color_type = png_get_color_type(g.png, g.info);
  if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth > 8) {
    throw Error(Errc::unsupported_bit_depth, path + ": expected 8-bit grayscale");
  }
  if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(g.png);
  png_read_update_info(g.png, g.info);
  const png_uint_32 w = png_get_image_width(g.png, g.info);
  const png_uint_32 h = png_get_image_height(g.png, g.info);
  pixels.resize(static_cast<std::size_t>(w) * h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) {
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * w;
  }
  png_read_image(g.png, rows.data());
  png_read_end(g.png, nullptr);
  *width = static_cast<int>(w);
  *height = static_cast<int>(h);
  return pixels;
}

}  // namespace vdepth::png_io
