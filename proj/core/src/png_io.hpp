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

#include <cstdint>
#include <string>
#include <vector>

namespace vdepth::png_io {

// Single-channel 16-bit grayscale, host byte order in memory.
std::vector<std::uint16_t> read_gray16(const std::string& path, int* width, int* height);
void write_gray16(const std::string& path, int width, int height,
                  const std::vector<std::uint16_t>& pixels);

// 8-bit RGB; palette, grayscale and alpha inputs are converted on read.
std::vector<std::uint8_t> read_rgb8(const std::string& path, int* width, int* height);
void write_rgb8(const std::string& path, int width, int height,
                const std::vector<std::uint8_t>& pixels);

// 8-bit grayscale, used for masks.
void write_gray8(const std::string& path, int width, int height,
                 const std::vector<std::uint8_t>& pixels);
std::vector<std::uint8_t> read_gray8(const std::string& path, int* width, int* height);

}  // namespace vdepth::png_io
