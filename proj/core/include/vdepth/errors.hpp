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

#include <stdexcept>
#include <string>

namespace vdepth {

enum class Errc {
  missing_key,
  malformed_number,
  non_rectified_matrix,
  non_positive_depth,
  behind_camera,
  too_close,
  size_mismatch,
  value_out_of_range,
  malformed_line,
  unsupported_bit_depth,
  corrupt_file,
  all_pixels_invalid,
  degenerate_box,
  non_finite,
  io_error,
  inpaint_failed,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace vdepth
