// Copyright 2026 The mvground Authors
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

#include "mvground/mask.hpp"

#include <algorithm>

#include "mvground/error.hpp"

namespace mvground {

std::size_t BinaryGrid::CountSet() const {
  return static_cast<std::size_t>(
      std::count_if(pixels.begin(), pixels.end(), [](auto p) { return p != 0; }));
}

bool BinaryGrid::operator==(const BinaryGrid& other) const {
  if (width != other.width || height != other.height) return false;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if ((pixels[i] != 0) != (other.pixels[i] != 0)) return false;
  }
  return true;
}

std::uint64_t Mask2D::ForegroundCount() const {
  std::uint64_t n = 0;
  for (std::size_t i = 1; i < runs.size(); i += 2) n += runs[i];
  return n;
}

void Mask2D::Validate() const {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kInvalidArgument, "mask dims must be positive");
  }
  std::uint64_t total = 0;
  for (std::uint32_t r : runs) total += r;
  if (total != static_cast<std::uint64_t>(width) * height) {
    throw Error(ErrorKind::kLengthMismatch,
                "runs sum to " + std::to_string(total) + ", expected " +
                    std::to_string(std::uint64_t(width) * height));
  }
}

Mask2D RleEncode(const BinaryGrid& grid) {
  if (grid.width < 1 || grid.height < 1) {
    throw Error(ErrorKind::kInvalidArgument, "grid dims must be positive");
  }
  Mask2D mask;
  mask.width = grid.width;
  mask.height = grid.height;
  bool current = false;
  std::uint32_t run = 0;
  for (std::uint8_t p : grid.pixels) {
    const bool on = p != 0;
    if (on != current) {
      mask.runs.push_back(run);
      run = 0;
      current = on;
    }
    ++run;
  }
  mask.runs.push_back(run);
  return mask;
}

BinaryGrid RleDecode(const Mask2D& mask) {
  mask.Validate();
  BinaryGrid grid(mask.width, mask.height);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < mask.runs.size(); ++i) {
    const std::uint32_t len = mask.runs[i];
    if (i % 2 == 1) {
      std::fill_n(grid.pixels.begin() + static_cast<std::ptrdiff_t>(pos), len,
                  std::uint8_t{1});
    }
    pos += len;
  }
  return grid;
}

std::vector<std::uint32_t> CanonicalRuns(
    const std::vector<std::uint32_t>& runs) {
  // Re-walk the runs as (value, length) pairs and merge equal neighbours.
  std::vector<std::uint32_t> out;
  bool out_value = false;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const bool value = (i % 2) == 1;
    const std::uint32_t len = runs[i];
    if (len == 0) continue;
    if (out.empty()) {
      if (value) out.push_back(0);
      out.push_back(len);
      out_value = value;
    } else if (value == out_value) {
      out.back() += len;
    } else {
      out.push_back(len);
      out_value = value;
    }
  }
  if (out.empty()) out.push_back(0);
  return out;
}

}  // namespace mvground
