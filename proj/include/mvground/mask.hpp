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

#ifndef MVGROUND_MASK_HPP_
#define MVGROUND_MASK_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mvground {

// Dense row-major binary image; any non-zero byte is foreground.
struct BinaryGrid {
  int width = 0, height = 0;
  std::vector<std::uint8_t> pixels;

  BinaryGrid() = default;
  BinaryGrid(int w, int h) : width(w), height(h), pixels(std::size_t(w) * h) {}

  bool at(int u, int v) const {
    return pixels[static_cast<std::size_t>(v) * width + u] != 0;
  }
  void set(int u, int v, bool on = true) {
    pixels[static_cast<std::size_t>(v) * width + u] = on ? 1 : 0;
  }
  std::size_t CountSet() const;

  bool operator==(const BinaryGrid& other) const;
};

enum class MaskSource { kOracleSegmenter, kFixture, kSynthetic };

// Run-length encoded instance mask. Runs alternate background/foreground in
// row-major order starting with background; the canonical form has no
// zero-length runs except a possible leading background run.
struct Mask2D {
  std::string frame_id;
  std::string instance;
  int width = 0, height = 0;
  std::vector<std::uint32_t> runs;
  MaskSource source = MaskSource::kFixture;

  std::uint64_t ForegroundCount() const;
  bool Empty() const { return ForegroundCount() == 0; }
  // Throws LengthMismatch when runs do not cover width x height.
  void Validate() const;
};

Mask2D RleEncode(const BinaryGrid& grid);
BinaryGrid RleDecode(const Mask2D& mask);
// Merges zero-length interior runs and drops trailing empty runs.
std::vector<std::uint32_t> CanonicalRuns(const std::vector<std::uint32_t>& runs);

}  // namespace mvground

#endif  // MVGROUND_MASK_HPP_
