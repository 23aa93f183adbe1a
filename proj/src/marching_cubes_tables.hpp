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

#ifndef MVGROUND_SRC_MARCHING_CUBES_TABLES_HPP_
#define MVGROUND_SRC_MARCHING_CUBES_TABLES_HPP_

#include <cstdint>

namespace mvground::detail {

extern const std::uint16_t kEdgeTable[256];
extern const std::int8_t kTriTable[256][16];

// (dx, dy, dz) of each cell corner.
inline constexpr int kCornerOffset[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
};

// Corner pair joined by each of the 12 cell edges.
inline constexpr int kEdgeCorners[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
    {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

}  // namespace mvground::detail

#endif  // MVGROUND_SRC_MARCHING_CUBES_TABLES_HPP_
