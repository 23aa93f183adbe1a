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

#ifndef MVGROUND_MESH_HPP_
#define MVGROUND_MESH_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "mvground/scene.hpp"

namespace mvground {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;

  static constexpr double kDegenerateArea = 1e-12;

  // Throws InvariantViolation on out-of-range indices or degenerate faces.
  void Validate() const;
};

double TriangleArea(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace mvground

#endif  // MVGROUND_MESH_HPP_
