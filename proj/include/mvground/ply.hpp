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

#ifndef MVGROUND_PLY_HPP_
#define MVGROUND_PLY_HPP_

#include <filesystem>
#include <vector>

#include "mvground/mesh.hpp"

namespace mvground {

// Binary little-endian PLY, float32 positions only.
void WritePlyPoints(const std::filesystem::path& file,
                    const std::vector<Vec3>& points);
// Binary little-endian PLY with a vertex element and a face element
// (uchar count, int32 indices).
void WritePlyMesh(const std::filesystem::path& file, const TriangleMesh& mesh);

// Reads vertex positions from a binary little-endian or ASCII PLY. Vertex
// properties other than x/y/z are skipped; elements after the vertices are
// ignored.
std::vector<Vec3> ReadPlyPoints(const std::filesystem::path& file);

}  // namespace mvground

#endif  // MVGROUND_PLY_HPP_
