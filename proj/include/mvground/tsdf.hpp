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

#ifndef MVGROUND_TSDF_HPP_
#define MVGROUND_TSDF_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mvground/geometry.hpp"
#include "mvground/mesh.hpp"
#include "mvground/scene.hpp"

namespace mvground {

struct TsdfParams {
  double voxel_size = 0.04;
  double truncation = 0.12;
  double margin = 0.2;
  // Hard cap on voxel count; dense storage costs 12 bytes per voxel.
  std::size_t max_voxels = std::size_t{1} << 25;
  // Pixel stride used when sizing the volume from depth samples.
  int bounds_stride = 2;
  int jobs = 0;
};

// Dense truncated signed distance grid. Voxel (i, j, k) is sampled at its
// cell center origin + (idx + 0.5) * voxel_size. Values are normalized by the
// truncation distance and start at +1 with weight 0.
class TsdfVolume {
 public:
  TsdfVolume(const Vec3& origin, double voxel_size, double truncation,
             std::array<int, 3> dims,
             std::size_t max_voxels = TsdfParams{}.max_voxels);

  const Vec3& origin() const { return origin_; }
  double voxel_size() const { return voxel_size_; }
  double truncation() const { return truncation_; }
  const std::array<int, 3>& dims() const { return dims_; }
  std::size_t voxel_count() const { return values_.size(); }

  std::size_t Index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * dims_[1] + j) * dims_[0] + i;
  }
  double value(int i, int j, int k) const { return values_[Index(i, j, k)]; }
  float weight(int i, int j, int k) const { return weights_[Index(i, j, k)]; }
  Vec3 VoxelCenter(int i, int j, int k) const;
  Box3 Bounds() const;

  // Direct write; `value` is clamped to [-1, 1].
  void Set(int i, int j, int k, double value, float weight);

  std::span<const double> values() const { return values_; }
  std::span<const float> weights() const { return weights_; }
  std::span<double> mutable_values() { return values_; }
  std::span<float> mutable_weights() { return weights_; }

 private:
  Vec3 origin_;
  double voxel_size_;
  double truncation_;
  std::array<int, 3> dims_;
  std::vector<double> values_;
  std::vector<float> weights_;
};

// Empty volume covering every valid depth sample of `frames` plus a margin.
// Throws NoValidDepth or MemoryCapExceeded.
TsdfVolume VolumeForScene(std::span<const Frame> frames, const TsdfParams& params);

// Fuses one posed depth frame with unit weight per observation. Voxels more
// than the truncation distance behind the observed surface are untouched.
void Integrate(TsdfVolume& volume, const Frame& frame, int jobs = 0);

// Samples an analytic signed distance function at every voxel center with
// weight 1 (values clamped by the truncation distance).
void FillFromSdf(TsdfVolume& volume, const std::function<double(const Vec3&)>& sdf);

// Marching-cubes iso-surface at value 0 over cells whose 8 corners all carry
// weight. Vertices are shared between neighboring cells. Throws EmptySurface.
TriangleMesh ExtractMesh(const TsdfVolume& volume);

// Mesh vertices, deduplicated within 1e-9.
PointSet ExtractPoints(const TsdfVolume& volume);

}  // namespace mvground

#endif  // MVGROUND_TSDF_HPP_
