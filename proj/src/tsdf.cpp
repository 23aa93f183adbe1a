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

#include "mvground/tsdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <unordered_map>

#include "marching_cubes_tables.hpp"
#include "mvground/error.hpp"
#include "mvground/parallel.hpp"

namespace mvground {

TsdfVolume::TsdfVolume(const Vec3& origin, double voxel_size,
                       double truncation, std::array<int, 3> dims,
                       std::size_t max_voxels)
    : origin_(origin),
      voxel_size_(voxel_size),
      truncation_(truncation),
      dims_(dims) {
  if (!(voxel_size > 0) || !std::isfinite(voxel_size)) {
    throw Error(ErrorKind::kInvalidArgument, "voxel_size must be positive");
  }
  if (!(truncation >= 2.0 * voxel_size)) {
    throw Error(ErrorKind::kInvalidArgument,
                "truncation must be at least twice the voxel size");
  }
  if (!origin.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "volume origin must be finite");
  }
  double count = 1.0;
  for (int d : dims) {
    if (d < 1) throw Error(ErrorKind::kInvalidArgument, "volume dims must be >= 1");
    count *= d;
  }
  if (count > static_cast<double>(max_voxels)) {
    throw Error(ErrorKind::kMemoryCapExceeded,
                std::to_string(dims[0]) + "x" + std::to_string(dims[1]) + "x" +
                    std::to_string(dims[2]) + " voxels exceeds cap of " +
                    std::to_string(max_voxels));
  }
  values_.assign(static_cast<std::size_t>(count), 1.0);
  weights_.assign(static_cast<std::size_t>(count), 0.0f);
}

Vec3 TsdfVolume::VoxelCenter(int i, int j, int k) const {
  return origin_ + voxel_size_ * Vec3(i + 0.5, j + 0.5, k + 0.5);
}

Box3 TsdfVolume::Bounds() const {
  return Box3{origin_, origin_ + voxel_size_ * Vec3(dims_[0], dims_[1], dims_[2])};
}

void TsdfVolume::Set(int i, int j, int k, double value, float weight) {
  const std::size_t idx = Index(i, j, k);
  values_[idx] = std::clamp(value, -1.0, 1.0);
  weights_[idx] = weight;
}

TsdfVolume VolumeForScene(std::span<const Frame> frames, const TsdfParams& params) {
  if (!(params.truncation >= 2.0 * params.voxel_size) || !(params.voxel_size > 0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "need voxel_size > 0 and truncation >= 2 * voxel_size");
  }
  if (!(params.margin >= 0)) {
    throw Error(ErrorKind::kInvalidArgument, "margin must be non-negative");
  }
  const int stride = std::max(1, params.bounds_stride);
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  bool any = false;
  for (const Frame& frame : frames) {
    if (!frame.pose) throw Error(ErrorKind::kMissingPose, "frame '" + frame.id + "'");
    if (!frame.depth) throw Error(ErrorKind::kMissingDepth, "frame '" + frame.id + "'");
    const DepthMap& depth = *frame.depth;
    for (int v = 0; v < depth.height; v += stride) {
      for (int u = 0; u < depth.width; u += stride) {
        const float d = depth.at(u, v);
        if (!(d > 0.0f)) continue;
        const Vec3 p = frame.pose->Apply(Unproject(u, v, d, frame.intrinsics));
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
        any = true;
      }
    }
  }
  if (!any) throw Error(ErrorKind::kNoValidDepth, "no valid depth sample in any frame");

  const Vec3 origin = lo - Vec3::Constant(params.margin);
  const Vec3 extent = (hi - lo) + Vec3::Constant(2.0 * params.margin);
  std::array<int, 3> dims{};
  for (int a = 0; a < 3; ++a) {
    const double cells = std::ceil(extent[a] / params.voxel_size);
    if (cells > static_cast<double>(params.max_voxels)) {
      throw Error(ErrorKind::kMemoryCapExceeded, "volume axis too long");
    }
    dims[static_cast<std::size_t>(a)] = std::max(1, static_cast<int>(cells));
  }
  return TsdfVolume(origin, params.voxel_size, params.truncation, dims,
                    params.max_voxels);
}

void Integrate(TsdfVolume& volume, const Frame& frame, int jobs) {
  if (!frame.pose) throw Error(ErrorKind::kMissingPose, "frame '" + frame.id + "'");
  if (!frame.depth) throw Error(ErrorKind::kMissingDepth, "frame '" + frame.id + "'");
  const DepthMap& depth = *frame.depth;
  const Intrinsics& k = frame.intrinsics;
  const Pose world_to_cam = frame.pose->Inverse();
  const double trunc = volume.truncation();
  const auto [nx, ny, nz] = volume.dims();
  std::span<double> values = volume.mutable_values();
  std::span<float> weights = volume.mutable_weights();

  // Slabs along z are disjoint, so workers never share a voxel.
  ParallelFor(
      static_cast<std::size_t>(nz),
      [&](std::size_t z_begin, std::size_t z_end) {
        for (int z = static_cast<int>(z_begin); z < static_cast<int>(z_end); ++z) {
          for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x) {
              const Vec3 p_cam = world_to_cam.Apply(volume.VoxelCenter(x, y, z));
              if (p_cam.z() <= 0.0) continue;
              const PixelDepth px = Project(p_cam, k);
              const long u = std::lround(px.u);
              const long v = std::lround(px.v);
              if (u < 0 || v < 0 || u >= depth.width || v >= depth.height) continue;
              const float d = depth.at(static_cast<int>(u), static_cast<int>(v));
              if (!(d > 0.0f)) continue;
              const double sdf = static_cast<double>(d) - p_cam.z();
              if (sdf < -trunc) continue;
              const double tsdf = std::min(1.0, sdf / trunc);
              const std::size_t idx = volume.Index(x, y, z);
              const double w = weights[idx];
              values[idx] = (values[idx] * w + tsdf) / (w + 1.0);
              weights[idx] = static_cast<float>(w + 1.0);
            }
          }
        }
      },
      jobs);
}

void FillFromSdf(TsdfVolume& volume, const std::function<double(const Vec3&)>& sdf) {
  const auto [nx, ny, nz] = volume.dims();
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        volume.Set(x, y, z, sdf(volume.VoxelCenter(x, y, z)) / volume.truncation(),
                   1.0f);
      }
    }
  }
}

namespace {

// Builds the welded mesh. Edge vertices are keyed by (lower voxel, axis);
// crossings that land exactly on a voxel are keyed by the voxel itself so
// every cell touching it shares one vertex.
class MeshBuilder {
 public:
  explicit MeshBuilder(const TsdfVolume& volume) : volume_(volume) {}

  std::uint32_t EdgeVertex(const std::array<int, 3>& a, const std::array<int, 3>& b) {
    const double va = volume_.value(a[0], a[1], a[2]);
    const double vb = volume_.value(b[0], b[1], b[2]);
    if (va == 0.0) return CornerVertex(a);
    if (vb == 0.0) return CornerVertex(b);
    int axis = 0;
    while (a[static_cast<std::size_t>(axis)] == b[static_cast<std::size_t>(axis)]) ++axis;
    const std::array<int, 3>& lower = a[static_cast<std::size_t>(axis)] <
                                              b[static_cast<std::size_t>(axis)]
                                          ? a
                                          : b;
    const std::uint64_t key =
        volume_.Index(lower[0], lower[1], lower[2]) * 4 + static_cast<std::uint64_t>(axis);
    auto [it, inserted] = index_.try_emplace(key, 0);
    if (inserted) {
      const double t = va / (va - vb);
      const Vec3 pa = volume_.VoxelCenter(a[0], a[1], a[2]);
      const Vec3 pb = volume_.VoxelCenter(b[0], b[1], b[2]);
      it->second = Push(pa + t * (pb - pa));
    }
    return it->second;
  }

  void AddTriangle(std::uint32_t i0, std::uint32_t i1, std::uint32_t i2) {
    if (i0 == i1 || i1 == i2 || i0 == i2) return;
    if (TriangleArea(vertices_[i0], vertices_[i1], vertices_[i2]) <=
        TriangleMesh::kDegenerateArea) {
      return;
    }
    triangles_.push_back({i0, i1, i2});
  }

  // Drops vertices no surviving triangle references.
  TriangleMesh Finish() {
    TriangleMesh mesh;
    std::vector<std::uint32_t> remap(vertices_.size(), kUnused);
    for (auto& tri : triangles_) {
      for (std::uint32_t& idx : tri) {
        if (remap[idx] == kUnused) {
          remap[idx] = static_cast<std::uint32_t>(mesh.vertices.size());
          mesh.vertices.push_back(vertices_[idx]);
        }
        idx = remap[idx];
      }
    }
    mesh.triangles = std::move(triangles_);
    return mesh;
  }

 private:
  static constexpr std::uint32_t kUnused = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t CornerVertex(const std::array<int, 3>& c) {
    const std::uint64_t key = volume_.Index(c[0], c[1], c[2]) * 4 + 3;
    auto [it, inserted] = index_.try_emplace(key, 0);
    if (inserted) it->second = Push(volume_.VoxelCenter(c[0], c[1], c[2]));
    return it->second;
  }

  std::uint32_t Push(const Vec3& p) {
    vertices_.push_back(p);
    return static_cast<std::uint32_t>(vertices_.size() - 1);
  }

  const TsdfVolume& volume_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::vector<Vec3> vertices_;
  std::vector<std::array<std::uint32_t, 3>> triangles_;
};

}  // namespace

TriangleMesh ExtractMesh(const TsdfVolume& volume) {
  const auto [nx, ny, nz] = volume.dims();
  MeshBuilder builder(volume);
  std::array<std::array<int, 3>, 8> corners;
  std::array<std::uint32_t, 12> edge_vertex{};
  for (int z = 0; z + 1 < nz; ++z) {
    for (int y = 0; y + 1 < ny; ++y) {
      for (int x = 0; x + 1 < nx; ++x) {
        int cube = 0;
        bool observed = true;
        for (int c = 0; c < 8 && observed; ++c) {
          const auto& off = detail::kCornerOffset[c];
          corners[static_cast<std::size_t>(c)] = {x + off[0], y + off[1], z + off[2]};
          const auto& p = corners[static_cast<std::size_t>(c)];
          observed = volume.weight(p[0], p[1], p[2]) > 0.0f;
          if (volume.value(p[0], p[1], p[2]) < 0.0) cube |= 1 << c;
        }
        if (!observed) continue;
        const std::uint16_t edges = detail::kEdgeTable[cube];
        if (edges == 0) continue;
        for (int e = 0; e < 12; ++e) {
          if (edges & (1 << e)) {
            edge_vertex[static_cast<std::size_t>(e)] = builder.EdgeVertex(
                corners[static_cast<std::size_t>(detail::kEdgeCorners[e][0])],
                corners[static_cast<std::size_t>(detail::kEdgeCorners[e][1])]);
          }
        }
        const std::int8_t* tri = detail::kTriTable[cube];
        for (int t = 0; tri[t] != -1; t += 3) {
          builder.AddTriangle(edge_vertex[static_cast<std::size_t>(tri[t])],
                              edge_vertex[static_cast<std::size_t>(tri[t + 1])],
                              edge_vertex[static_cast<std::size_t>(tri[t + 2])]);
        }
      }
    }
  }
  TriangleMesh mesh = builder.Finish();
  if (mesh.triangles.empty()) {
    throw Error(ErrorKind::kEmptySurface, "no observed zero crossing in volume");
  }
  return mesh;
}

PointSet ExtractPoints(const TsdfVolume& volume) {
  constexpr double kTol = 1e-9;
  TriangleMesh mesh = ExtractMesh(volume);
  std::vector<Vec3> pts = std::move(mesh.vertices);
  std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) {
    return std::tie(a.x(), a.y(), a.z()) < std::tie(b.x(), b.y(), b.z());
  });
  PointSet out;
  // Kept points whose x lies within kTol of the current point form a short
  // window at the tail of the output.
  for (const Vec3& p : pts) {
    bool duplicate = false;
    for (auto it = out.points.rbegin();
         it != out.points.rend() && p.x() - it->x() <= kTol; ++it) {
      if ((p - *it).cwiseAbs().maxCoeff() <= kTol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.points.push_back(p);
  }
  return out;
}

}  // namespace mvground
