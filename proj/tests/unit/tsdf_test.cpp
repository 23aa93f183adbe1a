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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "mvground/error.hpp"
#include "mvground/geometry.hpp"
#include "mvground/tsdf.hpp"
#include "test_util.hpp"

namespace mvground {
namespace {

using testing::MakeFrame;

// Frontal plane at z = 2 seen by an identity camera.
TsdfVolume PlaneVolume() {
  return TsdfVolume(Vec3(-0.3, -0.3, 1.5), 0.02, 0.06, {30, 30, 50});
}

TEST(TsdfVolumeTest, StartsUnobserved) {
  const TsdfVolume v = PlaneVolume();
  EXPECT_EQ(v.voxel_count(), 30u * 30u * 50u);
  for (double x : v.values()) ASSERT_EQ(x, 1.0);
  for (float w : v.weights()) ASSERT_EQ(w, 0.0f);
  EXPECT_TRUE(v.VoxelCenter(0, 0, 0).isApprox(Vec3(-0.29, -0.29, 1.51), 1e-12));
}

TEST(TsdfVolumeTest, Limits) {
  EXPECT_THROW(TsdfVolume(Vec3::Zero(), 0.1, 0.1, {4, 4, 4}), Error);
  try {
    TsdfVolume(Vec3::Zero(), 0.1, 0.3, {100, 100, 100}, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMemoryCapExceeded);
  }
}

TEST(IntegrateTest, FrontalPlane) {
  TsdfVolume v = PlaneVolume();
  Integrate(v, MakeFrame("a", 64, 64, 16.0, 2.0f));
  const double trunc = v.truncation();
  for (int k = 0; k < v.dims()[2]; ++k) {
    const double z = v.VoxelCenter(0, 0, k).z();
    for (int j = 0; j < v.dims()[1]; ++j) {
      for (int i = 0; i < v.dims()[0]; ++i) {
        const double value = v.value(i, j, k);
        if (z < 2.0 - trunc) {
          ASSERT_EQ(value, 1.0);
          ASSERT_EQ(v.weight(i, j, k), 1.0f);
        } else if (z > 2.0 + trunc) {
          ASSERT_EQ(v.weight(i, j, k), 0.0f);
          ASSERT_EQ(value, 1.0);
        } else {
          ASSERT_NEAR(value * trunc, 2.0 - z, 1e-5);
        }
      }
    }
  }
}

TEST(IntegrateTest, InvalidDepthLeavesVolumeUnchanged) {
  TsdfVolume v = PlaneVolume();
  const TsdfVolume before = v;
  Integrate(v, MakeFrame("a", 64, 64, 16.0, 0.0f));
  EXPECT_TRUE(std::equal(v.values().begin(), v.values().end(), before.values().begin()));
  EXPECT_TRUE(std::equal(v.weights().begin(), v.weights().end(), before.weights().begin()));
}

TEST(IntegrateTest, SameFrameTwiceAveragesToSameValues) {
  TsdfVolume once = PlaneVolume(), twice = PlaneVolume();
  const Frame f = MakeFrame("a", 64, 64, 16.0, 2.0f);
  Integrate(once, f);
  Integrate(twice, f, 1);
  Integrate(twice, f, 4);
  for (std::size_t n = 0; n < once.voxel_count(); ++n) {
    ASSERT_NEAR(once.values()[n], twice.values()[n], 1e-12);
    ASSERT_EQ(2.0f * once.weights()[n], twice.weights()[n]);
  }
}

TEST(VolumeForSceneTest, EnclosesSamplesPlusMargin) {
  Pose pose;
  pose.translation = Vec3(0.5, 0, 0);
  Frame f = MakeFrame("a", 20, 10, 10.0, 2.0f, pose);
  for (int u = 0; u < 20; ++u) f.depth->at(u, 3) = 3.0f;
  std::vector<Vec3> pts;
  for (int v = 0; v < 10; ++v) {
    for (int u = 0; u < 20; ++u) {
      pts.push_back(pose.Apply(Unproject(u, v, f.depth->at(u, v), f.intrinsics)));
    }
  }
  const Box3 samples = AabbOf(pts);
  TsdfParams params;
  params.voxel_size = 0.05;
  params.truncation = 0.15;
  params.margin = 0.1;
  params.bounds_stride = 1;
  const std::vector<Frame> frames = {f};
  const TsdfVolume v = VolumeForScene(frames, params);
  const Box3 expected = Box3::FromCorners(samples.min_corner - Vec3::Constant(0.1),
                                          samples.max_corner + Vec3::Constant(0.1));
  EXPECT_TRUE(v.Bounds().Encloses(expected));
  EXPECT_TRUE(v.origin().isApprox(expected.min_corner, 1e-12));
  for (int a = 0; a < 3; ++a) {
    EXPECT_LT(v.Bounds().max_corner[a], expected.max_corner[a] + params.voxel_size + 1e-9);
  }
}

TEST(VolumeForSceneTest, HugeVoxelGivesAtLeastOneCell) {
  TsdfParams params;
  params.voxel_size = 100.0;
  params.truncation = 300.0;
  params.margin = 0.0;
  const std::vector<Frame> frames = {MakeFrame("a", 4, 4, 4.0, 1.0f)};
  const TsdfVolume v = VolumeForScene(frames, params);
  EXPECT_EQ(v.dims(), (std::array<int, 3>{1, 1, 1}));
}

TEST(VolumeForSceneTest, NoValidDepth) {
  const std::vector<Frame> frames = {MakeFrame("a", 4, 4, 4.0, 0.0f)};
  try {
    VolumeForScene(frames, TsdfParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoValidDepth);
  }
}

TsdfVolume SphereVolume(double voxel) {
  const int n = static_cast<int>(std::ceil(1.4 / voxel));
  TsdfVolume v(Vec3::Constant(-0.7), voxel, 3 * voxel, {n, n, n});
  FillFromSdf(v, [](const Vec3& p) { return p.norm() - 0.5; });
  return v;
}

TEST(ExtractMeshTest, SphereWithinVoxelDiagonalAndClosed) {
  const double voxel = 0.05;
  const TsdfVolume v = SphereVolume(voxel);
  const TriangleMesh mesh = ExtractMesh(v);
  ASSERT_GT(mesh.triangles.size(), 100u);
  EXPECT_NO_THROW(mesh.Validate());
  const double diag = std::sqrt(3.0) * voxel;
  for (const Vec3& p : mesh.vertices) {
    ASSERT_LE(std::abs(p.norm() - 0.5), diag);
    ASSERT_TRUE(v.Bounds().Contains(p));
  }
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const std::uint32_t a = t[e], b = t[(e + 1) % 3];
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& [edge, count] : edges) ASSERT_EQ(count, 2);
  const long euler = long(mesh.vertices.size()) - long(edges.size()) +
                     long(mesh.triangles.size());
  EXPECT_EQ(euler, 2);
}

TEST(ExtractMeshTest, SingleNegativeVoxelIsClosedSphereTopology) {
  TsdfVolume v(Vec3::Zero(), 0.1, 0.3, {5, 5, 5});
  const Vec3 center = v.VoxelCenter(2, 2, 2);
  FillFromSdf(v, [&](const Vec3& p) { return (p - center).norm() < 1e-9 ? -0.1 : 0.3; });
  const TriangleMesh mesh = ExtractMesh(v);
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const std::uint32_t a = t[e], b = t[(e + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  EXPECT_EQ(long(mesh.vertices.size()) - long(edges.size()) + long(mesh.triangles.size()), 2);
  EXPECT_EQ(mesh.vertices.size(), 6u);
  EXPECT_EQ(mesh.triangles.size(), 8u);
}

TEST(ExtractMeshTest, AllPositiveIsEmpty) {
  TsdfVolume v(Vec3::Zero(), 0.1, 0.3, {4, 4, 4});
  FillFromSdf(v, [](const Vec3&) { return 1.0; });
  try {
    ExtractMesh(v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptySurface);
  }
  EXPECT_THROW(ExtractPoints(v), Error);
}

TEST(ExtractPointsTest, PlanePointsAreCoplanar) {
  TsdfVolume v = PlaneVolume();
  Integrate(v, MakeFrame("a", 64, 64, 16.0, 2.0f));
  const PointSet ps = ExtractPoints(v);
  ASSERT_FALSE(ps.empty());
  for (const Vec3& p : ps.points) ASSERT_LE(std::abs(p.z() - 2.0), v.voxel_size() / 2 + 1e-6);
}

TEST(ExtractPointsTest, SpherePointsWithinDiagonal) {
  const TsdfVolume v = SphereVolume(0.04);
  const PointSet ps = ExtractPoints(v);
  for (const Vec3& p : ps.points) ASSERT_LE(std::abs(p.norm() - 0.5), std::sqrt(3.0) * 0.04);
  EXPECT_EQ(ps.size(), ExtractMesh(v).vertices.size());
}

}  // namespace
}  // namespace mvground
