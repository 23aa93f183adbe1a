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

#include <Eigen/Geometry>

#include "mvground/error.hpp"
#include "mvground/scene.hpp"
#include "test_util.hpp"

namespace mvground {
namespace {

using testing::Cube;

TEST(ErrorTest, MessageCarriesKindAndStage) {
  const Error e(ErrorKind::kMissingScore, "frame 'a'");
  EXPECT_STREQ(e.what(), "MissingScore: frame 'a'");
  const Error tagged = e.WithStage("segment").WithStage("ground");
  EXPECT_EQ(tagged.stage(), "ground/segment");
  EXPECT_STREQ(tagged.what(), "[ground/segment] MissingScore: frame 'a'");
  EXPECT_EQ(tagged.kind(), ErrorKind::kMissingScore);
}

TEST(ErrorTest, Helpers) {
  EXPECT_EQ(MissingAsset("frame_001", "depth").detail(), "frame 'frame_001' has no depth");
  EXPECT_EQ(MalformedFile("p.txt", 12, "bad").detail(), "p.txt at byte 12: bad");
  EXPECT_EQ(InvariantViolation("Pose", "orthonormal").kind(),
            ErrorKind::kInvariantViolation);
}

TEST(Box3Test, ArrayRoundTripAndMeasures) {
  const Box3 b = Box3::FromArray({0, 1, 2, 2, 4, 6});
  EXPECT_EQ(b.ToArray(), (std::vector<double>{0, 1, 2, 2, 4, 6}));
  EXPECT_DOUBLE_EQ(b.Volume(), 24.0);
  EXPECT_EQ(b.Center(), Vec3(1, 2.5, 4));
  EXPECT_TRUE(b.Contains(Vec3(2, 4, 6)));
  EXPECT_FALSE(b.Contains(Vec3(2.1, 4, 6)));
  EXPECT_TRUE(b.Encloses(Box3::FromArray({0.5, 1, 2, 1, 2, 3})));
}

TEST(Box3Test, RejectsInvertedOrNonFinite) {
  EXPECT_THROW(Box3::FromArray({1, 0, 0, 0, 1, 1}), Error);
  EXPECT_THROW(Box3::FromArray({0, 0, 0, NAN, 1, 1}), Error);
  EXPECT_THROW(Box3::FromArray({0, 0, 0, 1}), Error);
}

TEST(PoseTest, FromMatrixAcceptsRigid) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).matrix();
  m.topRightCorner<3, 1>() = Vec3(1, -2, 0.5);
  const Pose p = Pose::FromMatrix4(m);
  EXPECT_TRUE(p.Matrix4().isApprox(m, 1e-12));
  const Vec3 x(0.3, 0.2, -0.1);
  EXPECT_TRUE(p.Inverse().Apply(p.Apply(x)).isApprox(x, 1e-12));
  EXPECT_TRUE(p.Compose(p.Inverse()).Matrix4().isApprox(Eigen::Matrix4d::Identity(), 1e-12));
}

TEST(PoseTest, ScaledRotationIsNotOrthonormal) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = 2.0;  // det 2
  try {
    Pose::FromMatrix4(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvariantViolation);
    EXPECT_EQ(e.detail(), "Pose violates 'orthonormal'");
  }
}

TEST(PoseTest, ReflectionRejected) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(2, 2) = -1.0;
  EXPECT_THROW(Pose::FromMatrix4(m), Error);
  m(2, 2) = 1.0;
  m(3, 0) = 0.1;
  EXPECT_THROW(Pose::FromMatrix4(m), Error);
}

TEST(FrameTest, EmbeddingMustBeUnit) {
  Frame f = testing::MakeFrame("a", 2, 2, 1.0, 1.0f);
  f.embedding = Eigen::VectorXf::Unit(3, 0);
  EXPECT_NO_THROW(f.Validate());
  *f.embedding *= 1.1f;
  EXPECT_THROW(f.Validate(), Error);
}

TEST(SceneTest, DuplicateFrameIdsRejected) {
  Scene s;
  s.frames = {testing::MakeFrame("a", 2, 2, 1.0, 1.0f), testing::MakeFrame("a", 2, 2, 1.0, 1.0f)};
  EXPECT_THROW(s.Validate(), Error);
  s.frames[1].id = "b";
  EXPECT_NO_THROW(s.Validate());
  EXPECT_EQ(s.FrameIndex("b"), 1u);
  EXPECT_EQ(s.FindFrame("c"), nullptr);
}

TEST(QueryTest, GroundTruthIndexAmongCandidates) {
  Query q;
  q.id = "q";
  q.gt_box = Cube(2, 0, 0);
  q.candidate_boxes = std::vector<Box3>{Cube(0, 0, 0), Cube(2, 0, 0)};
  EXPECT_EQ(q.GroundTruthIndex(), 1u);
  EXPECT_NO_THROW(q.Validate());
  q.gt_box = Cube(5, 0, 0);
  EXPECT_FALSE(q.GroundTruthIndex());
  EXPECT_THROW(q.Validate(), Error);
}

}  // namespace
}  // namespace mvground
