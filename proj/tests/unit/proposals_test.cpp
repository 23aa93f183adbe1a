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

#include <algorithm>
#include <random>

#include "mvground/error.hpp"
#include "mvground/proposals.hpp"
#include "mvground/scene_io.hpp"
#include "mvground/synthetic.hpp"
#include "test_util.hpp"

namespace mvground {
namespace {

using testing::Cube;
using testing::TempDir;

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidArgument;
}

TEST(LoadProposalsTest, Boxes) {
  TempDir tmp;
  const std::vector<Box3> boxes = {Cube(0, 0, 0), Cube(3, 0, 0, 0.5)};
  SaveProposals(tmp.path() / "p.json", ProposalsFromBoxes(boxes));
  const auto ps = LoadProposals(tmp.path() / "p.json");
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].id, 0);
  EXPECT_EQ(ps[1].id, 1);
  EXPECT_EQ(ps[1].box, boxes[1]);
  EXPECT_EQ(ps[0].source, ProposalSource::kExternal);
}

TEST(LoadProposalsTest, PointIndices) {
  TempDir tmp;
  WriteFile(tmp.path() / "p.json",
            R"({"mode": "point_indices", "proposals": [{"id": 4, "point_indices": [0, 2]}]})");
  const std::vector<Vec3> cloud = {Vec3(0, 0, 0), Vec3(5, 5, 5), Vec3(1, 1, 1)};
  const auto ps = LoadProposals(tmp.path() / "p.json", &cloud);
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].id, 4);
  EXPECT_EQ(ps[0].box, Cube(0, 0, 0));
  ASSERT_TRUE(ps[0].points);
  EXPECT_EQ(ps[0].points->size(), 2u);
  const std::vector<Vec3> small = {Vec3(0, 0, 0)};
  EXPECT_EQ(KindOf([&] { LoadProposals(tmp.path() / "p.json", &small); }),
            ErrorKind::kIndexOutOfRange);
  EXPECT_EQ(KindOf([&] { LoadProposals(tmp.path() / "p.json"); }), ErrorKind::kMissingAsset);
}

TEST(LoadProposalsTest, SchemaErrors) {
  TempDir tmp;
  const auto file = tmp.path() / "p.json";
  WriteFile(file, R"({"mode": "boxes", "proposals": [{"id": 0, "box": [0,0,0,1,1,1]},
                                                      {"id": 0, "box": [0,0,0,1,1,1]}]})");
  EXPECT_EQ(KindOf([&] { LoadProposals(file); }), ErrorKind::kInvariantViolation);
  WriteFile(file, R"({"mode": "meshes", "proposals": []})");
  EXPECT_EQ(KindOf([&] { LoadProposals(file); }), ErrorKind::kMalformedFile);
  WriteFile(file, R"({"mode": "boxes", "proposals": [{"id": 0, "box": [1,1,1,0,0,0]}]})");
  EXPECT_EQ(KindOf([&] { LoadProposals(file); }), ErrorKind::kInvariantViolation);
}

SynthScene OneCube() {
  SynthParams p;
  p.seed = 21;
  p.min_objects = p.max_objects = 1;
  p.num_frames = 2;
  p.min_visible_frames = 2;
  p.preselect = 2;
  return GenerateSyntheticScene(p);
}

TEST(ConsensusTest, TwoViewsOfOneCube) {
  const SynthScene synth = OneCube();
  ASSERT_EQ(synth.masks.size(), 2u);
  ConsensusParams params;
  const auto ps = ConsensusProposals(synth.scene, synth.masks, params);
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].source, ProposalSource::kConsensus);
  const Box3& truth = synth.objects[0].box;
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(ps[0].box.min_corner[a], truth.min_corner[a], 2 * params.cell);
    EXPECT_NEAR(ps[0].box.max_corner[a], truth.max_corner[a], 2 * params.cell);
  }
}

TEST(ConsensusTest, DisjointMasksSingleView) {
  Scene s;
  s.id = "s";
  s.frames = {testing::MakeFrame("f", 40, 20, 10.0, 1.0f)};
  BinaryGrid a(40, 20), b(40, 20);
  for (int v = 5; v < 15; ++v) {
    for (int u = 0; u < 10; ++u) a.set(u, v);
    for (int u = 30; u < 40; ++u) b.set(u, v);
  }
  std::vector<Mask2D> masks = {RleEncode(a), RleEncode(b)};
  masks[0].frame_id = masks[1].frame_id = "f";
  masks[0].instance = "a";
  masks[1].instance = "b";
  ConsensusParams params;
  params.min_views = 1;
  EXPECT_EQ(ConsensusProposals(s, masks, params).size(), 2u);
  params.min_views = 2;
  EXPECT_TRUE(ConsensusProposals(s, masks, params).empty());
  EXPECT_TRUE(ConsensusProposals(s, {}, params).empty());
}

void ExpectSameProposals(const std::vector<Proposal>& a, const std::vector<Proposal>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].box, b[i].box);
  }
}

TEST(ConsensusTest, InvariantToMaskOrder) {
  SynthParams p;
  p.seed = 4;
  const SynthScene synth = GenerateSyntheticScene(p);
  ConsensusParams params;
  params.jobs = 1;
  const auto base = ConsensusProposals(synth.scene, synth.masks, params);
  EXPECT_EQ(base.size(), synth.objects.size());
  std::mt19937 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Mask2D> shuffled = synth.masks;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    params.jobs = 1 + trial;
    ExpectSameProposals(base, ConsensusProposals(synth.scene, shuffled, params));
  }
}

TEST(ConsensusTest, ProposalsContainTheirPoints) {
  SynthParams p;
  p.seed = 8;
  const SynthScene synth = GenerateSyntheticScene(p);
  for (const Proposal& prop : ConsensusProposals(synth.scene, synth.masks)) {
    ASSERT_TRUE(prop.points);
    for (const Vec3& q : prop.points->points) ASSERT_TRUE(prop.box.Contains(q));
  }
}

TEST(ConsensusTest, ComponentCountMonotoneInOverlap) {
  SynthParams p;
  p.seed = 12;
  const SynthScene synth = GenerateSyntheticScene(p);
  ConsensusParams params;
  params.min_views = 1;
  std::size_t previous = 0;
  for (double overlap : {0.05, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    params.overlap = overlap;
    const std::size_t n = ConsensusProposals(synth.scene, synth.masks, params).size();
    EXPECT_GE(n, previous) << "overlap " << overlap;
    previous = n;
  }
}

TEST(ConsensusTest, MaskForUnknownFrame) {
  const SynthScene synth = OneCube();
  std::vector<Mask2D> masks = synth.masks;
  masks[0].frame_id = "nope";
  EXPECT_EQ(KindOf([&] { ConsensusProposals(synth.scene, masks); }),
            ErrorKind::kUnknownFrameId);
}

}  // namespace
}  // namespace mvground
