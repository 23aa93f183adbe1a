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

#include "mvground/config.hpp"
#include "mvground/error.hpp"
#include "test_util.hpp"

namespace mvground {
namespace {

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidArgument;
}

TEST(ConfigTest, DefaultsFollowProtocol) {
  const PipelineConfig c;
  EXPECT_EQ(c.grounding.k_preselect, 6);
  EXPECT_EQ(c.grounding.m_views, 3);
  EXPECT_TRUE(c.grounding.oracle_view_selection);
  EXPECT_EQ(c.grounding.params.min_iou, 0.05);
  EXPECT_EQ(c.mode, SceneMode::kFull);
  EXPECT_NO_THROW(c.Validate());
  const PipelineConfig parsed = ParseConfig(R"({"schema_version": 1})");
  EXPECT_EQ(ConfigToJson(parsed), ConfigToJson(c));
}

TEST(ConfigTest, Presets) {
  EXPECT_EQ(PresetNames(), (std::vector<std::string>{"stage1", "stage2", "stage3", "stage4"}));
  EXPECT_EQ(Preset("stage1").grounding.strategy, GroundingStrategy::kLargestProposal);
  const PipelineConfig s2 = Preset("stage2");
  EXPECT_EQ(s2.grounding.k_preselect, 1);
  EXPECT_EQ(s2.grounding.m_views, 1);
  EXPECT_FALSE(s2.grounding.oracle_view_selection);
  const PipelineConfig s3 = Preset("stage3");
  EXPECT_EQ(s3.grounding.k_preselect, 6);
  EXPECT_EQ(s3.grounding.m_views, 1);
  EXPECT_TRUE(s3.grounding.oracle_view_selection);
  const PipelineConfig s4 = Preset("stage4");
  EXPECT_EQ(s4.grounding.k_preselect, 6);
  EXPECT_EQ(s4.grounding.m_views, 3);
  EXPECT_EQ(s4.grounding.strategy, GroundingStrategy::kVote);
  for (const std::string& name : PresetNames()) EXPECT_NO_THROW(Preset(name).Validate());
  EXPECT_EQ(KindOf([] { Preset("stage5"); }), ErrorKind::kConfigInvalid);
}

TEST(ConfigTest, ParseOverridesPreset) {
  const PipelineConfig c = ParseConfig(R"({
    "schema_version": 1, "preset": "stage3", "m_views": 2, "mode": "posed_only",
    "tsdf": {"voxel_size": 0.05, "truncation": 0.15},
    "consensus": {"min_views": 1}, "proposals": "external", "trim": [0.01, 0.03],
    "oracle": "fixtures:/tmp/x", "seed": 9})");
  EXPECT_EQ(c.preset, "stage3");
  EXPECT_EQ(c.grounding.k_preselect, 6);
  EXPECT_EQ(c.grounding.m_views, 2);
  EXPECT_EQ(c.mode, SceneMode::kPosedOnly);
  EXPECT_EQ(c.tsdf.voxel_size, 0.05);
  EXPECT_EQ(c.tsdf.margin, 0.2);
  EXPECT_EQ(c.consensus.min_views, 1);
  EXPECT_EQ(c.proposals, ProposalMode::kExternal);
  EXPECT_EQ(c.grounding.params.trim.hi, 0.03);
  EXPECT_EQ(c.oracle, "fixtures:/tmp/x");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(ConfigToJson(ParseConfig(ConfigToJson(c))), ConfigToJson(c));
}

TEST(ConfigTest, Rejections) {
  const char* bad[] = {
      R"({})",
      R"({"schema_version": 2})",
      R"({"schema_version": 1, "k": 6})",
      R"({"schema_version": 1, "k_preselect": 2, "m_views": 3})",
      R"({"schema_version": 1, "m_views": 0})",
      R"({"schema_version": 1, "min_iou": 1.5})",
      R"({"schema_version": 1, "tsdf": {"voxel_size": 0.1, "truncation": 0.1}})",
      R"({"schema_version": 1, "tsdf": {"depth": 1}})",
      R"({"schema_version": 1, "strategy": "random"})",
      R"({"schema_version": 1, "mode": "partial"})",
      R"({"schema_version": 1, "oracle": "http://x"})",
      R"({"schema_version": 1, "trim": [0.6, 0.5]})",
      R"({"schema_version": 1, "k_preselect": "six"})",
      R"({"schema_version": 1,)",
  };
  for (const char* text : bad) {
    EXPECT_EQ(KindOf([&] { ParseConfig(text); }), ErrorKind::kConfigInvalid) << text;
  }
}

TEST(ConfigTest, LoadFromFile) {
  testing::TempDir tmp;
  EXPECT_EQ(KindOf([&] { LoadConfig(tmp.path() / "missing.json"); }),
            ErrorKind::kConfigInvalid);
}

}  // namespace
}  // namespace mvground
