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

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mvground/error.hpp"
#include "mvground/pipeline.hpp"
#include "mvground/synthetic.hpp"
#include "test_util.hpp"

namespace mvground {
namespace {

namespace fs = std::filesystem;

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SynthParams params;
    params.seed = 12;
    synth_ = GenerateSyntheticScene(params);
    WriteSyntheticScene(synth_, scene_dir());
  }

  fs::path scene_dir() const { return tmp_.path() / "scene"; }

  PipelineResult Run(const PipelineConfig& config, const std::string& out,
                     const std::string& queries = "queries.json", int jobs = 0) {
    FixtureOracle oracle(scene_dir() / "fixtures");
    return RunPipeline(scene_dir(), scene_dir() / queries, tmp_.path() / out, config, oracle,
                       jobs);
  }

  testing::TempDir tmp_;
  SynthScene synth_;
};

TEST_F(PipelineTest, ConsensusProposalsGroundEveryQuery) {
  const PipelineResult r = Run(PipelineConfig{}, "out");
  ASSERT_TRUE(r.report);
  EXPECT_EQ(r.report->overall.count, synth_.queries.size());
  EXPECT_EQ(r.report->overall.accuracy->at(0.5), 1.0);
  for (const char* name :
       {"config.json", "proposals.json", "predictions.json", "report.json", "report.txt"}) {
    EXPECT_TRUE(fs::exists(tmp_.path() / "out" / name)) << name;
  }
  EXPECT_EQ(LoadPredictions(tmp_.path() / "out/predictions.json").size(),
            synth_.queries.size());
}

TEST_F(PipelineTest, SelectionModeTop1) {
  const PipelineResult r = Run(PipelineConfig{}, "out", "queries_selection.json");
  ASSERT_TRUE(r.report && r.report->top1_accuracy);
  EXPECT_EQ(*r.report->top1_accuracy, 1.0);
  EXPECT_EQ(r.report->top1_count, synth_.queries.size());
}

TEST_F(PipelineTest, DeterministicAcrossRunsAndJobs) {
  Run(PipelineConfig{}, "a", "queries.json", 1);
  Run(PipelineConfig{}, "b", "queries.json", 4);
  const std::string a = ReadText(tmp_.path() / "a/predictions.json");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, ReadText(tmp_.path() / "b/predictions.json"));
  EXPECT_EQ(ReadText(tmp_.path() / "a/proposals.json"),
            ReadText(tmp_.path() / "b/proposals.json"));
}

TEST_F(PipelineTest, PresetsRunEndToEnd) {
  for (const std::string& name : PresetNames()) {
    const PipelineResult r = Run(Preset(name), name);
    ASSERT_TRUE(r.report) << name;
    EXPECT_EQ(r.predictions.size(), synth_.queries.size()) << name;
  }
}

TEST_F(PipelineTest, ExternalProposals) {
  PipelineConfig config;
  config.proposals = ProposalMode::kExternal;
  const PipelineResult r = Run(config, "ext");
  EXPECT_EQ(r.report->overall.accuracy->at(0.5), 1.0);
}

TEST_F(PipelineTest, PosedOnlyReconstructs) {
  PipelineConfig config;
  config.mode = SceneMode::kPosedOnly;
  Run(config, "posed");
  EXPECT_TRUE(fs::exists(tmp_.path() / "posed/mesh.ply"));
  EXPECT_TRUE(fs::exists(tmp_.path() / "posed/points.ply"));
}

TEST_F(PipelineTest, OracleFailureCarriesStage) {
  UnavailableOracle oracle;
  try {
    RunPipeline(scene_dir(), scene_dir() / "queries.json", tmp_.path() / "x", PipelineConfig{},
                oracle);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOracleUnavailable);
    EXPECT_EQ(e.stage().rfind("ground/", 0), 0u) << e.what();
  }
}

TEST_F(PipelineTest, SelectViewsReturnsMViews) {
  const Scene& scene = synth_.scene;
  FixtureOracle oracle(scene_dir() / "fixtures");
  const GroundingConfig config;
  const auto json = SelectViewsToJson(scene, synth_.queries, oracle, config);
  const auto parsed = nlohmann::json::parse(json);
  ASSERT_EQ(parsed.size(), synth_.queries.size());
  for (const auto& entry : parsed) {
    EXPECT_EQ(entry.at("views").size(), 3u) << entry.dump();
  }
}

TEST(QueriesForSceneTest, FiltersBySceneId) {
  Scene scene;
  scene.id = "s1";
  Query a, b;
  a.id = "a";
  a.scene_id = "s1";
  b.id = "b";
  b.scene_id = "s2";
  const std::vector<Query> qs = {a, b};
  const auto kept = QueriesForScene(qs, scene);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].id, "a");
  scene.id = "s3";
  EXPECT_THROW(QueriesForScene(qs, scene), Error);
}

#ifdef MVGROUND_DATA_DIR
TEST(BundledDataTest, SyntheticRoomGroundsAllQueries) {
  const fs::path dir = fs::path(MVGROUND_DATA_DIR) / "synthetic_room";
  testing::TempDir tmp;
  FixtureOracle oracle(dir / "fixtures");
  const PipelineResult r =
      RunPipeline(dir, dir / "queries.json", tmp.path(), PipelineConfig{}, oracle);
  ASSERT_TRUE(r.report && r.report->unique && r.report->multiple);
  EXPECT_EQ(r.report->overall.accuracy->at(0.5), 1.0);
}
#endif

#ifdef MVGROUND_CLI_PATH
int RunCli(const std::string& args, std::string* output) {
  const std::string cmd = std::string(MVGROUND_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) *output += buf;
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(PipelineTest, CliEvalRejectsUnknownPrediction) {
  const fs::path preds = tmp_.path() / "preds.json";
  std::ofstream(preds) << R"([{"query_id": "nope", "box": [0,0,0,1,1,1], "winning_proposal_id": 0, "votes": []}])";
  std::string out;
  EXPECT_EQ(RunCli("eval --preds " + preds.string() + " --queries " +
                       (scene_dir() / "queries.json").string(),
                   &out),
            1);
  EXPECT_NE(out.find("ConfigInvalid: prediction for unknown query 'nope'"), std::string::npos)
      << out;
}

TEST_F(PipelineTest, CliPipelinePrintsTable) {
  std::string out;
  ASSERT_EQ(RunCli("pipeline --scene " + scene_dir().string() + " --out " +
                       (tmp_.path() / "cli").string() + " --oracle fixtures:" +
                       (scene_dir() / "fixtures").string(),
                   &out),
            0)
      << out;
  EXPECT_NE(out.find("overall"), std::string::npos) << out;
}
#endif

}  // namespace
}  // namespace mvground
