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

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvground/config.hpp"
#include "mvground/error.hpp"
#include "mvground/eval.hpp"
#include "mvground/pipeline.hpp"
#include "mvground/scene_io.hpp"
#include "mvground/synthetic.hpp"

namespace fs = std::filesystem;
using namespace mvground;

namespace {

struct ConfigFlags {
  std::string config_file;
  std::string preset;
  std::string mode;
  std::string oracle;
  std::optional<int> k;
  std::optional<int> m;

  void Register(CLI::App* app, bool grounding) {
    app->add_option("--config", config_file, "Pipeline config file (JSON)");
    app->add_option("--preset", preset, "Preset name: stage1..stage4");
    app->add_option("--mode", mode, "Scene mode: full, posed_only, images_only");
    if (grounding) {
      app->add_option("--oracle", oracle, "fixtures:<dir> or exec:<command>");
      app->add_option("--k", k, "Frames kept by embedding preselection");
      app->add_option("--m", m, "Views kept by the oracle");
    }
  }

  PipelineConfig Resolve() const {
    if (!config_file.empty() && !preset.empty()) {
      throw Error(ErrorKind::kConfigInvalid, "--config and --preset are exclusive");
    }
    PipelineConfig c;
    if (!config_file.empty()) {
      c = LoadConfig(config_file);
    } else if (!preset.empty()) {
      c = Preset(preset);
    }
    if (!mode.empty()) c.mode = ParseSceneMode(mode);
    if (!oracle.empty()) c.oracle = oracle;
    if (k) c.grounding.k_preselect = *k;
    if (m) c.grounding.m_views = *m;
    try {
      c.Validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::kConfigInvalid, e.detail());
    }
    return c;
  }
};

std::unique_ptr<Oracle> OracleFor(const PipelineConfig& c) {
  if (!c.oracle) return std::make_unique<UnavailableOracle>();
  return MakeOracle(*c.oracle);
}

Scene LoadWithEmbeddings(const fs::path& dir, SceneMode mode,
                         std::span<const Query> queries) {
  Scene scene = LoadScene(dir, mode);
  const std::vector<std::string> ids = QueryIds(queries);
  LoadEmbeddings(dir / kEmbeddingsName, scene, ids);
  return scene;
}

class FixtureServer : public FixtureOracle {
 public:
  using FixtureOracle::FixtureOracle;
  OracleResponse Lookup(const OracleRequest& request) { return Exchange(request); }
};

// Answers oracle requests on stdin from recorded fixtures, one JSON line each.
int ServeFixtures(const fs::path& dir) {
  FixtureServer server(dir);
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    OracleRequest request = ParseRequest(line);
    OracleResponse response;
    try {
      response = server.Lookup(request);
    } catch (const Error& e) {
      response.id = request.id;
      response.kind = request.kind;
      response.error = e.what();
    }
    std::cout << ResponseToJson(response) << "\n" << std::flush;
  }
  return 0;
}

std::vector<double> ParseThresholds(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string token = text.substr(start, end - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kConfigInvalid, "bad threshold '" + token + "'");
    }
    start = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view 3D visual grounding pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");

  std::string scene_dir, queries_file, proposals_file, out_path, preds_file;
  std::string thresholds = "0.25,0.5";
  ConfigFlags flags;

  auto* reconstruct = app.add_subcommand("reconstruct", "Fuse depth into a TSDF and mesh it");
  std::optional<double> voxel, trunc, margin;
  reconstruct->add_option("--scene", scene_dir, "Scene directory")->required();
  reconstruct->add_option("--out", out_path, "Output directory")->required();
  reconstruct->add_option("--voxel-size", voxel, "Voxel edge in meters");
  reconstruct->add_option("--truncation", trunc, "Truncation distance in meters");
  reconstruct->add_option("--margin", margin, "Bounds margin in meters");
  flags.Register(reconstruct, false);

  auto* select = app.add_subcommand("select-views", "Rank and select views per query");
  select->add_option("--scene", scene_dir, "Scene directory")->required();
  select->add_option("--queries", queries_file, "Queries file")->required();
  select->add_option("--out", out_path, "Output file")->required();
  flags.Register(select, true);

  auto* propose = app.add_subcommand("propose", "Consensus proposals from scene masks");
  propose->add_option("--scene", scene_dir, "Scene directory")->required();
  propose->add_option("--out", out_path, "Output proposals file")->required();
  flags.Register(propose, false);

  auto* ground = app.add_subcommand("ground", "Ground queries against proposals");
  ground->add_option("--scene", scene_dir, "Scene directory")->required();
  ground->add_option("--queries", queries_file, "Queries file")->required();
  ground->add_option("--proposals", proposals_file, "Proposals file")->required();
  ground->add_option("--out", out_path, "Output predictions file")->required();
  flags.Register(ground, true);

  auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
  eval->add_option("--preds", preds_file, "Predictions file")->required();
  eval->add_option("--queries", queries_file, "Queries file")->required();
  eval->add_option("--thresholds", thresholds, "Comma-separated IoU thresholds");
  eval->add_option("--out", out_path, "Report file (JSON)");

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage and evaluate");
  pipeline->add_option("--scene", scene_dir, "Scene directory")->required();
  pipeline->add_option("--queries", queries_file, "Queries file (default: scene queries.json)");
  pipeline->add_option("--out", out_path, "Output directory")->required();
  flags.Register(pipeline, true);

  auto* synth = app.add_subcommand("synth", "Write a procedural test scene");
  SynthParams synth_params;
  bool perturb = false;
  synth->add_option("--out", out_path, "Output directory")->required();
  synth->add_option("--seed", synth_params.seed, "Random seed");
  synth->add_option("--frames", synth_params.num_frames, "Number of frames");
  synth->add_option("--min-objects", synth_params.min_objects, "Fewest objects");
  synth->add_option("--max-objects", synth_params.max_objects, "Most objects");
  synth->add_flag("--perturb", perturb, "Dilate masks 10% and add 5% depth noise");

  auto* serve = app.add_subcommand("serve-fixtures",
                                   "Answer oracle requests on stdin from fixtures");
  std::string fixtures_dir;
  serve->add_option("--fixtures", fixtures_dir, "Fixture directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*reconstruct) {
      PipelineConfig c = flags.Resolve();
      if (voxel) c.tsdf.voxel_size = *voxel;
      if (trunc) c.tsdf.truncation = *trunc;
      if (margin) c.tsdf.margin = *margin;
      c.tsdf.jobs = jobs;
      c.Validate();
      const Scene scene = LoadScene(scene_dir, c.mode);
      const Reconstruction rec = Reconstruct(scene, c.tsdf, out_path);
      std::printf("%zu vertices, %zu triangles, %zu points\n", rec.mesh.vertices.size(),
                  rec.mesh.triangles.size(), rec.points.size());
    } else if (*select) {
      const PipelineConfig c = flags.Resolve();
      const std::vector<Query> all = LoadQueries(queries_file);
      const Scene probe = LoadScene(scene_dir, c.mode);
      const std::vector<Query> queries = QueriesForScene(all, probe);
      const Scene scene = LoadWithEmbeddings(scene_dir, c.mode, queries);
      auto oracle = OracleFor(c);
      WriteFile(out_path, SelectViewsToJson(scene, queries, *oracle, c.grounding));
    } else if (*propose) {
      PipelineConfig c = flags.Resolve();
      c.consensus.jobs = jobs;
      const Scene scene = LoadScene(scene_dir, c.mode);
      const std::vector<Proposal> proposals =
          ConsensusProposals(scene, LoadSceneMasks(scene_dir, scene), c.consensus);
      SaveProposals(out_path, proposals);
      std::printf("%zu proposals\n", proposals.size());
    } else if (*ground) {
      const PipelineConfig c = flags.Resolve();
      const std::vector<Query> all = LoadQueries(queries_file);
      const Scene probe = LoadScene(scene_dir, c.mode);
      const std::vector<Query> queries = QueriesForScene(all, probe);
      const Scene scene = LoadWithEmbeddings(scene_dir, c.mode, queries);
      const std::vector<Proposal> proposals = LoadProposals(
          proposals_file, scene.point_cloud ? &*scene.point_cloud : nullptr);
      auto oracle = OracleFor(c);
      SavePredictions(out_path,
                      GroundQueries(scene, queries, proposals, *oracle, c.grounding, jobs));
    } else if (*eval) {
      const std::vector<double> ts = ParseThresholds(thresholds);
      const EvalReport report =
          SplitMetrics(LoadPredictions(preds_file), LoadQueries(queries_file), ts);
      if (!out_path.empty()) WriteFile(out_path, ReportToJson(report));
      std::cout << ReportToTable(report);
    } else if (*pipeline) {
      const PipelineConfig c = flags.Resolve();
      if (queries_file.empty()) queries_file = (fs::path(scene_dir) / kQueriesName).string();
      auto oracle = OracleFor(c);
      const PipelineResult result =
          RunPipeline(scene_dir, queries_file, out_path, c, *oracle, jobs);
      if (result.report) std::cout << ReportToTable(*result.report);
    } else if (*synth) {
      SynthScene scene = GenerateSyntheticScene(synth_params);
      if (perturb) PerturbSyntheticScene(scene, 1.1, 0.05, synth_params.seed);
      WriteSyntheticScene(scene, out_path);
    } else if (*serve) {
      return ServeFixtures(fixtures_dir);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
