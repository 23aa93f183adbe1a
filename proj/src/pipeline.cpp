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

#include "mvground/pipeline.hpp"

#include <exception>

#include "json_util.hpp"
#include "mvground/error.hpp"
#include "mvground/parallel.hpp"
#include "mvground/ply.hpp"
#include "mvground/scene_io.hpp"
#include "mvground/tsdf.hpp"

namespace mvground {

using detail::json;

namespace {

template <typename Fn>
auto InStage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw e.WithStage(stage);
  }
}

}  // namespace

Reconstruction Reconstruct(const Scene& scene, const TsdfParams& params,
                           const std::filesystem::path& out_dir) {
  std::vector<Frame> frames;
  for (const Frame& f : scene.frames) {
    if (f.pose && f.depth) frames.push_back(f);
  }
  TsdfVolume volume = VolumeForScene(frames, params);
  for (const Frame& f : frames) Integrate(volume, f, params.jobs);
  Reconstruction out;
  out.mesh = ExtractMesh(volume);
  out.points = ExtractPoints(volume).points;
  if (!out_dir.empty()) {
    WritePlyMesh(out_dir / "mesh.ply", out.mesh);
    WritePlyPoints(out_dir / "points.ply", out.points);
  }
  return out;
}

std::vector<Query> QueriesForScene(std::span<const Query> queries, const Scene& scene) {
  std::vector<Query> out;
  for (const Query& q : queries) {
    if (q.scene_id == scene.id) out.push_back(q);
  }
  if (out.empty()) {
    throw Error(ErrorKind::kConfigInvalid, "no query refers to scene '" + scene.id + "'");
  }
  return out;
}

std::vector<std::string> QueryIds(std::span<const Query> queries) {
  std::vector<std::string> ids;
  for (const Query& q : queries) ids.push_back(q.id);
  return ids;
}

std::string SelectViewsToJson(const Scene& scene, std::span<const Query> queries,
                              Oracle& oracle, const GroundingConfig& config) {
  json out = json::array();
  for (const Query& q : queries) {
    const Eigen::VectorXf* emb = scene.FindQueryEmbedding(q.id);
    if (!emb) throw Error(ErrorKind::kMissingEmbedding, "query '" + q.id + "'");
    std::vector<RankedView> views = CosineTopK(*emb, scene, config.k_preselect);
    if (config.oracle_view_selection) {
      views = OracleSelectViews(views, q, scene, oracle, config.m_views);
    } else {
      views.resize(std::min<std::size_t>(views.size(), config.m_views));
    }
    json list = json::array();
    for (const RankedView& v : views) {
      json rec = {{"frame_id", v.frame_id}, {"sim_score", v.sim_score}};
      if (v.oracle_rank) rec["oracle_rank"] = *v.oracle_rank;
      if (v.oracle_score) rec["oracle_score"] = *v.oracle_score;
      list.push_back(std::move(rec));
    }
    out.push_back({{"query_id", q.id}, {"views", std::move(list)}});
  }
  return out.dump(2) + "\n";
}

std::vector<Prediction> GroundQueries(const Scene& scene, std::span<const Query> queries,
                                      std::span<const Proposal> proposals, Oracle& oracle,
                                      const GroundingConfig& config, int jobs) {
  std::vector<std::optional<Prediction>> results(queries.size());
  std::vector<std::exception_ptr> errors(queries.size());
  ParallelFor(
      queries.size(),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          try {
            results[i] = MakePrediction(
                queries[i], Ground(scene, queries[i], proposals, oracle, config));
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      },
      jobs);
  // Report the first failing query in input order, independent of scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Prediction> out;
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

OracleResponse UnavailableOracle::Exchange(const OracleRequest& request) {
  throw Error(ErrorKind::kOracleUnavailable,
              "no oracle configured for request '" + request.id + "'");
}

PipelineResult RunPipeline(const std::filesystem::path& scene_dir,
                           const std::filesystem::path& queries_file,
                           const std::filesystem::path& out_dir,
                           const PipelineConfig& config, Oracle& oracle, int jobs) {
  config.Validate();
  WriteFile(out_dir / "config.json", ConfigToJson(config));

  Scene scene;
  std::vector<Query> all_queries, queries;
  InStage("load", [&] {
    scene = LoadScene(scene_dir, config.mode);
    all_queries = LoadQueries(queries_file);
    queries = QueriesForScene(all_queries, scene);
    const std::vector<std::string> ids = QueryIds(queries);
    LoadEmbeddings(scene_dir / kEmbeddingsName, scene, ids);
  });

  if (config.mode != SceneMode::kFull || config.reconstruct) {
    InStage("reconstruct", [&] {
      TsdfParams tsdf = config.tsdf;
      tsdf.jobs = jobs;
      Reconstruction rec = Reconstruct(scene, tsdf, out_dir);
      if (!scene.point_cloud) scene.point_cloud = std::move(rec.points);
    });
  }

  const std::vector<Proposal> proposals = InStage("propose", [&] {
    std::vector<Proposal> out;
    if (config.proposals == ProposalMode::kExternal) {
      out = LoadProposals(scene_dir / "proposals.json",
                          scene.point_cloud ? &*scene.point_cloud : nullptr);
    } else {
      ConsensusParams params = config.consensus;
      params.jobs = jobs;
      out = ConsensusProposals(scene, LoadSceneMasks(scene_dir, scene), params);
    }
    SaveProposals(out_dir / "proposals.json", out);
    return out;
  });

  PipelineResult result;
  result.predictions = InStage("ground", [&] {
    return GroundQueries(scene, queries, proposals, oracle, config.grounding, jobs);
  });
  SavePredictions(out_dir / "predictions.json", result.predictions);

  bool has_gt = false;
  for (const Query& q : queries) has_gt = has_gt || q.gt_box.has_value();
  if (has_gt) {
    result.report = InStage("eval", [&] { return SplitMetrics(result.predictions, queries); });
    WriteFile(out_dir / "report.json", ReportToJson(*result.report));
    WriteFile(out_dir / "report.txt", ReportToTable(*result.report));
  }
  return result;
}

}  // namespace mvground
