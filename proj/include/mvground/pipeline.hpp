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

#ifndef MVGROUND_PIPELINE_HPP_
#define MVGROUND_PIPELINE_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvground/config.hpp"
#include "mvground/eval.hpp"
#include "mvground/mesh.hpp"
#include "mvground/oracle.hpp"
#include "mvground/predictions.hpp"
#include "mvground/proposals.hpp"

namespace mvground {

struct Reconstruction {
  TriangleMesh mesh;
  std::vector<Vec3> points;
};

// Fuses every posed frame with depth and extracts the surface. Writes
// mesh.ply and points.ply into `out_dir` when it is non-empty.
Reconstruction Reconstruct(const Scene& scene, const TsdfParams& params,
                           const std::filesystem::path& out_dir = {});

// Queries whose scene_id matches the scene. Throws ConfigInvalid when none do.
std::vector<Query> QueriesForScene(std::span<const Query> queries, const Scene& scene);

std::vector<std::string> QueryIds(std::span<const Query> queries);

// Per query: the embedding preselection narrowed by the oracle.
std::string SelectViewsToJson(const Scene& scene, std::span<const Query> queries,
                              Oracle& oracle, const GroundingConfig& config);

// Grounds queries in parallel; output order follows `queries`.
std::vector<Prediction> GroundQueries(const Scene& scene, std::span<const Query> queries,
                                      std::span<const Proposal> proposals, Oracle& oracle,
                                      const GroundingConfig& config, int jobs = 0);

// Oracle that fails every call; stands in when no oracle is configured.
class UnavailableOracle : public Oracle {
 protected:
  OracleResponse Exchange(const OracleRequest& request) override;
};

struct PipelineResult {
  std::vector<Prediction> predictions;
  std::optional<EvalReport> report;
};

// Load, optional reconstruction, proposals, grounding, and evaluation.
// Writes config.json, proposals.json, predictions.json, and, when the queries
// carry ground truth, report.json and report.txt into `out_dir`.
PipelineResult RunPipeline(const std::filesystem::path& scene_dir,
                           const std::filesystem::path& queries_file,
                           const std::filesystem::path& out_dir,
                           const PipelineConfig& config, Oracle& oracle, int jobs = 0);

}  // namespace mvground

#endif  // MVGROUND_PIPELINE_HPP_
