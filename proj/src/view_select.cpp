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

#include "mvground/view_select.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "mvground/error.hpp"

namespace mvground {

std::vector<RankedView> CosineTopK(const Eigen::VectorXf& query_embedding,
                                   const Scene& scene, int k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
  std::vector<RankedView> all;
  all.reserve(scene.frames.size());
  for (const Frame& frame : scene.frames) {
    if (!frame.embedding) {
      throw Error(ErrorKind::kMissingEmbedding, "frame '" + frame.id + "'");
    }
    if (frame.embedding->size() != query_embedding.size()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "query embedding vs frame '" + frame.id + "'");
    }
    RankedView view;
    view.frame_id = frame.id;
    view.sim_score = static_cast<double>(frame.embedding->dot(query_embedding));
    all.push_back(std::move(view));
  }
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), all.size());
  // stable_sort keeps manifest order among equal similarities.
  std::stable_sort(all.begin(), all.end(), [](const RankedView& a, const RankedView& b) {
    return a.sim_score > b.sim_score;
  });
  all.resize(keep);
  return all;
}

std::vector<RankedView> OracleSelectViews(const std::vector<RankedView>& candidates,
                                          const Query& query, const Scene& scene,
                                          Oracle& oracle, int m) {
  if (candidates.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no candidate views to select from");
  }
  if (m < 1) throw Error(ErrorKind::kInvalidArgument, "m must be >= 1");
  OracleRequest request;
  request.id = SelectViewsRequestId(query.id);
  request.kind = OracleKind::kSelectViews;
  request.query_text = query.text;
  std::unordered_map<std::string, const RankedView*> by_id;
  for (const RankedView& c : candidates) {
    request.frame_ids.push_back(c.frame_id);
    const Frame* frame = scene.FindFrame(c.frame_id);
    request.image_paths.push_back(frame && frame->image_path ? *frame->image_path
                                                             : std::string());
    by_id[c.frame_id] = &c;
  }
  const OracleResponse response = oracle.Call(request);

  std::vector<RankedView> selected;
  const std::size_t keep =
      std::min<std::size_t>(static_cast<std::size_t>(m), response.frames.size());
  for (std::size_t r = 0; r < keep; ++r) {
    const ScoredFrame& choice = response.frames[r];
    RankedView view = *by_id.at(choice.frame_id);
    view.oracle_rank = static_cast<int>(r) + 1;
    view.oracle_score = choice.score.value_or(
        static_cast<double>(m - static_cast<int>(r)) / static_cast<double>(m));
    selected.push_back(std::move(view));
  }
  return selected;
}

double CombinedRelevance(const RankedView& view, double sim_weight) {
  if (!view.oracle_score) {
    throw Error(ErrorKind::kMissingScore, "view '" + view.frame_id + "'");
  }
  const double sim = std::clamp((view.sim_score + 1.0) / 2.0, 0.0, 1.0);
  return sim_weight * sim + (1.0 - sim_weight) * *view.oracle_score;
}

double ViewRelevance(const RankedView& view, double sim_weight) {
  if (view.oracle_score) return CombinedRelevance(view, sim_weight);
  return std::clamp((view.sim_score + 1.0) / 2.0, 0.0, 1.0);
}

double RequestRelevance(const Frame& frame, const Query& query, Oracle& oracle) {
  OracleRequest request;
  request.id = RelevanceRequestId(query.id, frame.id);
  request.kind = OracleKind::kRelevance;
  request.query_text = query.text;
  request.frame_ids = {frame.id};
  request.image_paths = {frame.image_path.value_or(std::string())};
  return *oracle.Call(request).score;
}

}  // namespace mvground
