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

#include "mvground/predictions.hpp"

#include <set>

#include "json_util.hpp"
#include "mvground/scene_io.hpp"

namespace mvground {

using detail::json;

Prediction MakePrediction(const Query& query, const GroundingResult& result) {
  Prediction p;
  p.query_id = query.id;
  p.box = result.box;
  p.winning_proposal_id = result.winning_proposal_id;
  p.winning_index = result.winning_index;
  p.votes = result.tally.votes;
  return p;
}

std::string PredictionsToJson(std::span<const Prediction> predictions) {
  json out = json::array();
  for (const Prediction& p : predictions) {
    json votes = json::array();
    for (const Vote& v : p.votes) {
      votes.push_back({{"frame_id", v.frame_id},
                       {"proposal_id", v.proposal_id},
                       {"iou", v.iou},
                       {"relevance", v.relevance}});
    }
    json rec = {{"query_id", p.query_id},
                {"box", detail::BoxToJson(p.box)},
                {"winning_proposal_id", p.winning_proposal_id},
                {"votes", std::move(votes)}};
    if (p.winning_index) rec["winning_index"] = *p.winning_index;
    out.push_back(std::move(rec));
  }
  return out.dump(2) + "\n";
}

void SavePredictions(const std::filesystem::path& file,
                     std::span<const Prediction> predictions) {
  WriteFile(file, PredictionsToJson(predictions));
}

std::vector<Prediction> LoadPredictions(const std::filesystem::path& file) {
  const std::string name = file.string();
  const json root = detail::ParseJsonFile(file);
  if (!root.is_array()) detail::SchemaError(name, "predictions must be an array");
  std::vector<Prediction> out;
  std::set<std::string> seen;
  for (const json& rec : root) {
    if (!rec.is_object()) detail::SchemaError(name, "prediction must be an object");
    detail::CheckKeys(rec, {"query_id", "box", "winning_proposal_id", "winning_index", "votes"},
                      name);
    Prediction p;
    p.query_id = detail::Get<std::string>(rec, "query_id", name);
    if (!seen.insert(p.query_id).second) {
      throw InvariantViolation("Prediction", "duplicate query_id '" + p.query_id + "'");
    }
    p.box = detail::BoxFromJson(rec.at("box"), name);
    p.winning_proposal_id = detail::Get<int>(rec, "winning_proposal_id", name);
    if (rec.contains("winning_index")) {
      p.winning_index = detail::Get<std::size_t>(rec, "winning_index", name);
    }
    if (rec.contains("votes")) {
      for (const json& v : rec.at("votes")) {
        detail::CheckKeys(v, {"frame_id", "proposal_id", "iou", "relevance"}, name);
        p.votes.push_back(Vote{detail::Get<std::string>(v, "frame_id", name),
                               detail::Get<int>(v, "proposal_id", name),
                               detail::Get<double>(v, "iou", name),
                               detail::Get<double>(v, "relevance", name)});
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace mvground
