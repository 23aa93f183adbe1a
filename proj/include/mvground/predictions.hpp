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

#ifndef MVGROUND_PREDICTIONS_HPP_
#define MVGROUND_PREDICTIONS_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvground/grounding.hpp"

namespace mvground {

struct Prediction {
  std::string query_id;
  Box3 box;
  int winning_proposal_id = 0;
  std::optional<std::size_t> winning_index;
  std::vector<Vote> votes;
};

Prediction MakePrediction(const Query& query, const GroundingResult& result);

// JSON array, one record per query, in the given order.
std::string PredictionsToJson(std::span<const Prediction> predictions);
void SavePredictions(const std::filesystem::path& file,
                     std::span<const Prediction> predictions);
std::vector<Prediction> LoadPredictions(const std::filesystem::path& file);

}  // namespace mvground

#endif  // MVGROUND_PREDICTIONS_HPP_
