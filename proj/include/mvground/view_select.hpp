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

#ifndef MVGROUND_VIEW_SELECT_HPP_
#define MVGROUND_VIEW_SELECT_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mvground/oracle.hpp"
#include "mvground/scene.hpp"

namespace mvground {

inline constexpr int kDefaultPreselect = 6;
inline constexpr int kDefaultOracleViews = 3;

struct RankedView {
  std::string frame_id;
  double sim_score = 0.0;
  std::optional<int> oracle_rank;
  std::optional<double> oracle_score;
};

// The min(k, #frames) frames most similar to `query_embedding`, by dot
// product, descending; equal similarities keep manifest order.
// Throws MissingEmbedding naming the first frame without a vector.
std::vector<RankedView> CosineTopK(const Eigen::VectorXf& query_embedding,
                                   const Scene& scene, int k = kDefaultPreselect);

// Asks the oracle to choose among `candidates` and keeps its first `m`
// choices in the oracle's order. Scores the oracle omits fall back to
// 1, (m-1)/m, ... by rank.
std::vector<RankedView> OracleSelectViews(const std::vector<RankedView>& candidates,
                                          const Query& query, const Scene& scene,
                                          Oracle& oracle, int m = kDefaultOracleViews);

// weight * (sim + 1) / 2 + (1 - weight) * oracle_score.
// Throws MissingScore when the view has no oracle score.
double CombinedRelevance(const RankedView& view, double sim_weight = 0.5);

// CombinedRelevance when an oracle score exists, otherwise the normalized
// similarity alone.
double ViewRelevance(const RankedView& view, double sim_weight = 0.5);

// Asks the oracle for a scalar relevance of one frame to the query.
double RequestRelevance(const Frame& frame, const Query& query, Oracle& oracle);

}  // namespace mvground

#endif  // MVGROUND_VIEW_SELECT_HPP_
