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

#ifndef MVGROUND_GROUNDING_HPP_
#define MVGROUND_GROUNDING_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvground/geometry.hpp"
#include "mvground/oracle.hpp"
#include "mvground/proposals.hpp"
#include "mvground/view_select.hpp"

namespace mvground {

struct Vote {
  std::string frame_id;
  int proposal_id = 0;
  double iou = 0.0;
  double relevance = 0.0;
};

// What one selected view contributed: its relevance and the box of its
// lifted, trimmed target mask (absent when nothing could be lifted).
struct ViewObservation {
  std::string frame_id;
  double relevance = 0.0;
  std::optional<Box3> lifted_box;
};

struct VoteTally {
  std::map<int, int> counts;
  std::vector<Vote> votes;
  std::vector<ViewObservation> observations;
  std::optional<int> winner;
};

struct GroundingParams {
  double min_iou = 0.05;
  TrimPercentiles trim;
  int lift_stride = 1;
  double relevance_weight = 0.5;
};

// Requests the target mask for one frame. Empty masks are legal.
// Throws DimMismatch when the mask does not match the frame.
Mask2D SegmentTarget(const Frame& frame, const Query& query, Oracle& oracle);

// Lifts, trims, and boxes one mask per view, then votes. `masks[i]` belongs
// to `views[i]`. Throws NoProposals.
VoteTally CastVotes(std::span<const Mask2D> masks, std::span<const RankedView> views,
                    const Scene& scene, std::span<const Proposal> proposals,
                    const GroundingParams& params = {});

// Voting on already-boxed observations: each observation votes once for the
// proposal of highest IoU (ties -> lower id) when that IoU reaches min_iou.
VoteTally VoteOnObservations(std::span<const ViewObservation> observations,
                             std::span<const Proposal> proposals, double min_iou);

// Most-voted proposal; count ties go to the proposal voted from the most
// relevant frame, then to the lowest id. Without votes, falls back to the
// proposal best overlapping the most relevant view's lifted box. Sets
// tally.winner. Throws FallbackFailed.
Proposal SelectFinal(VoteTally& tally, std::span<const Proposal> proposals);

enum class GroundingStrategy { kVote, kLargestProposal };

struct GroundingConfig {
  int k_preselect = kDefaultPreselect;
  int m_views = kDefaultOracleViews;
  // When false, the first m views of the embedding ranking are used directly.
  bool oracle_view_selection = true;
  GroundingStrategy strategy = GroundingStrategy::kVote;
  GroundingParams params;
};

struct GroundingResult {
  Box3 box;
  int winning_proposal_id = 0;
  // Set when the query carries candidate boxes.
  std::optional<std::size_t> winning_index;
  VoteTally tally;
  std::vector<RankedView> views;
};

// Full per-query pipeline: embedding preselection, oracle view selection,
// per-view segmentation, voting, and final selection. With candidate boxes
// on the query, the candidates replace `proposals`. Errors carry the stage.
GroundingResult Ground(const Scene& scene, const Query& query,
                       std::span<const Proposal> proposals, Oracle& oracle,
                       const GroundingConfig& config = {});

}  // namespace mvground

#endif  // MVGROUND_GROUNDING_HPP_
