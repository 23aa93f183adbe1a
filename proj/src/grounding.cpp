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

#include "mvground/grounding.hpp"

#include <algorithm>

#include "mvground/error.hpp"

namespace mvground {

Mask2D SegmentTarget(const Frame& frame, const Query& query, Oracle& oracle) {
  OracleRequest request;
  request.id = SegmentRequestId(query.id, frame.id);
  request.kind = OracleKind::kSegment;
  request.query_text = query.text;
  request.frame_ids = {frame.id};
  request.image_paths = {frame.image_path.value_or(std::string())};
  OracleResponse response = oracle.Call(request);
  Mask2D mask = std::move(*response.mask);
  if (mask.width != frame.intrinsics.width || mask.height != frame.intrinsics.height) {
    throw Error(ErrorKind::kDimMismatch,
                "mask " + std::to_string(mask.width) + "x" +
                    std::to_string(mask.height) + " for frame '" + frame.id + "' of " +
                    std::to_string(frame.intrinsics.width) + "x" +
                    std::to_string(frame.intrinsics.height));
  }
  mask.frame_id = frame.id;
  mask.instance = query.id;
  mask.runs = CanonicalRuns(mask.runs);
  mask.source = MaskSource::kOracleSegmenter;
  return mask;
}

VoteTally VoteOnObservations(std::span<const ViewObservation> observations,
                             std::span<const Proposal> proposals, double min_iou) {
  if (proposals.empty()) throw Error(ErrorKind::kNoProposals, "nothing to vote for");
  VoteTally tally;
  tally.observations.assign(observations.begin(), observations.end());
  for (const ViewObservation& obs : observations) {
    if (!obs.lifted_box) continue;
    const Proposal* best = nullptr;
    double best_iou = -1.0;
    for (const Proposal& p : proposals) {
      const double iou = BoxIou(*obs.lifted_box, p.box);
      if (iou > best_iou || (iou == best_iou && p.id < best->id)) {
        best = &p;
        best_iou = iou;
      }
    }
    if (best_iou >= min_iou) {
      tally.votes.push_back(Vote{obs.frame_id, best->id, best_iou, obs.relevance});
      ++tally.counts[best->id];
    }
  }
  return tally;
}

VoteTally CastVotes(std::span<const Mask2D> masks, std::span<const RankedView> views,
                    const Scene& scene, std::span<const Proposal> proposals,
                    const GroundingParams& params) {
  if (proposals.empty()) throw Error(ErrorKind::kNoProposals, "nothing to vote for");
  if (masks.size() != views.size()) {
    throw Error(ErrorKind::kInvalidArgument, "one mask per view is required");
  }
  std::vector<ViewObservation> observations;
  for (std::size_t i = 0; i < views.size(); ++i) {
    const Frame* frame = scene.FindFrame(views[i].frame_id);
    if (!frame) throw Error(ErrorKind::kUnknownFrameId, views[i].frame_id);
    ViewObservation obs;
    obs.frame_id = frame->id;
    obs.relevance = ViewRelevance(views[i], params.relevance_weight);
    const PointSet lifted =
        TrimOutliers(LiftMask(masks[i], *frame, params.lift_stride), params.trim);
    if (!lifted.empty()) obs.lifted_box = AabbOf(lifted);
    observations.push_back(std::move(obs));
  }
  return VoteOnObservations(observations, proposals, params.min_iou);
}

Proposal SelectFinal(VoteTally& tally, std::span<const Proposal> proposals) {
  if (proposals.empty()) throw Error(ErrorKind::kNoProposals, "nothing to select");
  auto find = [&](int id) -> const Proposal& {
    for (const Proposal& p : proposals) {
      if (p.id == id) return p;
    }
    throw Error(ErrorKind::kInvariantViolation,
                "vote references unknown proposal " + std::to_string(id));
  };

  if (!tally.votes.empty()) {
    int best_count = 0;
    for (const auto& [id, count] : tally.counts) best_count = std::max(best_count, count);
    // Among max-count proposals, the highest relevance of any vote for it,
    // then lowest id. counts is ordered by id, so strict '>' keeps the lowest.
    std::optional<int> winner;
    double winner_relevance = -1.0;
    for (const auto& [id, count] : tally.counts) {
      if (count != best_count) continue;
      double relevance = -1.0;
      for (const Vote& v : tally.votes) {
        if (v.proposal_id == id) relevance = std::max(relevance, v.relevance);
      }
      if (!winner || relevance > winner_relevance) {
        winner = id;
        winner_relevance = relevance;
      }
    }
    tally.winner = *winner;
    return find(*winner);
  }

  // No votes: use the most relevant view that lifted anything.
  const ViewObservation* best_view = nullptr;
  for (const ViewObservation& obs : tally.observations) {
    if (!obs.lifted_box) continue;
    if (!best_view || obs.relevance > best_view->relevance) best_view = &obs;
  }
  if (best_view) {
    const Proposal* best = nullptr;
    double best_iou = -1.0;
    for (const Proposal& p : proposals) {
      const double iou = BoxIou(*best_view->lifted_box, p.box);
      if (iou > best_iou || (iou == best_iou && p.id < best->id)) {
        best = &p;
        best_iou = iou;
      }
    }
    tally.winner = best->id;
    return *best;
  }
  if (proposals.size() == 1) {
    tally.winner = proposals.front().id;
    return proposals.front();
  }
  throw Error(ErrorKind::kFallbackFailed,
              "no votes and no view produced a lifted mask");
}

namespace {

template <typename Fn>
auto InStage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw e.WithStage(stage);
  }
}

const Proposal& LargestProposal(std::span<const Proposal> proposals) {
  const Proposal* best = &proposals.front();
  for (const Proposal& p : proposals) {
    const double v = p.box.Volume();
    if (v > best->box.Volume() || (v == best->box.Volume() && p.id < best->id)) {
      best = &p;
    }
  }
  return *best;
}

}  // namespace

GroundingResult Ground(const Scene& scene, const Query& query,
                       std::span<const Proposal> proposals, Oracle& oracle,
                       const GroundingConfig& config) {
  if (config.k_preselect < config.m_views || config.m_views < 1) {
    throw Error(ErrorKind::kConfigInvalid, "need k_preselect >= m_views >= 1");
  }
  std::vector<Proposal> candidates;
  if (query.candidate_boxes) {
    candidates = ProposalsFromBoxes(*query.candidate_boxes);
    proposals = candidates;
  }
  if (proposals.empty()) {
    throw Error(ErrorKind::kNoProposals, "query '" + query.id + "'").WithStage("ground");
  }

  GroundingResult result;
  auto finish = [&](const Proposal& winner) {
    result.box = winner.box;
    result.winning_proposal_id = winner.id;
    if (query.candidate_boxes) {
      result.winning_index = static_cast<std::size_t>(winner.id);
    }
    return result;
  };

  if (config.strategy == GroundingStrategy::kLargestProposal) {
    const Proposal& winner = LargestProposal(proposals);
    result.tally.winner = winner.id;
    return finish(winner);
  }

  result.views = InStage("view_select", [&] {
    const Eigen::VectorXf* q_emb = scene.FindQueryEmbedding(query.id);
    if (!q_emb) {
      throw Error(ErrorKind::kMissingEmbedding, "query '" + query.id + "'");
    }
    std::vector<RankedView> ranked = CosineTopK(*q_emb, scene, config.k_preselect);
    if (config.oracle_view_selection) {
      return OracleSelectViews(ranked, query, scene, oracle, config.m_views);
    }
    ranked.resize(std::min<std::size_t>(ranked.size(),
                                        static_cast<std::size_t>(config.m_views)));
    return ranked;
  });

  const std::vector<Mask2D> masks = InStage("segment", [&] {
    std::vector<Mask2D> out;
    for (const RankedView& view : result.views) {
      out.push_back(SegmentTarget(*scene.FindFrame(view.frame_id), query, oracle));
    }
    return out;
  });

  result.tally = InStage("vote", [&] {
    return CastVotes(masks, result.views, scene, proposals, config.params);
  });
  const Proposal winner = InStage("select", [&] {
    return SelectFinal(result.tally, proposals);
  });
  return finish(winner);
}

}  // namespace mvground
