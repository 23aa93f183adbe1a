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

#include <algorithm>
#include <random>

#include "mvground/error.hpp"
#include "mvground/grounding.hpp"
#include "mvground/synthetic.hpp"
#include "test_util.hpp"

namespace mvground {
namespace {

using testing::Cube;

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidArgument;
}

Box3 B(double x0, double y0, double z0, double x1, double y1, double z1) {
  return Box3::FromCorners(Vec3(x0, y0, z0), Vec3(x1, y1, z1));
}

Proposal P(int id, const Box3& box) { return Proposal{id, box, std::nullopt}; }

ViewObservation Obs(const std::string& fid, double relevance, std::optional<Box3> box) {
  return ViewObservation{fid, relevance, box};
}

TEST(VoteTest, HighestIouGetsTheVote) {
  const std::vector<Proposal> props = {P(0, B(0, 0, 0, 1, 1, 0.6)), P(1, B(0, 0, 0, 1, 1, 0.2))};
  const std::vector<ViewObservation> obs = {Obs("f", 0.5, Cube(0, 0, 0))};
  ASSERT_DOUBLE_EQ(BoxIou(*obs[0].lifted_box, props[0].box), 0.6);
  ASSERT_DOUBLE_EQ(BoxIou(*obs[0].lifted_box, props[1].box), 0.2);
  const VoteTally t = VoteOnObservations(obs, props, 0.05);
  EXPECT_EQ(t.counts, (std::map<int, int>{{0, 1}}));
  ASSERT_EQ(t.votes.size(), 1u);
  EXPECT_DOUBLE_EQ(t.votes[0].iou, 0.6);
}

TEST(VoteTest, UnanimousViews) {
  const std::vector<Proposal> props = {P(0, Cube(0, 0, 0)), P(1, Cube(5, 0, 0))};
  const std::vector<ViewObservation> obs = {Obs("a", 0.1, Cube(0.1, 0, 0)),
                                            Obs("b", 0.2, Cube(0, 0.1, 0)),
                                            Obs("c", 0.3, Cube(0, 0, 0.1))};
  VoteTally t = VoteOnObservations(obs, props, 0.05);
  EXPECT_EQ(t.counts, (std::map<int, int>{{0, 3}}));
  EXPECT_EQ(SelectFinal(t, props).id, 0);
  EXPECT_EQ(t.winner, 0);
}

TEST(VoteTest, BelowThresholdCastsNothing) {
  const std::vector<Proposal> props = {P(0, Cube(0, 0, 0)), P(1, Cube(5, 0, 0))};
  const std::vector<ViewObservation> obs = {Obs("a", 0.1, Cube(10, 10, 10)),
                                            Obs("b", 0.9, std::nullopt)};
  const VoteTally t = VoteOnObservations(obs, props, 0.05);
  EXPECT_TRUE(t.votes.empty());
  EXPECT_TRUE(t.counts.empty());
  EXPECT_EQ(t.observations.size(), 2u);
}

TEST(VoteTest, IouTieGoesToLowerId) {
  const std::vector<Proposal> props = {P(3, Cube(1, 0, 0)), P(1, Cube(-1, 0, 0))};
  const std::vector<ViewObservation> obs = {Obs("a", 0.1, B(-0.5, 0, 0, 1.5, 1, 1))};
  const VoteTally t = VoteOnObservations(obs, props, 0.05);
  ASSERT_EQ(t.votes.size(), 1u);
  EXPECT_EQ(t.votes[0].proposal_id, 1);
}

TEST(VoteTest, NoProposals) {
  EXPECT_EQ(KindOf([] { VoteOnObservations({}, {}, 0.05); }), ErrorKind::kNoProposals);
}

VoteTally Tally(std::vector<Vote> votes) {
  VoteTally t;
  for (const Vote& v : votes) ++t.counts[v.proposal_id];
  t.votes = std::move(votes);
  return t;
}

TEST(SelectFinalTest, StrictMajority) {
  const std::vector<Proposal> props = {P(0, Cube(0, 0, 0)), P(1, Cube(3, 0, 0))};
  VoteTally t = Tally({{"a", 1, 0.5, 0.9}, {"b", 0, 0.5, 0.1}, {"c", 0, 0.5, 0.1}});
  EXPECT_EQ(SelectFinal(t, props).id, 0);
}

TEST(SelectFinalTest, CountTieResolvedByRelevance) {
  const std::vector<Proposal> props = {P(0, Cube(0, 0, 0)), P(1, Cube(3, 0, 0))};
  VoteTally t = Tally({{"a", 0, 0.5, 0.9}, {"b", 1, 0.5, 0.6}});
  EXPECT_EQ(SelectFinal(t, props).id, 0);
  VoteTally u = Tally({{"a", 0, 0.5, 0.6}, {"b", 1, 0.5, 0.9}});
  EXPECT_EQ(SelectFinal(u, props).id, 1);
}

TEST(SelectFinalTest, ResidualTieLowestId) {
  const std::vector<Proposal> props = {P(2, Cube(0, 0, 0)), P(5, Cube(3, 0, 0))};
  VoteTally t = Tally({{"a", 5, 0.5, 0.7}, {"b", 2, 0.5, 0.7}});
  EXPECT_EQ(SelectFinal(t, props).id, 2);
}

TEST(SelectFinalTest, InvariantUnderVotePermutation) {
  std::mt19937 rng(3);
  std::vector<Proposal> props;
  for (int i = 0; i < 4; ++i) props.push_back(P(i, Cube(2.0 * i, 0, 0)));
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vote> votes;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int v = 0; v < n; ++v) {
      votes.push_back({"f" + std::to_string(v), static_cast<int>(rng() % 4), 0.5,
                       (rng() % 4) / 4.0});
    }
    VoteTally base = Tally(votes);
    const int expected = SelectFinal(base, props).id;
    std::shuffle(votes.begin(), votes.end(), rng);
    VoteTally shuffled = Tally(votes);
    ASSERT_EQ(SelectFinal(shuffled, props).id, expected);
  }
}

TEST(SelectFinalTest, ZeroVoteFallback) {
  const std::vector<Proposal> props = {P(0, Cube(0, 0, 0)), P(1, Cube(3, 0, 0))};
  VoteTally t;
  t.observations = {Obs("a", 0.2, Cube(0.2, 0, 0)), Obs("b", 0.8, Cube(2.95, 0, 0, 0.1)),
                    Obs("c", 0.95, std::nullopt)};
  EXPECT_EQ(SelectFinal(t, props).id, 1);
  EXPECT_EQ(t.winner, 1);

  VoteTally empty;
  empty.observations = {Obs("a", 0.2, std::nullopt), Obs("b", 0.8, std::nullopt)};
  EXPECT_EQ(KindOf([&] { SelectFinal(empty, props); }), ErrorKind::kFallbackFailed);
  const std::vector<Proposal> one = {P(7, Cube(0, 0, 0))};
  EXPECT_EQ(SelectFinal(empty, one).id, 7);
}

TEST(VoteTest, ArgmaxInvariantUnderCommonScaling) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0, 4), s(0.2, 2);
  auto random_box = [&] {
    const Vec3 lo(u(rng), u(rng), u(rng));
    return Box3::FromCorners(lo, lo + Vec3(s(rng), s(rng), s(rng)));
  };
  auto scaled = [](const Box3& b, double f) {
    return Box3::FromCorners(b.min_corner * f, b.max_corner * f);
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Proposal> props, big;
    for (int i = 0; i < 4; ++i) {
      props.push_back(P(i, random_box()));
      big.push_back(P(i, scaled(props.back().box, 3.7)));
    }
    const Box3 lifted = random_box();
    const auto a = VoteOnObservations(std::vector{Obs("f", 1, lifted)}, props, 0.0);
    const auto b = VoteOnObservations(std::vector{Obs("f", 1, scaled(lifted, 3.7))}, big, 0.0);
    ASSERT_EQ(a.votes.size(), b.votes.size());
    if (!a.votes.empty()) ASSERT_EQ(a.votes[0].proposal_id, b.votes[0].proposal_id);
  }
}

class GroundTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SynthParams p;
    p.seed = 31;
    p.min_objects = p.max_objects = 3;
    synth_ = GenerateSyntheticScene(p);
    for (const SynthObject& o : synth_.objects) boxes_.push_back(o.box);
    proposals_ = ProposalsFromBoxes(boxes_);
  }

  SynthScene synth_;
  std::vector<Box3> boxes_;
  std::vector<Proposal> proposals_;
};

TEST_F(GroundTest, SegmentTargetReplaysFixture) {
  FixtureOracle oracle(synth_.fixtures);
  const Query& q = synth_.queries[0];
  const Frame& f = synth_.scene.frames[0];
  const Mask2D m = SegmentTarget(f, q, oracle);
  EXPECT_EQ(m.frame_id, f.id);
  for (const OracleResponse& r : synth_.fixtures) {
    if (r.id == SegmentRequestId(q.id, f.id)) EXPECT_EQ(m.runs, CanonicalRuns(r.mask->runs));
  }
}

TEST_F(GroundTest, SegmentTargetDimMismatch) {
  const Query& q = synth_.queries[0];
  const Frame& f = synth_.scene.frames[0];
  std::unordered_map<std::string, Mask2D> masks;
  masks[SegmentRequestId(q.id, f.id)] = RleEncode(BinaryGrid(5, 5));
  EchoOracle oracle(masks);
  EXPECT_EQ(KindOf([&] { SegmentTarget(f, q, oracle); }), ErrorKind::kDimMismatch);
}

TEST_F(GroundTest, EmptyMaskCastsNoVote) {
  const Frame& f = synth_.scene.frames[0];
  const Mask2D empty = RleEncode(BinaryGrid(f.intrinsics.width, f.intrinsics.height));
  RankedView view;
  view.frame_id = f.id;
  view.sim_score = 1.0;
  const std::vector<Mask2D> masks = {empty};
  const std::vector<RankedView> views = {view};
  const VoteTally t = CastVotes(masks, views, synth_.scene, proposals_);
  EXPECT_TRUE(t.votes.empty());
  ASSERT_EQ(t.observations.size(), 1u);
  EXPECT_FALSE(t.observations[0].lifted_box);
}

TEST_F(GroundTest, FindsEachObject) {
  FixtureOracle oracle(synth_.fixtures);
  for (const Query& q : synth_.queries) {
    const Query detect = WithoutCandidates({q})[0];
    const GroundingResult r = Ground(synth_.scene, detect, proposals_, oracle);
    EXPECT_GE(BoxIou(r.box, *q.gt_box), 0.5);
    EXPECT_FALSE(r.winning_index);
    EXPECT_EQ(r.views.size(), 3u);
    EXPECT_LE(r.tally.votes.size(), 3u);
    EXPECT_EQ(r.tally.winner, r.winning_proposal_id);
  }
}

TEST_F(GroundTest, SelectionModeReturnsACandidate) {
  FixtureOracle oracle(synth_.fixtures);
  for (const Query& q : synth_.queries) {
    const GroundingResult r = Ground(synth_.scene, q, {}, oracle);
    ASSERT_TRUE(r.winning_index);
    EXPECT_EQ(r.box, (*q.candidate_boxes)[*r.winning_index]);
    EXPECT_EQ(r.winning_index, q.GroundTruthIndex());
  }
}

TEST_F(GroundTest, SingleProposalWithOneView) {
  std::unordered_map<std::string, Mask2D> masks;
  for (const OracleResponse& r : synth_.fixtures) {
    if (r.mask) masks[r.id] = *r.mask;
  }
  EchoOracle oracle(masks);
  GroundingConfig config;
  config.k_preselect = 1;
  config.m_views = 1;
  const std::vector<Proposal> one = {P(0, Cube(50, 50, 50))};
  for (const Query& q : WithoutCandidates(synth_.queries)) {
    EXPECT_EQ(Ground(synth_.scene, q, one, oracle, config).box, one[0].box);
  }
}

TEST_F(GroundTest, LargestProposalStrategy) {
  EchoOracle oracle;
  GroundingConfig config;
  config.strategy = GroundingStrategy::kLargestProposal;
  const std::vector<Proposal> props = {P(0, Cube(0, 0, 0)), P(1, Cube(3, 0, 0, 2)),
                                       P(2, Cube(9, 0, 0, 2))};
  const Query q = WithoutCandidates(synth_.queries)[0];
  EXPECT_EQ(Ground(synth_.scene, q, props, oracle, config).winning_proposal_id, 1);
}

TEST_F(GroundTest, ErrorsCarryStage) {
  FixtureOracle oracle(synth_.fixtures);
  Query q = WithoutCandidates(synth_.queries)[0];
  q.id = "unknown";
  try {
    Ground(synth_.scene, q, proposals_, oracle);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingEmbedding);
    EXPECT_EQ(e.stage(), "view_select");
  }
  EchoOracle no_masks;
  try {
    Ground(synth_.scene, WithoutCandidates(synth_.queries)[0], proposals_, no_masks);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOracleUnavailable);
    EXPECT_EQ(e.stage(), "segment");
  }
  EXPECT_EQ(KindOf([&] { Ground(synth_.scene, WithoutCandidates(synth_.queries)[0], {}, oracle); }),
            ErrorKind::kNoProposals);
  GroundingConfig bad;
  bad.k_preselect = 2;
  bad.m_views = 3;
  EXPECT_EQ(KindOf([&] { Ground(synth_.scene, synth_.queries[0], proposals_, oracle, bad); }),
            ErrorKind::kConfigInvalid);
}

TEST_F(GroundTest, DeterministicUnderFixedTranscript) {
  FixtureOracle oracle(synth_.fixtures);
  const Query q = WithoutCandidates(synth_.queries)[1];
  const GroundingResult a = Ground(synth_.scene, q, proposals_, oracle);
  const GroundingResult b = Ground(synth_.scene, q, proposals_, oracle);
  EXPECT_EQ(a.box, b.box);
  ASSERT_EQ(a.tally.votes.size(), b.tally.votes.size());
  for (std::size_t i = 0; i < a.tally.votes.size(); ++i) {
    EXPECT_EQ(a.tally.votes[i].frame_id, b.tally.votes[i].frame_id);
    EXPECT_EQ(a.tally.votes[i].iou, b.tally.votes[i].iou);
  }
}

}  // namespace
}  // namespace mvground
