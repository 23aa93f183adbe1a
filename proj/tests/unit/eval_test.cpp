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
#include "mvground/eval.hpp"
#include "mvground/predictions.hpp"
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

TEST(AccAtTest, PerfectPredictions) {
  const std::map<std::string, Box3> gts = {{"a", Cube(0, 0, 0)}, {"b", Cube(4, 0, 0)}};
  const auto acc = AccAt(gts, gts);
  EXPECT_EQ(acc, (std::map<double, double>{{0.25, 1.0}, {0.5, 1.0}}));
}

TEST(AccAtTest, OffsetCubeThird) {
  const auto acc = AccAt({{"a", Cube(0.5, 0, 0)}}, {{"a", Cube(0, 0, 0)}});
  EXPECT_EQ(acc, (std::map<double, double>{{0.25, 1.0}, {0.5, 0.0}}));
}

TEST(AccAtTest, ThresholdIsStrict) {
  const Box3 gt = Cube(0, 0, 0);
  const Box3 quarter = Box3::FromCorners(Vec3(0, 0, 0), Vec3(1, 1, 0.25));
  ASSERT_EQ(BoxIou(quarter, gt), 0.25);
  const auto acc = AccAt({{"a", quarter}}, {{"a", gt}});
  EXPECT_EQ(acc.at(0.25), 0.0);
  const Box3 half = Box3::FromCorners(Vec3(0, 0, 0), Vec3(1, 1, 0.5));
  ASSERT_EQ(BoxIou(half, gt), 0.5);
  EXPECT_EQ(AccAt({{"a", half}}, {{"a", gt}}).at(0.5), 0.0);
  EXPECT_EQ(AccAt({{"a", half}}, {{"a", gt}}).at(0.25), 1.0);
}

TEST(AccAtTest, MissingPredictionIsAMiss) {
  const auto acc = AccAt({{"a", Cube(0, 0, 0)}}, {{"a", Cube(0, 0, 0)}, {"b", Cube(3, 3, 3)}});
  EXPECT_EQ(acc, (std::map<double, double>{{0.25, 0.5}, {0.5, 0.5}}));
}

TEST(AccAtTest, Errors) {
  EXPECT_EQ(KindOf([] { AccAt({}, {}); }), ErrorKind::kEmptyGroundTruth);
  const std::vector<double> bad = {1.5};
  EXPECT_EQ(KindOf([&] { AccAt({}, {{"a", Cube(0, 0, 0)}}, bad); }),
            ErrorKind::kInvalidArgument);
}

std::map<std::string, Box3> RandomBoxes(std::mt19937& rng, int n, const std::string& prefix) {
  std::uniform_real_distribution<double> u(0, 1), s(0.2, 1.0);
  std::map<std::string, Box3> out;
  for (int i = 0; i < n; ++i) {
    const Vec3 lo(u(rng), u(rng), u(rng));
    out[prefix + std::to_string(i)] =
        Box3::FromCorners(lo, lo + Vec3(s(rng), s(rng), s(rng)));
  }
  return out;
}

TEST(AccAtTest, MonotoneInThreshold) {
  std::mt19937 rng(8);
  const std::vector<double> ts = {0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
  for (int trial = 0; trial < 100; ++trial) {
    const auto acc = AccAt(RandomBoxes(rng, 30, "q"), RandomBoxes(rng, 30, "q"), ts);
    double previous = 1.0;
    for (const auto& [t, a] : acc) {
      ASSERT_LE(a, previous);
      previous = a;
    }
    ASSERT_EQ(acc.at(1.0), 0.0);
  }
}

Query LabeledQuery(const std::string& id, const Box3& gt, std::optional<Uniqueness> u) {
  Query q;
  q.id = id;
  q.scene_id = "s";
  q.gt_box = gt;
  q.uniqueness = u;
  return q;
}

Prediction Pred(const std::string& id, const Box3& box) {
  Prediction p;
  p.query_id = id;
  p.box = box;
  return p;
}

TEST(SplitMetricsTest, UniqueAndMultiple) {
  const Box3 gt = Cube(0, 0, 0), miss = Cube(5, 5, 5);
  const std::vector<Query> qs = {
      LabeledQuery("u1", gt, Uniqueness::kUnique), LabeledQuery("u2", gt, Uniqueness::kUnique),
      LabeledQuery("m1", gt, Uniqueness::kMultiple),
      LabeledQuery("m2", gt, Uniqueness::kMultiple)};
  const std::vector<Prediction> ps = {Pred("u1", gt), Pred("u2", gt), Pred("m1", gt),
                                      Pred("m2", miss)};
  const EvalReport r = SplitMetrics(ps, qs);
  ASSERT_TRUE(r.unique && r.multiple);
  EXPECT_EQ(r.unique->accuracy->at(0.5), 1.0);
  EXPECT_EQ(r.multiple->accuracy->at(0.5), 0.5);
  EXPECT_EQ(r.overall.accuracy->at(0.5), 0.75);
  EXPECT_EQ(r.overall.count, 4u);
  EXPECT_FALSE(r.top1_accuracy);
}

TEST(SplitMetricsTest, UnlabeledGivesOverallOnly) {
  const std::vector<Query> qs = {LabeledQuery("a", Cube(0, 0, 0), std::nullopt)};
  const EvalReport r = SplitMetrics(std::vector{Pred("a", Cube(0, 0, 0))}, qs);
  EXPECT_FALSE(r.unique);
  EXPECT_FALSE(r.multiple);
  EXPECT_EQ(r.overall.accuracy->at(0.25), 1.0);
  EXPECT_EQ(ReportToJson(r).find("unique"), std::string::npos);
}

TEST(SplitMetricsTest, EmptyBucketIsAbsent) {
  const std::vector<Query> qs = {LabeledQuery("a", Cube(0, 0, 0), Uniqueness::kUnique)};
  const EvalReport r = SplitMetrics(std::vector{Pred("a", Cube(0, 0, 0))}, qs);
  ASSERT_TRUE(r.multiple);
  EXPECT_EQ(r.multiple->count, 0u);
  EXPECT_FALSE(r.multiple->accuracy);
  EXPECT_NE(ReportToJson(r).find("\"accuracy\": null"), std::string::npos);
  EXPECT_NE(ReportToTable(r).find("multiple        0         -         -"), std::string::npos)
      << ReportToTable(r);
}

TEST(SplitMetricsTest, CountWeightedIdentityAndPermutationInvariance) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto gts = RandomBoxes(rng, 25, "q");
    const auto preds = RandomBoxes(rng, 25, "q");
    std::vector<Query> qs;
    std::vector<Prediction> ps;
    for (const auto& [id, box] : gts) {
      qs.push_back(LabeledQuery(id, box, rng() % 3 ? Uniqueness::kMultiple : Uniqueness::kUnique));
      ps.push_back(Pred(id, preds.at(id)));
    }
    const EvalReport r = SplitMetrics(ps, qs);
    ASSERT_EQ(r.overall.count, r.unique->count + r.multiple->count);
    for (double t : kDefaultThresholds) {
      double weighted = 0;
      if (r.unique->accuracy) weighted += r.unique->count * r.unique->accuracy->at(t);
      if (r.multiple->accuracy) weighted += r.multiple->count * r.multiple->accuracy->at(t);
      ASSERT_NEAR(r.overall.accuracy->at(t), weighted / r.overall.count, 1e-12);
    }
    std::shuffle(qs.begin(), qs.end(), rng);
    std::shuffle(ps.begin(), ps.end(), rng);
    ASSERT_EQ(ReportToJson(SplitMetrics(ps, qs)), ReportToJson(r));
  }
}

TEST(SplitMetricsTest, Errors) {
  const std::vector<Query> qs = {LabeledQuery("a", Cube(0, 0, 0), std::nullopt)};
  try {
    SplitMetrics(std::vector{Pred("zz", Cube(0, 0, 0)), Pred("yy", Cube(0, 0, 0))}, qs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfigInvalid);
    EXPECT_NE(e.detail().find("'zz'"), std::string::npos);
  }
  Query no_gt;
  no_gt.id = "a";
  EXPECT_EQ(KindOf([&] { SplitMetrics({}, std::vector{no_gt}); }),
            ErrorKind::kEmptyGroundTruth);
}

TEST(Top1Test, Counting) {
  std::map<std::string, std::size_t> sel, gt, n;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "q" + std::to_string(i);
    gt[id] = i % 4;
    n[id] = 4;
    sel[id] = i < 7 ? gt[id] : (gt[id] + 1) % 4;
  }
  EXPECT_DOUBLE_EQ(Top1Accuracy(sel, gt, n), 0.7);
  EXPECT_DOUBLE_EQ(Top1Accuracy(gt, gt, n), 1.0);
  sel["q0"] = 4;
  EXPECT_EQ(KindOf([&] { Top1Accuracy(sel, gt, n); }), ErrorKind::kIndexOutOfRange);
  EXPECT_EQ(KindOf([&] { Top1Accuracy({}, {}, {}); }), ErrorKind::kEmptyGroundTruth);
}

TEST(Top1Test, FromSplitMetrics) {
  Query q = LabeledQuery("a", Cube(3, 0, 0), std::nullopt);
  q.candidate_boxes = std::vector<Box3>{Cube(0, 0, 0), Cube(3, 0, 0)};
  Prediction p = Pred("a", Cube(3, 0, 0));
  p.winning_index = 1;
  EXPECT_EQ(SplitMetrics(std::vector{p}, std::vector{q}).top1_accuracy, 1.0);
  p.winning_index = 0;
  EXPECT_EQ(SplitMetrics(std::vector{p}, std::vector{q}).top1_accuracy, 0.0);
  p.winning_index = 2;
  EXPECT_EQ(KindOf([&] { SplitMetrics(std::vector{p}, std::vector{q}); }),
            ErrorKind::kIndexOutOfRange);
}

TEST(ReportTest, JsonAndTable) {
  const std::vector<Query> qs = {LabeledQuery("a", Cube(0, 0, 0), Uniqueness::kUnique),
                                 LabeledQuery("b", Cube(0, 0, 0), Uniqueness::kMultiple)};
  const std::vector<Prediction> ps = {Pred("a", Cube(0, 0, 0)), Pred("b", Cube(0.5, 0, 0))};
  const EvalReport r = SplitMetrics(ps, qs);
  EXPECT_EQ(ReportToTable(r),
            "split       count  Acc@0.25   Acc@0.5\n"
            "unique          1    100.00    100.00\n"
            "multiple        1    100.00      0.00\n"
            "overall         2    100.00     50.00\n");
  EXPECT_NE(ReportToJson(r).find("\"0.25\": 1.0"), std::string::npos) << ReportToJson(r);
}

TEST(PredictionsTest, RoundTrip) {
  testing::TempDir tmp;
  Prediction p = Pred("a", Cube(0.1, 0.2, 0.3, 0.7));
  p.winning_proposal_id = 3;
  p.winning_index = 3;
  p.votes = {{"f1", 3, 0.8, 0.75}};
  const std::vector<Prediction> ps = {p, Pred("b", Cube(0, 0, 0))};
  SavePredictions(tmp.path() / "p.json", ps);
  const auto back = LoadPredictions(tmp.path() / "p.json");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].box, p.box);
  EXPECT_EQ(back[0].winning_index, 3u);
  ASSERT_EQ(back[0].votes.size(), 1u);
  EXPECT_EQ(back[0].votes[0].relevance, 0.75);
  EXPECT_FALSE(back[1].winning_index);
  EXPECT_EQ(PredictionsToJson(back), PredictionsToJson(ps));
}

}  // namespace
}  // namespace mvground
