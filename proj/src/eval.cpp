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

#include "mvground/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json_util.hpp"
#include "mvground/error.hpp"
#include "mvground/geometry.hpp"

namespace mvground {

using detail::json;

namespace {

void CheckThresholds(std::span<const double> thresholds) {
  if (thresholds.empty()) throw Error(ErrorKind::kInvalidArgument, "no thresholds");
  for (double t : thresholds) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "threshold " + std::to_string(t) + " outside [0,1]");
    }
  }
}

std::string ThresholdKey(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

}  // namespace

std::map<double, double> AccAt(const std::map<std::string, Box3>& preds,
                               const std::map<std::string, Box3>& gts,
                               std::span<const double> thresholds) {
  CheckThresholds(thresholds);
  if (gts.empty()) throw Error(ErrorKind::kEmptyGroundTruth, "no ground-truth boxes");
  std::map<double, std::size_t> hits;
  for (double t : thresholds) hits[t] = 0;
  for (const auto& [id, gt] : gts) {
    auto it = preds.find(id);
    if (it == preds.end()) continue;
    const double iou = BoxIou(it->second, gt);
    for (auto& [t, n] : hits) {
      if (iou > t) ++n;
    }
  }
  std::map<double, double> out;
  for (const auto& [t, n] : hits) {
    out[t] = static_cast<double>(n) / static_cast<double>(gts.size());
  }
  return out;
}

double Top1Accuracy(const std::map<std::string, std::size_t>& selections,
                    const std::map<std::string, std::size_t>& gts,
                    const std::map<std::string, std::size_t>& num_candidates) {
  if (gts.empty()) throw Error(ErrorKind::kEmptyGroundTruth, "no ground-truth indices");
  auto bound = [&](const std::string& id) {
    auto it = num_candidates.find(id);
    if (it == num_candidates.end()) {
      throw Error(ErrorKind::kIndexOutOfRange, "query '" + id + "' has no candidates");
    }
    return it->second;
  };
  auto check = [&](const std::string& id, std::size_t index, const char* what) {
    const std::size_t n = bound(id);
    if (index >= n) {
      throw Error(ErrorKind::kIndexOutOfRange,
                  std::string(what) + " index " + std::to_string(index) +
                      " for query '" + id + "' with " + std::to_string(n) +
                      " candidates");
    }
  };
  std::size_t correct = 0;
  for (const auto& [id, gt] : gts) {
    check(id, gt, "ground-truth");
    auto it = selections.find(id);
    if (it == selections.end()) continue;
    check(id, it->second, "selected");
    if (it->second == gt) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gts.size());
}

EvalReport SplitMetrics(std::span<const Prediction> predictions,
                        std::span<const Query> queries,
                        std::span<const double> thresholds) {
  CheckThresholds(thresholds);
  std::map<std::string, const Query*> by_id;
  for (const Query& q : queries) by_id.emplace(q.id, &q);
  std::map<std::string, Box3> boxes;
  std::map<std::string, std::size_t> selections;
  for (const Prediction& p : predictions) {
    if (!by_id.count(p.query_id)) {
      throw Error(ErrorKind::kConfigInvalid,
                  "prediction for unknown query '" + p.query_id + "'");
    }
    boxes[p.query_id] = p.box;
    if (p.winning_index) selections[p.query_id] = *p.winning_index;
  }

  std::map<std::string, Box3> all, unique, multiple;
  std::map<std::string, std::size_t> gt_index, num_candidates;
  bool labeled = true;
  for (const Query& q : queries) {
    if (!q.gt_box) continue;
    all[q.id] = *q.gt_box;
    if (!q.uniqueness) {
      labeled = false;
    } else if (*q.uniqueness == Uniqueness::kUnique) {
      unique[q.id] = *q.gt_box;
    } else {
      multiple[q.id] = *q.gt_box;
    }
    if (q.candidate_boxes) {
      if (auto idx = q.GroundTruthIndex()) {
        gt_index[q.id] = *idx;
        num_candidates[q.id] = q.candidate_boxes->size();
      }
    }
  }
  if (all.empty()) throw Error(ErrorKind::kEmptyGroundTruth, "no query has gt_box");

  auto bucket = [&](const std::map<std::string, Box3>& gts) {
    BucketMetrics m;
    m.count = gts.size();
    if (!gts.empty()) m.accuracy = AccAt(boxes, gts, thresholds);
    return m;
  };

  EvalReport report;
  report.thresholds.assign(thresholds.begin(), thresholds.end());
  std::sort(report.thresholds.begin(), report.thresholds.end());
  report.thresholds.erase(std::unique(report.thresholds.begin(), report.thresholds.end()),
                          report.thresholds.end());
  report.overall = bucket(all);
  if (labeled) {
    report.unique = bucket(unique);
    report.multiple = bucket(multiple);
  }
  if (!gt_index.empty()) {
    report.top1_accuracy = Top1Accuracy(selections, gt_index, num_candidates);
    report.top1_count = gt_index.size();
  }
  return report;
}

std::string ReportToJson(const EvalReport& report) {
  auto bucket = [](const BucketMetrics& m) {
    json acc = nullptr;
    if (m.accuracy) {
      acc = json::object();
      for (const auto& [t, v] : *m.accuracy) acc[ThresholdKey(t)] = v;
    }
    return json{{"count", m.count}, {"accuracy", std::move(acc)}};
  };
  json out;
  out["thresholds"] = report.thresholds;
  out["overall"] = bucket(report.overall);
  if (report.unique) out["unique"] = bucket(*report.unique);
  if (report.multiple) out["multiple"] = bucket(*report.multiple);
  if (report.top1_accuracy) {
    out["top1"] = {{"count", report.top1_count}, {"accuracy", *report.top1_accuracy}};
  }
  return out.dump(2) + "\n";
}

std::string ReportToTable(const EvalReport& report) {
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s %6s", "split", "count");
  os << buf;
  for (double t : report.thresholds) {
    std::snprintf(buf, sizeof buf, " %9s", ("Acc@" + ThresholdKey(t)).c_str());
    os << buf;
  }
  os << "\n";
  auto row = [&](const char* name, const BucketMetrics& m) {
    std::snprintf(buf, sizeof buf, "%-10s %6zu", name, m.count);
    os << buf;
    for (double t : report.thresholds) {
      if (m.accuracy) {
        std::snprintf(buf, sizeof buf, " %9.2f", 100.0 * m.accuracy->at(t));
      } else {
        std::snprintf(buf, sizeof buf, " %9s", "-");
      }
      os << buf;
    }
    os << "\n";
  };
  if (report.unique) row("unique", *report.unique);
  if (report.multiple) row("multiple", *report.multiple);
  row("overall", report.overall);
  if (report.top1_accuracy) {
    std::snprintf(buf, sizeof buf, "%-10s %6zu %9.2f\n", "top-1", report.top1_count,
                  100.0 * *report.top1_accuracy);
    os << buf;
  }
  return os.str();
}

}  // namespace mvground
