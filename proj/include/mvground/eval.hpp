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

#ifndef MVGROUND_EVAL_HPP_
#define MVGROUND_EVAL_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvground/predictions.hpp"
#include "mvground/scene.hpp"

namespace mvground {

inline const std::vector<double> kDefaultThresholds = {0.25, 0.5};

// Fraction of ground-truth queries whose prediction has IoU strictly above
// each threshold. A missing prediction is a miss. Throws EmptyGroundTruth.
std::map<double, double> AccAt(const std::map<std::string, Box3>& preds,
                               const std::map<std::string, Box3>& gts,
                               std::span<const double> thresholds = kDefaultThresholds);

// Fraction of queries whose selected index equals the ground-truth index.
// `num_candidates` bounds both. Throws IndexOutOfRange, EmptyGroundTruth.
double Top1Accuracy(const std::map<std::string, std::size_t>& selections,
                    const std::map<std::string, std::size_t>& gts,
                    const std::map<std::string, std::size_t>& num_candidates);

struct BucketMetrics {
  std::size_t count = 0;
  // Absent for an empty bucket.
  std::optional<std::map<double, double>> accuracy;
};

struct EvalReport {
  std::vector<double> thresholds;
  BucketMetrics overall;
  // Present only when every evaluated query carries a uniqueness label.
  std::optional<BucketMetrics> unique;
  std::optional<BucketMetrics> multiple;
  std::optional<double> top1_accuracy;
  std::size_t top1_count = 0;
};

// Queries without gt_box are skipped. Throws ConfigInvalid when a prediction
// names a query absent from `queries`, EmptyGroundTruth when nothing is
// evaluable.
EvalReport SplitMetrics(std::span<const Prediction> predictions,
                        std::span<const Query> queries,
                        std::span<const double> thresholds = kDefaultThresholds);

std::string ReportToJson(const EvalReport& report);
std::string ReportToTable(const EvalReport& report);

}  // namespace mvground

#endif  // MVGROUND_EVAL_HPP_
