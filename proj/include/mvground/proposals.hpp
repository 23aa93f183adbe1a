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

#ifndef MVGROUND_PROPOSALS_HPP_
#define MVGROUND_PROPOSALS_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "mvground/geometry.hpp"
#include "mvground/mask.hpp"
#include "mvground/scene.hpp"

namespace mvground {

enum class ProposalSource { kExternal, kConsensus };

struct Proposal {
  int id = 0;
  Box3 box;
  std::optional<PointSet> points;
  ProposalSource source = ProposalSource::kExternal;
};

// Proposal file:
//   {"mode": "boxes",         "proposals": [{"id": 0, "box": [6 floats]}, ...]}
//   {"mode": "point_indices", "proposals": [{"id": 0, "point_indices": [...]}, ...]}
// Index lists refer to `point_cloud` and are boxed with AabbOf.
// Throws MalformedFile, IndexOutOfRange, InvariantViolation (duplicate ids).
std::vector<Proposal> LoadProposals(const std::filesystem::path& file,
                                    const std::vector<Vec3>* point_cloud = nullptr);
void SaveProposals(const std::filesystem::path& file,
                   std::span<const Proposal> proposals);

// Proposals built from a list of boxes, ids 0..n-1.
std::vector<Proposal> ProposalsFromBoxes(std::span<const Box3> boxes);

struct ConsensusParams {
  int stride = 1;
  double cell = 0.08;
  double overlap = 0.3;
  int min_views = 2;
  TrimPercentiles trim;
  int jobs = 0;
};

// Simplified multi-view mask clustering: lifts every instance mask, voxelizes
// it, links masks whose voxel sets overlap by at least `overlap` (relative to
// the smaller set), and turns connected components spanning `min_views` or
// more masks into proposals. Single-threshold graph clustering only.
std::vector<Proposal> ConsensusProposals(const Scene& scene,
                                         std::span<const Mask2D> masks,
                                         const ConsensusParams& params = {});

}  // namespace mvground

#endif  // MVGROUND_PROPOSALS_HPP_
