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

#include "mvground/proposals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <unordered_set>

#include "json_util.hpp"
#include "mvground/error.hpp"
#include "mvground/parallel.hpp"
#include "mvground/scene_io.hpp"

namespace mvground {

using detail::Get;
using detail::json;

std::vector<Proposal> LoadProposals(const std::filesystem::path& file,
                                    const std::vector<Vec3>* point_cloud) {
  const std::string name = file.string();
  const json doc = detail::ParseJsonFile(file);
  detail::CheckKeys(doc, {"mode", "source", "proposals"}, name);
  const auto mode = Get<std::string>(doc, "mode", name);
  if (mode != "boxes" && mode != "point_indices") {
    detail::SchemaError(name, "mode must be 'boxes' or 'point_indices'");
  }
  ProposalSource source = ProposalSource::kExternal;
  if (auto it = doc.find("source"); it != doc.end()) {
    if (*it == "consensus") {
      source = ProposalSource::kConsensus;
    } else if (*it != "external") {
      detail::SchemaError(name, "source must be 'external' or 'consensus'");
    }
  }
  const json list = Get<json>(doc, "proposals", name);
  if (!list.is_array()) detail::SchemaError(name, "proposals must be a list");

  std::vector<Proposal> out;
  std::unordered_set<int> ids;
  for (const json& rec : list) {
    Proposal p;
    p.source = source;
    if (mode == "boxes") {
      detail::CheckKeys(rec, {"id", "box"}, name);
      p.id = Get<int>(rec, "id", name);
      p.box = detail::BoxFromJson(Get<json>(rec, "box", name), name);
    } else {
      detail::CheckKeys(rec, {"id", "point_indices"}, name);
      p.id = Get<int>(rec, "id", name);
      if (!point_cloud) {
        throw Error(ErrorKind::kMissingAsset,
                    name + " uses point indices but the scene has no point cloud");
      }
      const auto indices = Get<std::vector<std::int64_t>>(rec, "point_indices", name);
      PointSet ps;
      for (std::int64_t idx : indices) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= point_cloud->size()) {
          throw Error(ErrorKind::kIndexOutOfRange,
                      "proposal " + std::to_string(p.id) + " index " +
                          std::to_string(idx) + " vs point cloud of " +
                          std::to_string(point_cloud->size()));
        }
        ps.points.push_back((*point_cloud)[static_cast<std::size_t>(idx)]);
      }
      p.box = AabbOf(ps);
      p.points = std::move(ps);
    }
    if (!ids.insert(p.id).second) {
      throw InvariantViolation("Proposal", "unique ids (" + std::to_string(p.id) + ")");
    }
    out.push_back(std::move(p));
  }
  return out;
}

void SaveProposals(const std::filesystem::path& file,
                   std::span<const Proposal> proposals) {
  json list = json::array();
  bool consensus = !proposals.empty();
  for (const Proposal& p : proposals) {
    list.push_back(json{{"id", p.id}, {"box", detail::BoxToJson(p.box)}});
    consensus = consensus && p.source == ProposalSource::kConsensus;
  }
  json doc;
  doc["mode"] = "boxes";
  doc["source"] = consensus ? "consensus" : "external";
  doc["proposals"] = std::move(list);
  WriteFile(file, doc.dump(2) + "\n");
}

std::vector<Proposal> ProposalsFromBoxes(std::span<const Box3> boxes) {
  std::vector<Proposal> out;
  out.reserve(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    out.push_back(Proposal{static_cast<int>(i), boxes[i], std::nullopt,
                           ProposalSource::kExternal});
  }
  return out;
}

namespace {

using VoxelKey = std::tuple<std::int64_t, std::int64_t, std::int64_t>;

struct LiftedMask {
  std::size_t frame_index = 0;
  const Mask2D* mask = nullptr;
  PointSet points;
  std::vector<VoxelKey> voxels;  // sorted, unique
};

std::size_t SortedIntersectionSize(const std::vector<VoxelKey>& a,
                                   const std::vector<VoxelKey>& b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<Proposal> ConsensusProposals(const Scene& scene,
                                         std::span<const Mask2D> masks,
                                         const ConsensusParams& params) {
  if (!(params.cell > 0) || !(params.overlap >= 0) || params.min_views < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "consensus needs cell > 0, overlap >= 0, min_views >= 1");
  }
  // Canonical node order: manifest frame order, then instance name, then runs.
  std::vector<LiftedMask> nodes(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const auto idx = scene.FrameIndex(masks[i].frame_id);
    if (!idx) {
      throw Error(ErrorKind::kUnknownFrameId,
                  "mask for frame '" + masks[i].frame_id + "'");
    }
    nodes[i].frame_index = *idx;
    nodes[i].mask = &masks[i];
  }
  std::sort(nodes.begin(), nodes.end(), [](const LiftedMask& a, const LiftedMask& b) {
    return std::tie(a.frame_index, a.mask->instance, a.mask->runs) <
           std::tie(b.frame_index, b.mask->instance, b.mask->runs);
  });

  ParallelFor(
      nodes.size(),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          LiftedMask& node = nodes[i];
          const Frame& frame = scene.frames[node.frame_index];
          node.points =
              TrimOutliers(LiftMask(*node.mask, frame, params.stride), params.trim);
          node.voxels.reserve(node.points.size());
          for (const Vec3& p : node.points.points) {
            node.voxels.emplace_back(
                static_cast<std::int64_t>(std::floor(p.x() / params.cell)),
                static_cast<std::int64_t>(std::floor(p.y() / params.cell)),
                static_cast<std::int64_t>(std::floor(p.z() / params.cell)));
          }
          std::sort(node.voxels.begin(), node.voxels.end());
          node.voxels.erase(std::unique(node.voxels.begin(), node.voxels.end()),
                            node.voxels.end());
        }
      },
      params.jobs);

  DisjointSets sets(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].voxels.empty()) continue;
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (nodes[j].voxels.empty()) continue;
      const double shared =
          static_cast<double>(SortedIntersectionSize(nodes[i].voxels, nodes[j].voxels));
      const double smaller = static_cast<double>(
          std::min(nodes[i].voxels.size(), nodes[j].voxels.size()));
      if (shared / smaller >= params.overlap) sets.Union(i, j);
    }
  }

  // Roots are the smallest member index, so iterating nodes in order visits
  // components by their smallest member.
  std::vector<Proposal> proposals;
  for (std::size_t root = 0; root < nodes.size(); ++root) {
    if (sets.Find(root) != root || nodes[root].points.empty()) continue;
    PointSet merged;
    int members = 0;
    for (std::size_t i = root; i < nodes.size(); ++i) {
      if (sets.Find(i) != root || nodes[i].points.empty()) continue;
      ++members;
      merged.points.insert(merged.points.end(), nodes[i].points.points.begin(),
                           nodes[i].points.points.end());
    }
    if (members < params.min_views) continue;
    merged = TrimOutliers(merged, params.trim);
    if (merged.empty()) continue;
    Proposal p;
    p.id = static_cast<int>(proposals.size());
    p.box = AabbOf(merged);
    p.points = std::move(merged);
    p.source = ProposalSource::kConsensus;
    proposals.push_back(std::move(p));
  }
  return proposals;
}

}  // namespace mvground
