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

#ifndef MVGROUND_SYNTHETIC_HPP_
#define MVGROUND_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mvground/mask.hpp"
#include "mvground/oracle.hpp"
#include "mvground/scene.hpp"

namespace mvground {

// Procedural test rooms: axis-aligned boxes on the floor of a box-shaped
// room, seen by inward-looking cameras with exact rendered depth.
struct SynthParams {
  std::uint64_t seed = 1;
  int min_objects = 3;
  int max_objects = 6;
  int num_frames = 12;
  int width = 96;
  int height = 72;
  double focal = 80.0;
  // Frames in which every object must cover at least `min_visible_pixels`.
  int min_visible_frames = 3;
  int min_visible_pixels = 40;
  // Length of the select_views candidate list stored in the fixtures.
  int preselect = 6;
};

struct SynthObject {
  std::string instance;
  std::string label;
  Box3 box;
};

struct SynthScene {
  Scene scene;
  std::vector<SynthObject> objects;
  // Class-agnostic instance masks for every visible object in every frame,
  // in frame order then instance order.
  std::vector<Mask2D> masks;
  // One query per object, with candidate boxes listing every object.
  std::vector<Query> queries;
  // Recorded oracle transcript: select_views over the embedding top list and
  // the target mask for every (query, frame) pair.
  std::vector<OracleResponse> fixtures;
};

SynthScene GenerateSyntheticScene(const SynthParams& params);

// Dilates masks (scene masks and fixture masks) until each covers at least
// `mask_growth` times its area, and multiplies every depth sample by
// 1 + N(0, depth_sigma).
void PerturbSyntheticScene(SynthScene& synth, double mask_growth, double depth_sigma,
                           std::uint64_t seed);

// Same queries without candidate boxes.
std::vector<Query> WithoutCandidates(std::vector<Query> queries);

// Directory layout: scene manifest and assets, embeddings.bin, masks/,
// queries.json (no candidates), queries_selection.json (with candidates),
// proposals.json (object boxes), fixtures/oracle.jsonl.
void WriteSyntheticScene(const SynthScene& synth, const std::filesystem::path& dir);

}  // namespace mvground

#endif  // MVGROUND_SYNTHETIC_HPP_
