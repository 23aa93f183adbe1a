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

#ifndef MVGROUND_SCENE_IO_HPP_
#define MVGROUND_SCENE_IO_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mvground/mask.hpp"
#include "mvground/scene.hpp"

namespace mvground {

namespace fs = std::filesystem;

// Scene directory layout:
//   scene.json                    manifest (id, embedding_dim, ordered frames)
//   poses/<frame_id>.txt          4x4 row-major camera-to-world
//   depth/<frame_id>.png          16-bit grayscale millimeters, 0 = invalid
//   masks/<frame_id>/<inst>.json  {width, height, runs}
//   embeddings.bin                EMB1 records
//   queries.json                  list of query records
inline constexpr const char* kManifestName = "scene.json";
inline constexpr const char* kEmbeddingsName = "embeddings.bin";
inline constexpr const char* kQueriesName = "queries.json";

std::string_view SceneModeName(SceneMode mode);
SceneMode ParseSceneMode(std::string_view name);

// Loads and validates a scene. `mode` decides which per-frame assets are
// mandatory: full needs pose and depth, posed_only needs pose, images_only
// needs neither.
Scene LoadScene(const fs::path& dir, SceneMode mode);

// Writes manifest, poses, and depth maps in the layout above.
void SaveScene(const Scene& scene, const fs::path& dir);

// Attaches embeddings from an EMB1 file. Records whose id names a frame are
// attached to it; ids listed in `query_ids` go to Scene::query_embeddings.
// Vectors within 5% of unit norm are renormalized.
void LoadEmbeddings(const fs::path& file, Scene& scene,
                    std::span<const std::string> query_ids = {});

struct EmbeddingRecord {
  std::string id;
  std::vector<float> values;
};
void WriteEmbeddings(const fs::path& file, int dim,
                     std::span<const EmbeddingRecord> records);

Pose ReadPose(const fs::path& file);
void WritePose(const fs::path& file, const Pose& pose);

DepthMap ReadDepthPng(const fs::path& file);
// Depths are rounded to millimeters; values beyond 65.535 m are clamped.
void WriteDepthPng(const fs::path& file, const DepthMap& depth);

Mask2D ReadMask(const fs::path& file, const std::string& frame_id);
void WriteMask(const fs::path& file, const Mask2D& mask);
std::string MaskToJson(const Mask2D& mask);
// All masks under <dir>/masks, ordered by manifest frame order then instance
// name. Frames without a mask directory contribute nothing.
std::vector<Mask2D> LoadSceneMasks(const fs::path& dir, const Scene& scene);

std::vector<Query> LoadQueries(const fs::path& file);
void SaveQueries(const fs::path& file, std::span<const Query> queries);

// Canonical byte serialization; equal scenes serialize identically.
std::string SerializeScene(const Scene& scene);
std::string Fingerprint(std::string_view bytes);

std::string ReadFile(const fs::path& file);
void WriteFile(const fs::path& file, std::string_view bytes);

}  // namespace mvground

#endif  // MVGROUND_SCENE_IO_HPP_
