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

#ifndef MVGROUND_CONFIG_HPP_
#define MVGROUND_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvground/grounding.hpp"
#include "mvground/proposals.hpp"
#include "mvground/scene.hpp"
#include "mvground/tsdf.hpp"

namespace mvground {

inline constexpr int kConfigSchemaVersion = 1;

enum class ProposalMode { kConsensus, kExternal };

struct PipelineConfig {
  std::optional<std::string> preset;
  SceneMode mode = SceneMode::kFull;
  GroundingConfig grounding;
  TsdfParams tsdf;
  ConsensusParams consensus;
  ProposalMode proposals = ProposalMode::kConsensus;
  // Run reconstruction even in full mode.
  bool reconstruct = false;
  std::optional<std::string> oracle;
  std::uint64_t seed = 0;

  // Throws ConfigInvalid.
  void Validate() const;
};

std::vector<std::string> PresetNames();
// Throws ConfigInvalid for an unknown name.
PipelineConfig Preset(std::string_view name);

// Keys absent from the file keep the values of `preset` when given, else the
// defaults. Throws ConfigInvalid for unknown keys, a wrong schema_version, or
// out-of-range values.
PipelineConfig ParseConfig(std::string_view text, const std::string& origin = "config");
PipelineConfig LoadConfig(const std::filesystem::path& file);
std::string ConfigToJson(const PipelineConfig& config);

}  // namespace mvground

#endif  // MVGROUND_CONFIG_HPP_
