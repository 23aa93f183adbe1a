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

#include "mvground/config.hpp"

#include "json_util.hpp"
#include "mvground/error.hpp"
#include "mvground/scene_io.hpp"

namespace mvground {

using detail::json;

namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorKind::kConfigInvalid, what);
}

void Require(bool ok, const std::string& what) {
  if (!ok) Invalid(what);
}

template <typename T>
void Read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    Invalid(where + ": key '" + key + "' has the wrong type");
  }
}

void CheckKeys(const json& obj, std::initializer_list<std::string_view> allowed,
               const std::string& where) {
  if (!obj.is_object()) Invalid(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) Invalid(where + ": unknown key '" + key + "'");
  }
}

std::string_view StrategyName(GroundingStrategy s) {
  return s == GroundingStrategy::kVote ? "vote" : "largest_proposal";
}

std::string_view ProposalModeName(ProposalMode m) {
  return m == ProposalMode::kConsensus ? "consensus" : "external";
}

}  // namespace

void PipelineConfig::Validate() const {
  const GroundingConfig& g = grounding;
  Require(g.m_views >= 1 && g.k_preselect >= g.m_views,
          "need k_preselect >= m_views >= 1, got k_preselect=" +
              std::to_string(g.k_preselect) + " m_views=" + std::to_string(g.m_views));
  Require(g.params.min_iou >= 0.0 && g.params.min_iou <= 1.0, "min_iou outside [0,1]");
  Require(g.params.relevance_weight >= 0.0 && g.params.relevance_weight <= 1.0,
          "relevance_weight outside [0,1]");
  for (const TrimPercentiles* t : {&g.params.trim, &consensus.trim}) {
    Require(t->lo >= 0.0 && t->hi >= 0.0 && t->lo + t->hi < 1.0,
            "trim percentiles must be >= 0 with lo + hi < 1");
  }
  Require(g.params.lift_stride >= 1, "lift_stride must be >= 1");
  Require(tsdf.voxel_size > 0.0, "tsdf.voxel_size must be > 0");
  Require(tsdf.truncation >= 2.0 * tsdf.voxel_size,
          "tsdf.truncation must be >= 2 * voxel_size");
  Require(tsdf.margin >= 0.0, "tsdf.margin must be >= 0");
  Require(tsdf.max_voxels >= 1, "tsdf.max_voxels must be >= 1");
  Require(consensus.stride >= 1, "consensus.stride must be >= 1");
  Require(consensus.cell > 0.0, "consensus.cell must be > 0");
  Require(consensus.overlap > 0.0 && consensus.overlap <= 1.0,
          "consensus.overlap outside (0,1]");
  Require(consensus.min_views >= 1, "consensus.min_views must be >= 1");
  if (oracle) {
    Require(oracle->rfind("fixtures:", 0) == 0 || oracle->rfind("exec:", 0) == 0,
            "oracle must start with 'fixtures:' or 'exec:'");
  }
}

std::vector<std::string> PresetNames() { return {"stage1", "stage2", "stage3", "stage4"}; }

PipelineConfig Preset(std::string_view name) {
  PipelineConfig c;
  c.preset = std::string(name);
  GroundingConfig& g = c.grounding;
  if (name == "stage1") {
    g.strategy = GroundingStrategy::kLargestProposal;
  } else if (name == "stage2") {
    g.k_preselect = 1;
    g.m_views = 1;
    g.oracle_view_selection = false;
  } else if (name == "stage3") {
    g.m_views = 1;
  } else if (name == "stage4") {
    // Defaults: six preselected frames, three oracle views.
  } else {
    Invalid("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

PipelineConfig ParseConfig(std::string_view text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    Invalid(origin + ": " + e.what());
  }
  CheckKeys(root,
            {"schema_version", "preset", "mode", "k_preselect", "m_views",
             "oracle_view_selection", "strategy", "min_iou", "relevance_weight", "trim",
             "lift_stride", "tsdf", "consensus", "proposals", "reconstruct", "oracle",
             "seed"},
            origin);
  int version = 0;
  Read(root, "schema_version", version, origin);
  Require(version == kConfigSchemaVersion,
          origin + ": schema_version must be " + std::to_string(kConfigSchemaVersion));

  PipelineConfig c;
  if (root.contains("preset")) {
    std::string name;
    Read(root, "preset", name, origin);
    c = Preset(name);
  }
  if (root.contains("mode")) {
    std::string mode;
    Read(root, "mode", mode, origin);
    c.mode = ParseSceneMode(mode);
  }
  GroundingConfig& g = c.grounding;
  Read(root, "k_preselect", g.k_preselect, origin);
  Read(root, "m_views", g.m_views, origin);
  Read(root, "oracle_view_selection", g.oracle_view_selection, origin);
  if (root.contains("strategy")) {
    std::string s;
    Read(root, "strategy", s, origin);
    if (s == "vote") {
      g.strategy = GroundingStrategy::kVote;
    } else if (s == "largest_proposal") {
      g.strategy = GroundingStrategy::kLargestProposal;
    } else {
      Invalid(origin + ": unknown strategy '" + s + "'");
    }
  }
  Read(root, "min_iou", g.params.min_iou, origin);
  Read(root, "relevance_weight", g.params.relevance_weight, origin);
  if (root.contains("trim")) {
    std::vector<double> t;
    Read(root, "trim", t, origin);
    Require(t.size() == 2, origin + ": trim must be [lo, hi]");
    g.params.trim = {t[0], t[1]};
    c.consensus.trim = g.params.trim;
  }
  Read(root, "lift_stride", g.params.lift_stride, origin);
  if (root.contains("tsdf")) {
    const json& t = root.at("tsdf");
    const std::string where = origin + ": tsdf";
    CheckKeys(t, {"voxel_size", "truncation", "margin", "max_voxels"}, where);
    Read(t, "voxel_size", c.tsdf.voxel_size, where);
    Read(t, "truncation", c.tsdf.truncation, where);
    Read(t, "margin", c.tsdf.margin, where);
    Read(t, "max_voxels", c.tsdf.max_voxels, where);
  }
  if (root.contains("consensus")) {
    const json& t = root.at("consensus");
    const std::string where = origin + ": consensus";
    CheckKeys(t, {"stride", "cell", "overlap", "min_views"}, where);
    Read(t, "stride", c.consensus.stride, where);
    Read(t, "cell", c.consensus.cell, where);
    Read(t, "overlap", c.consensus.overlap, where);
    Read(t, "min_views", c.consensus.min_views, where);
  }
  if (root.contains("proposals")) {
    std::string p;
    Read(root, "proposals", p, origin);
    if (p == "consensus") {
      c.proposals = ProposalMode::kConsensus;
    } else if (p == "external") {
      c.proposals = ProposalMode::kExternal;
    } else {
      Invalid(origin + ": unknown proposals mode '" + p + "'");
    }
  }
  Read(root, "reconstruct", c.reconstruct, origin);
  if (root.contains("oracle")) {
    std::string o;
    Read(root, "oracle", o, origin);
    c.oracle = o;
  }
  Read(root, "seed", c.seed, origin);
  try {
    c.Validate();
  } catch (const Error& e) {
    Invalid(origin + ": " + e.detail());
  }
  return c;
}

PipelineConfig LoadConfig(const std::filesystem::path& file) {
  std::string text;
  try {
    text = ReadFile(file);
  } catch (const Error& e) {
    Invalid(e.detail());
  }
  return ParseConfig(text, file.string());
}

std::string ConfigToJson(const PipelineConfig& c) {
  const GroundingConfig& g = c.grounding;
  json out = {
      {"schema_version", kConfigSchemaVersion},
      {"mode", SceneModeName(c.mode)},
      {"k_preselect", g.k_preselect},
      {"m_views", g.m_views},
      {"oracle_view_selection", g.oracle_view_selection},
      {"strategy", StrategyName(g.strategy)},
      {"min_iou", g.params.min_iou},
      {"relevance_weight", g.params.relevance_weight},
      {"trim", {g.params.trim.lo, g.params.trim.hi}},
      {"lift_stride", g.params.lift_stride},
      {"tsdf",
       {{"voxel_size", c.tsdf.voxel_size},
        {"truncation", c.tsdf.truncation},
        {"margin", c.tsdf.margin},
        {"max_voxels", c.tsdf.max_voxels}}},
      {"consensus",
       {{"stride", c.consensus.stride},
        {"cell", c.consensus.cell},
        {"overlap", c.consensus.overlap},
        {"min_views", c.consensus.min_views}}},
      {"proposals", ProposalModeName(c.proposals)},
      {"reconstruct", c.reconstruct},
      {"seed", c.seed},
  };
  if (c.preset) out["preset"] = *c.preset;
  if (c.oracle) out["oracle"] = *c.oracle;
  return out.dump(2) + "\n";
}

}  // namespace mvground
