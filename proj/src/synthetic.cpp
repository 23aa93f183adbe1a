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

#include "mvground/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "mvground/error.hpp"
#include "mvground/proposals.hpp"
#include "mvground/scene_io.hpp"
#include "mvground/view_select.hpp"

namespace mvground {

namespace {

constexpr double kRoomHeight = 2.6;
constexpr double kObjectGap = 0.3;
constexpr double kWallClearance = 1.0;
constexpr int kMaxAttempts = 200;
const char* const kLabels[] = {"chair", "table", "cabinet", "box"};

struct Room {
  Box3 bounds;
  std::vector<SynthObject> objects;
};

Pose LookAt(const Vec3& eye, const Vec3& target) {
  const Vec3 forward = (target - eye).normalized();
  const Vec3 right = forward.cross(Vec3::UnitZ()).normalized();
  const Vec3 down = forward.cross(right);
  Pose pose;
  pose.rotation.col(0) = right;
  pose.rotation.col(1) = down;
  pose.rotation.col(2) = forward;
  pose.translation = eye;
  return pose;
}

// Entry distance of a ray into a box, or infinity when missed.
double RayEnter(const Vec3& o, const Vec3& d, const Box3& box) {
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < box.min_corner[a] || o[a] > box.max_corner[a]) {
        return std::numeric_limits<double>::infinity();
      }
      continue;
    }
    double ta = (box.min_corner[a] - o[a]) / d[a];
    double tb = (box.max_corner[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t0 <= t1 ? t0 : std::numeric_limits<double>::infinity();
}

// Exit distance of a ray starting inside a box.
double RayExit(const Vec3& o, const Vec3& d, const Box3& box) {
  double t = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (d[a] > 0) t = std::min(t, (box.max_corner[a] - o[a]) / d[a]);
    if (d[a] < 0) t = std::min(t, (box.min_corner[a] - o[a]) / d[a]);
  }
  return t;
}

bool PlaceObjects(Room& room, int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> label(0, std::size(kLabels) - 1);
  const Vec3 lo = room.bounds.min_corner, hi = room.bounds.max_corner;
  for (int n = 0; n < count; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Vec3 size(0.35 + 0.65 * unit(rng), 0.35 + 0.65 * unit(rng),
                      0.35 + 0.75 * unit(rng));
      const double x0 = lo.x() + kWallClearance;
      const double y0 = lo.y() + kWallClearance;
      const double xr = hi.x() - kWallClearance - size.x() - x0;
      const double yr = hi.y() - kWallClearance - size.y() - y0;
      if (xr <= 0 || yr <= 0) continue;
      const Vec3 min(x0 + xr * unit(rng), y0 + yr * unit(rng), 0.0);
      const Box3 box = Box3::FromCorners(min, min + size);
      bool clear = true;
      for (const SynthObject& other : room.objects) {
        const Vec3 gap = Vec3::Constant(kObjectGap);
        const Box3 grown = Box3::FromCorners(other.box.min_corner - gap,
                                             other.box.max_corner + gap);
        if (BoxIou(grown, box) > 0.0) clear = false;
      }
      if (!clear) continue;
      room.objects.push_back(
          SynthObject{"obj" + std::to_string(n), kLabels[label(rng)], box});
      placed = true;
    }
    if (!placed) return false;
  }
  return true;
}

struct Rendered {
  DepthMap depth;
  // Object index per pixel, -1 for walls and floor.
  std::vector<int> labels;
};

Rendered Render(const Room& room, const Intrinsics& k, const Pose& pose) {
  Rendered r;
  r.depth.width = k.width;
  r.depth.height = k.height;
  r.depth.values.assign(std::size_t(k.width) * k.height, 0.0f);
  r.labels.assign(r.depth.values.size(), -1);
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) {
      const Vec3 dir = pose.rotation * Vec3((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0);
      double best = RayExit(pose.translation, dir, room.bounds);
      int hit = -1;
      for (std::size_t i = 0; i < room.objects.size(); ++i) {
        const double t = RayEnter(pose.translation, dir, room.objects[i].box);
        if (t < best) {
          best = t;
          hit = static_cast<int>(i);
        }
      }
      const std::size_t idx = std::size_t(v) * k.width + u;
      r.depth.values[idx] = static_cast<float>(best);
      r.labels[idx] = hit;
    }
  }
  return r;
}

Mask2D MaskOf(const Rendered& r, int label, const std::string& frame_id,
              const std::string& instance) {
  BinaryGrid grid(r.depth.width, r.depth.height);
  for (std::size_t i = 0; i < r.labels.size(); ++i) grid.pixels[i] = r.labels[i] == label;
  Mask2D mask = RleEncode(grid);
  mask.frame_id = frame_id;
  mask.instance = instance;
  mask.source = MaskSource::kSynthetic;
  return mask;
}

void Dilate(Mask2D& mask, double growth) {
  const std::uint64_t area = mask.ForegroundCount();
  if (area == 0) return;
  const auto target = static_cast<std::uint64_t>(std::ceil(growth * double(area)));
  BinaryGrid grid = RleDecode(mask);
  while (grid.CountSet() < target) {
    BinaryGrid next = grid;
    for (int v = 0; v < grid.height; ++v) {
      for (int u = 0; u < grid.width; ++u) {
        if (grid.at(u, v)) continue;
        const bool near = (u > 0 && grid.at(u - 1, v)) ||
                          (u + 1 < grid.width && grid.at(u + 1, v)) ||
                          (v > 0 && grid.at(u, v - 1)) ||
                          (v + 1 < grid.height && grid.at(u, v + 1));
        if (near) next.set(u, v);
      }
    }
    if (next == grid) break;
    grid = std::move(next);
  }
  mask.runs = RleEncode(grid).runs;
}

}  // namespace

SynthScene GenerateSyntheticScene(const SynthParams& params) {
  if (params.min_objects < 1 || params.max_objects < params.min_objects ||
      params.num_frames < 1 || params.width < 1 || params.height < 1) {
    throw Error(ErrorKind::kInvalidArgument, "bad synthetic scene parameters");
  }
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(params.min_objects, params.max_objects);

  Intrinsics k;
  k.fx = k.fy = params.focal;
  k.cx = 0.5 * (params.width - 1);
  k.cy = 0.5 * (params.height - 1);
  k.width = params.width;
  k.height = params.height;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Room room;
    const Vec3 size(4.0 + 2.0 * unit(rng), 4.0 + 2.0 * unit(rng), kRoomHeight);
    room.bounds = Box3::FromCorners(Vec3::Zero(), size);
    if (!PlaceObjects(room, count(rng), rng)) continue;

    const std::size_t n_obj = room.objects.size();
    const Vec3 center = room.bounds.Center();
    std::vector<Pose> poses;
    std::vector<Rendered> renders;
    // pixels[f][i]: visible pixels of object i in frame f.
    std::vector<std::vector<int>> pixels;
    for (int f = 0; f < params.num_frames; ++f) {
      const double theta = 2.0 * std::numbers::pi * (f + 0.3 * unit(rng)) / params.num_frames;
      const Vec3 eye(center.x() + (0.5 * size.x() - 0.3) * std::cos(theta),
                     center.y() + (0.5 * size.y() - 0.3) * std::sin(theta),
                     1.5 + 0.5 * unit(rng));
      const Vec3 target(center.x() + 0.6 * (unit(rng) - 0.5),
                        center.y() + 0.6 * (unit(rng) - 0.5), 0.3);
      poses.push_back(LookAt(eye, target));
      renders.push_back(Render(room, k, poses.back()));
      std::vector<int> counts(n_obj, 0);
      for (int label : renders.back().labels) {
        if (label >= 0) ++counts[label];
      }
      pixels.push_back(std::move(counts));
    }
    bool visible = true;
    for (std::size_t i = 0; i < n_obj; ++i) {
      int frames = 0;
      for (const auto& counts : pixels) frames += counts[i] >= params.min_visible_pixels;
      visible = visible && frames >= params.min_visible_frames;
    }
    if (!visible) continue;

    SynthScene out;
    out.objects = room.objects;
    Scene& scene = out.scene;
    scene.id = "synth_" + std::to_string(params.seed);
    scene.embedding_dim = params.num_frames;
    for (int f = 0; f < params.num_frames; ++f) {
      Frame frame;
      char name[16];
      std::snprintf(name, sizeof name, "f%03d", f);
      frame.id = name;
      frame.intrinsics = k;
      frame.pose = poses[f];
      frame.depth = renders[f].depth;
      frame.embedding = Eigen::VectorXf::Unit(params.num_frames, f);
      scene.frames.push_back(std::move(frame));
    }
    for (int f = 0; f < params.num_frames; ++f) {
      for (std::size_t i = 0; i < n_obj; ++i) {
        if (pixels[f][i] == 0) continue;
        out.masks.push_back(MaskOf(renders[f], static_cast<int>(i), scene.frames[f].id,
                                   room.objects[i].instance));
      }
    }

    std::vector<Box3> boxes;
    for (const SynthObject& o : room.objects) boxes.push_back(o.box);
    for (std::size_t i = 0; i < n_obj; ++i) {
      const SynthObject& obj = room.objects[i];
      Query q;
      q.id = scene.id + "_q" + std::to_string(i);
      q.scene_id = scene.id;
      q.text = "the " + obj.label + " " + obj.instance;
      q.gt_box = obj.box;
      int same_label = 0;
      for (const SynthObject& o : room.objects) same_label += o.label == obj.label;
      q.uniqueness = same_label == 1 ? Uniqueness::kUnique : Uniqueness::kMultiple;
      q.candidate_boxes = boxes;
      out.queries.push_back(q);

      Eigen::VectorXf emb(params.num_frames);
      int max_pixels = 0;
      for (int f = 0; f < params.num_frames; ++f) {
        emb[f] = static_cast<float>(pixels[f][i]);
        max_pixels = std::max(max_pixels, pixels[f][i]);
      }
      emb.normalize();
      scene.query_embeddings.emplace_back(q.id, emb);

      OracleResponse select;
      select.id = SelectViewsRequestId(q.id);
      select.kind = OracleKind::kSelectViews;
      for (const RankedView& view : CosineTopK(emb, scene, params.preselect)) {
        select.frames.push_back(ScoredFrame{view.frame_id, 1.0});
      }
      out.fixtures.push_back(std::move(select));
      for (int f = 0; f < params.num_frames; ++f) {
        const std::string& fid = scene.frames[f].id;
        OracleResponse seg;
        seg.id = SegmentRequestId(q.id, fid);
        seg.kind = OracleKind::kSegment;
        seg.mask = MaskOf(renders[f], static_cast<int>(i), fid, obj.instance);
        seg.mask->source = MaskSource::kFixture;
        out.fixtures.push_back(std::move(seg));
        OracleResponse rel;
        rel.id = RelevanceRequestId(q.id, fid);
        rel.kind = OracleKind::kRelevance;
        rel.score = static_cast<double>(pixels[f][i]) / max_pixels;
        out.fixtures.push_back(std::move(rel));
      }
    }
    return out;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "could not generate a scene with every object visible for seed " +
                  std::to_string(params.seed));
}

void PerturbSyntheticScene(SynthScene& synth, double mask_growth, double depth_sigma,
                           std::uint64_t seed) {
  for (Mask2D& m : synth.masks) Dilate(m, mask_growth);
  for (OracleResponse& r : synth.fixtures) {
    if (r.mask) Dilate(*r.mask, mask_growth);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, depth_sigma);
  for (Frame& frame : synth.scene.frames) {
    if (!frame.depth) continue;
    for (float& d : frame.depth->values) {
      if (d > 0.0f) d = static_cast<float>(d * std::max(0.05, 1.0 + noise(rng)));
    }
  }
}

std::vector<Query> WithoutCandidates(std::vector<Query> queries) {
  for (Query& q : queries) q.candidate_boxes.reset();
  return queries;
}

void WriteSyntheticScene(const SynthScene& synth, const std::filesystem::path& dir) {
  const Scene& scene = synth.scene;
  SaveScene(scene, dir);
  std::vector<EmbeddingRecord> records;
  for (const Frame& f : scene.frames) {
    records.push_back({f.id, {f.embedding->data(), f.embedding->data() + f.embedding->size()}});
  }
  for (const auto& [id, emb] : scene.query_embeddings) {
    records.push_back({id, {emb.data(), emb.data() + emb.size()}});
  }
  WriteEmbeddings(dir / kEmbeddingsName, scene.embedding_dim, records);
  for (const Mask2D& m : synth.masks) {
    WriteMask(dir / "masks" / m.frame_id / (m.instance + ".json"), m);
  }
  SaveQueries(dir / kQueriesName, WithoutCandidates(synth.queries));
  SaveQueries(dir / "queries_selection.json", synth.queries);
  std::vector<Box3> boxes;
  for (const SynthObject& o : synth.objects) boxes.push_back(o.box);
  SaveProposals(dir / "proposals.json", ProposalsFromBoxes(boxes));
  std::string lines;
  for (const OracleResponse& r : synth.fixtures) lines += ResponseToJson(r) + "\n";
  WriteFile(dir / "fixtures" / "oracle.jsonl", lines);
}

}  // namespace mvground
