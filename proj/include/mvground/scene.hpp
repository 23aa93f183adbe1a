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

#ifndef MVGROUND_SCENE_HPP_
#define MVGROUND_SCENE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mvground {

using Vec3 = Eigen::Vector3d;

// Axis-aligned box in world meters. Degenerate (zero-extent) boxes are legal.
struct Box3 {
  Vec3 min_corner = Vec3::Zero();
  Vec3 max_corner = Vec3::Zero();

  // Throws InvariantViolation unless finite and min <= max componentwise.
  static Box3 FromCorners(const Vec3& min_corner, const Vec3& max_corner);
  // [minx, miny, minz, maxx, maxy, maxz]
  static Box3 FromArray(const std::vector<double>& values);
  std::vector<double> ToArray() const;

  Vec3 Extent() const { return max_corner - min_corner; }
  Vec3 Center() const { return 0.5 * (min_corner + max_corner); }
  double Volume() const;
  bool Contains(const Vec3& p) const;
  // True when `other` lies inside this box (closed).
  bool Encloses(const Box3& other) const;

  bool operator==(const Box3& other) const {
    return min_corner == other.min_corner && max_corner == other.max_corner;
  }
};

struct Intrinsics {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;

  void Validate() const;
};

// Rigid camera-to-world transform.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();

  static constexpr double kOrthonormalTolerance = 1e-6;

  static Pose Identity() { return Pose{}; }
  // Validates orthonormality and det(R) = +1; the bottom row must be 0 0 0 1.
  static Pose FromMatrix4(const Eigen::Matrix4d& m);
  Eigen::Matrix4d Matrix4() const;

  Vec3 Apply(const Vec3& p) const { return rotation * p + translation; }
  Pose Inverse() const;
  Pose Compose(const Pose& rhs) const;

  void Validate() const;
};

// Per-pixel metric depth, row-major; 0 marks an invalid sample.
struct DepthMap {
  int width = 0, height = 0;
  std::vector<float> values;

  float at(int u, int v) const {
    return values[static_cast<std::size_t>(v) * width + u];
  }
  float& at(int u, int v) {
    return values[static_cast<std::size_t>(v) * width + u];
  }
  void Validate() const;
};

struct Frame {
  std::string id;
  Intrinsics intrinsics;
  std::optional<Pose> pose;
  std::optional<DepthMap> depth;
  std::optional<Eigen::VectorXf> embedding;
  std::optional<std::string> image_path;

  void Validate() const;
};

enum class SceneMode { kFull, kPosedOnly, kImagesOnly };

struct Scene {
  std::string id;
  std::vector<Frame> frames;
  std::optional<std::vector<Vec3>> point_cloud;
  int embedding_dim = 1;
  // Query embeddings carried by the same export file as frame embeddings.
  std::vector<std::pair<std::string, Eigen::VectorXf>> query_embeddings;

  const Frame* FindFrame(const std::string& id) const;
  std::optional<std::size_t> FrameIndex(const std::string& id) const;
  const Eigen::VectorXf* FindQueryEmbedding(const std::string& query_id) const;
  void Validate() const;
};

enum class Uniqueness { kUnique, kMultiple };

struct Query {
  std::string id;
  std::string scene_id;
  std::string text;
  std::optional<Box3> gt_box;
  std::optional<Uniqueness> uniqueness;
  std::optional<std::vector<Box3>> candidate_boxes;

  // Index of gt_box within candidate_boxes, when both are present.
  std::optional<std::size_t> GroundTruthIndex() const;
  void Validate() const;
};

}  // namespace mvground

#endif  // MVGROUND_SCENE_HPP_
