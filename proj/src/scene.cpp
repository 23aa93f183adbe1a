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

#include "mvground/scene.hpp"

#include <cmath>
#include <unordered_set>

#include <Eigen/LU>

#include "mvground/error.hpp"

namespace mvground {

Box3 Box3::FromCorners(const Vec3& min_corner, const Vec3& max_corner) {
  if (!min_corner.allFinite() || !max_corner.allFinite()) {
    throw InvariantViolation("Box3", "finite coordinates");
  }
  if ((min_corner.array() > max_corner.array()).any()) {
    throw InvariantViolation("Box3", "min_corner <= max_corner");
  }
  return Box3{min_corner, max_corner};
}

Box3 Box3::FromArray(const std::vector<double>& values) {
  if (values.size() != 6) {
    throw InvariantViolation("Box3", "six coordinates");
  }
  return FromCorners(Vec3(values[0], values[1], values[2]),
                     Vec3(values[3], values[4], values[5]));
}

std::vector<double> Box3::ToArray() const {
  return {min_corner.x(), min_corner.y(), min_corner.z(),
          max_corner.x(), max_corner.y(), max_corner.z()};
}

double Box3::Volume() const {
  const Vec3 e = Extent();
  return e.x() * e.y() * e.z();
}

bool Box3::Contains(const Vec3& p) const {
  return (p.array() >= min_corner.array()).all() &&
         (p.array() <= max_corner.array()).all();
}

bool Box3::Encloses(const Box3& other) const {
  return Contains(other.min_corner) && Contains(other.max_corner);
}

void Intrinsics::Validate() const {
  if (!(std::isfinite(fx) && fx > 0) || !(std::isfinite(fy) && fy > 0)) {
    throw InvariantViolation("Intrinsics", "fx > 0, fy > 0");
  }
  if (width < 1 || height < 1) {
    throw InvariantViolation("Intrinsics", "width, height >= 1");
  }
  if (!(cx >= 0 && cx < width) || !(cy >= 0 && cy < height)) {
    throw InvariantViolation("Intrinsics", "0 <= cx < width, 0 <= cy < height");
  }
}

Pose Pose::FromMatrix4(const Eigen::Matrix4d& m) {
  if (!m.allFinite()) throw InvariantViolation("Pose", "finite");
  const Eigen::RowVector4d bottom(0, 0, 0, 1);
  if ((m.row(3) - bottom).cwiseAbs().maxCoeff() > kOrthonormalTolerance) {
    throw InvariantViolation("Pose", "homogeneous bottom row");
  }
  Pose pose;
  pose.rotation = m.topLeftCorner<3, 3>();
  pose.translation = m.topRightCorner<3, 1>();
  pose.Validate();
  return pose;
}

Eigen::Matrix4d Pose::Matrix4() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Pose Pose::Inverse() const {
  Pose inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

Pose Pose::Compose(const Pose& rhs) const {
  Pose out;
  out.rotation = rotation * rhs.rotation;
  out.translation = rotation * rhs.translation + translation;
  return out;
}

void Pose::Validate() const {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw InvariantViolation("Pose", "finite");
  }
  const double ortho_err =
      (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
          .cwiseAbs()
          .maxCoeff();
  if (ortho_err > kOrthonormalTolerance) {
    throw InvariantViolation("Pose", "orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) > kOrthonormalTolerance) {
    throw InvariantViolation("Pose", "det(R) = +1");
  }
}

void DepthMap::Validate() const {
  if (width < 1 || height < 1 ||
      values.size() != static_cast<std::size_t>(width) * height) {
    throw InvariantViolation("DepthMap", "values sized width x height");
  }
  for (float d : values) {
    if (!std::isfinite(d) || d < 0.0f) {
      throw InvariantViolation("DepthMap", "finite, non-negative values");
    }
  }
}

void Frame::Validate() const {
  intrinsics.Validate();
  if (pose) pose->Validate();
  if (depth) {
    depth->Validate();
    if (depth->width != intrinsics.width ||
        depth->height != intrinsics.height) {
      throw InvariantViolation("Frame", "depth dims equal intrinsics dims");
    }
  }
  if (embedding) {
    if (!embedding->allFinite() ||
        std::abs(embedding->norm() - 1.0f) > 1e-4f) {
      throw InvariantViolation("Frame", "unit-norm embedding");
    }
  }
}

const Frame* Scene::FindFrame(const std::string& frame_id) const {
  for (const Frame& f : frames) {
    if (f.id == frame_id) return &f;
  }
  return nullptr;
}

std::optional<std::size_t> Scene::FrameIndex(const std::string& frame_id) const {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].id == frame_id) return i;
  }
  return std::nullopt;
}

const Eigen::VectorXf* Scene::FindQueryEmbedding(
    const std::string& query_id) const {
  for (const auto& [id, vec] : query_embeddings) {
    if (id == query_id) return &vec;
  }
  return nullptr;
}

void Scene::Validate() const {
  if (embedding_dim < 1) throw InvariantViolation("Scene", "embedding_dim >= 1");
  std::unordered_set<std::string> seen;
  for (const Frame& f : frames) {
    if (!seen.insert(f.id).second) {
      throw InvariantViolation("Scene", "unique frame ids");
    }
    f.Validate();
    if (f.embedding && f.embedding->size() != embedding_dim) {
      throw InvariantViolation("Scene", "embeddings share embedding_dim");
    }
  }
  if (point_cloud) {
    for (const Vec3& p : *point_cloud) {
      if (!p.allFinite()) throw InvariantViolation("Scene", "finite points");
    }
  }
}

std::optional<std::size_t> Query::GroundTruthIndex() const {
  if (!gt_box || !candidate_boxes) return std::nullopt;
  for (std::size_t i = 0; i < candidate_boxes->size(); ++i) {
    if ((*candidate_boxes)[i] == *gt_box) return i;
  }
  return std::nullopt;
}

void Query::Validate() const {
  if (candidate_boxes) {
    if (candidate_boxes->empty()) {
      throw InvariantViolation("Query", "candidate_boxes non-empty");
    }
    if (gt_box && !GroundTruthIndex()) {
      throw InvariantViolation("Query", "gt_box equals one candidate");
    }
  }
}

}  // namespace mvground
