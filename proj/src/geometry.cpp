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

#include "mvground/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mvground/error.hpp"

namespace mvground {

Vec3 Unproject(double u, double v, double depth, const Intrinsics& k) {
  if (!std::isfinite(depth) || depth <= 0.0) {
    throw Error(ErrorKind::kInvalidDepth,
                "depth " + std::to_string(depth) + " at pixel (" +
                    std::to_string(u) + ", " + std::to_string(v) + ")");
  }
  return Vec3((u - k.cx) * depth / k.fx, (v - k.cy) * depth / k.fy, depth);
}

PixelDepth Project(const Vec3& p_cam, const Intrinsics& k) {
  const double z = p_cam.z();
  return PixelDepth{k.fx * p_cam.x() / z + k.cx, k.fy * p_cam.y() / z + k.cy, z};
}

PointSet LiftMask(const Mask2D& mask, const Frame& frame, int stride) {
  if (stride < 1) {
    throw Error(ErrorKind::kInvalidArgument, "lift stride must be >= 1");
  }
  if (!frame.pose) {
    throw Error(ErrorKind::kMissingPose, "frame '" + frame.id + "'");
  }
  if (!frame.depth) {
    throw Error(ErrorKind::kMissingDepth, "frame '" + frame.id + "'");
  }
  const DepthMap& depth = *frame.depth;
  if (mask.width != depth.width || mask.height != depth.height) {
    throw Error(ErrorKind::kDimMismatch,
                "mask " + std::to_string(mask.width) + "x" +
                    std::to_string(mask.height) + " vs depth " +
                    std::to_string(depth.width) + "x" +
                    std::to_string(depth.height) + " for frame '" + frame.id +
                    "'");
  }
  mask.Validate();

  PointSet out;
  out.provenance = frame.id;
  const Pose& pose = *frame.pose;
  const auto w = static_cast<std::size_t>(mask.width);
  // Walk the foreground runs directly instead of decoding the whole grid.
  std::size_t pos = 0;
  for (std::size_t r = 0; r < mask.runs.size(); ++r) {
    const std::size_t len = mask.runs[r];
    if (r % 2 == 1) {
      for (std::size_t idx = pos; idx < pos + len; ++idx) {
        const int u = static_cast<int>(idx % w);
        const int v = static_cast<int>(idx / w);
        if (u % stride != 0 || v % stride != 0) continue;
        const float d = depth.at(u, v);
        if (!(d > 0.0f)) continue;
        out.points.push_back(pose.Apply(Unproject(u, v, d, frame.intrinsics)));
      }
    }
    pos += len;
  }
  return out;
}

namespace {

double Quantile(std::vector<double>& sorted_values, double q) {
  const double pos = q * static_cast<double>(sorted_values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

}  // namespace

PointSet TrimOutliers(const PointSet& ps, double lo_pct, double hi_pct) {
  if (!(lo_pct >= 0.0) || !(hi_pct >= 0.0) || !(lo_pct + hi_pct < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "trim percentiles need lo, hi >= 0 and lo + hi < 1");
  }
  if (ps.empty() || (lo_pct == 0.0 && hi_pct == 0.0)) return ps;

  std::array<double, 3> lower{}, upper{};
  std::vector<double> axis(ps.size());
  for (int a = 0; a < 3; ++a) {
    for (std::size_t i = 0; i < ps.size(); ++i) axis[i] = ps.points[i][a];
    std::sort(axis.begin(), axis.end());
    lower[a] = Quantile(axis, lo_pct);
    upper[a] = Quantile(axis, 1.0 - hi_pct);
  }

  PointSet out;
  out.provenance = ps.provenance;
  out.points.reserve(ps.size());
  for (const Vec3& p : ps.points) {
    bool keep = true;
    for (int a = 0; a < 3 && keep; ++a) {
      keep = p[a] >= lower[a] && p[a] <= upper[a];
    }
    if (keep) out.points.push_back(p);
  }
  return out;
}

Box3 AabbOf(const std::vector<Vec3>& points) {
  if (points.empty()) {
    throw Error(ErrorKind::kEmptyPointSet, "cannot box an empty point set");
  }
  Vec3 lo = points.front();
  Vec3 hi = points.front();
  for (const Vec3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return Box3::FromCorners(lo, hi);
}

Box3 AabbOf(const PointSet& ps) { return AabbOf(ps.points); }

double BoxIou(const Box3& a, const Box3& b) {
  const Vec3 lo = a.min_corner.cwiseMax(b.min_corner);
  const Vec3 hi = a.max_corner.cwiseMin(b.max_corner);
  const Vec3 overlap = (hi - lo).cwiseMax(0.0);
  const double inter = overlap.x() * overlap.y() * overlap.z();
  const double uni = a.Volume() + b.Volume() - inter;
  if (uni <= 0.0) return a == b ? 1.0 : 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace mvground
