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

#ifndef MVGROUND_GEOMETRY_HPP_
#define MVGROUND_GEOMETRY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "mvground/mask.hpp"
#include "mvground/scene.hpp"

namespace mvground {

struct PointSet {
  std::vector<Vec3> points;
  std::optional<std::string> provenance;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

// Pixel coordinates plus metric depth along the optical axis.
struct PixelDepth {
  double u = 0, v = 0, depth = 0;
};

// Pinhole inverse: ((u - cx) d / fx, (v - cy) d / fy, d) in the camera frame.
// Throws InvalidDepth when d <= 0 or non-finite.
Vec3 Unproject(double u, double v, double depth, const Intrinsics& k);

// Forward pinhole projection of a camera-frame point with z > 0.
PixelDepth Project(const Vec3& p_cam, const Intrinsics& k);

// Lifts the foreground pixels of `mask` lying on the stride grid to world
// coordinates. Pixels without valid depth are skipped.
PointSet LiftMask(const Mask2D& mask, const Frame& frame, int stride = 1);

struct TrimPercentiles {
  double lo = 0.02;
  double hi = 0.02;
};

// Per-axis quantile trimming; a point survives only if it lies within
// [q(lo), q(1 - hi)] on every axis. Quantiles interpolate linearly between
// order statistics.
PointSet TrimOutliers(const PointSet& ps, double lo_pct, double hi_pct);
inline PointSet TrimOutliers(const PointSet& ps, TrimPercentiles pct) {
  return TrimOutliers(ps, pct.lo, pct.hi);
}

// Throws EmptyPointSet on empty input.
Box3 AabbOf(const PointSet& ps);
Box3 AabbOf(const std::vector<Vec3>& points);

// Volume IoU of two axis-aligned boxes, in [0, 1]. Two identical degenerate
// boxes have IoU 1; any other zero-volume union gives 0.
double BoxIou(const Box3& a, const Box3& b);

}  // namespace mvground

#endif  // MVGROUND_GEOMETRY_HPP_
