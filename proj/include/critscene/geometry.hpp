// Copyright 2026 The critscene Authors
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

#ifndef CRITSCENE__GEOMETRY_HPP_
#define CRITSCENE__GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace critscene
{

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

struct Vec3
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3 &, const Vec3 &) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, two_pi);
  if (wrapped <= -std::numbers::pi) {
    wrapped += two_pi;
  }
  return wrapped;
}

/// Absolute angular difference in [0, pi].
inline double angle_diff(double a, double b) { return std::abs(normalize_angle(a - b)); }

struct SegmentHit
{
  double t = 0.0;  // parameter on the first segment
  double u = 0.0;  // parameter on the second segment
  Vec2 point;
};

/// Transversal intersection of segments [p0,p1] and [q0,q1]. Segments whose
/// directions are parallel within `parallel_eps` (relative to their lengths)
/// never intersect, including collinear overlaps.
inline std::optional<SegmentHit> intersect_segments(
  Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1, double parallel_eps = 1e-9)
{
  const Vec2 r = p1 - p0;
  const Vec2 s = q1 - q0;
  const double denom = cross(r, s);
  if (std::abs(denom) <= parallel_eps * norm(r) * norm(s)) {
    return std::nullopt;
  }
  const Vec2 qp = q0 - p0;
  const double t = cross(qp, s) / denom;
  const double u = cross(qp, r) / denom;
  constexpr double slack = 1e-12;
  if (t < -slack || t > 1.0 + slack || u < -slack || u > 1.0 + slack) {
    return std::nullopt;
  }
  SegmentHit hit;
  hit.t = std::clamp(t, 0.0, 1.0);
  hit.u = std::clamp(u, 0.0, 1.0);
  hit.point = p0 + hit.t * r;
  return hit;
}

}  // namespace critscene

#endif  // CRITSCENE__GEOMETRY_HPP_
