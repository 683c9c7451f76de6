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

#ifndef CRITSCENE__LANEMAP_HPP_
#define CRITSCENE__LANEMAP_HPP_

#include "critscene/error.hpp"
#include "critscene/geometry.hpp"
#include "critscene/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace critscene
{

using LaneId = std::int64_t;

enum class LaneType { Road, Crosswalk };

struct Lane
{
  LaneId lane_id = 0;
  LaneType type = LaneType::Road;
  std::vector<Vec2> centerline;
  double width = 3.5;
  std::vector<LaneId> successors;
  std::optional<LaneId> left_neighbor;
  std::optional<LaneId> right_neighbor;

  // derived: cumulative arc length per centerline vertex
  std::vector<double> arc_length;

  double length() const { return arc_length.empty() ? 0.0 : arc_length.back(); }

  void compute_arc_length()
  {
    arc_length.assign(centerline.size(), 0.0);
    for (size_t k = 1; k < centerline.size(); ++k) {
      arc_length[k] = arc_length[k - 1] + distance(centerline[k - 1], centerline[k]);
    }
  }

  /// Point on the centerline at arc length s (clamped to the lane).
  Vec2 point_at(double s) const
  {
    s = std::clamp(s, 0.0, length());
    auto it = std::upper_bound(arc_length.begin(), arc_length.end(), s);
    size_t k = it == arc_length.begin() ? 0 : static_cast<size_t>(it - arc_length.begin()) - 1;
    k = std::min(k, centerline.size() - 2);
    const double seg = arc_length[k + 1] - arc_length[k];
    const double t = seg > 0.0 ? (s - arc_length[k]) / seg : 0.0;
    return centerline[k] + t * (centerline[k + 1] - centerline[k]);
  }

  double heading_at(double s) const
  {
    s = std::clamp(s, 0.0, length());
    auto it = std::upper_bound(arc_length.begin(), arc_length.end(), s);
    size_t k = it == arc_length.begin() ? 0 : static_cast<size_t>(it - arc_length.begin()) - 1;
    k = std::min(k, centerline.size() - 2);
    const Vec2 dir = centerline[k + 1] - centerline[k];
    return std::atan2(dir.y, dir.x);
  }
};

/// Transversal crossing of two lane centerlines, stored once with lane_a < lane_b.
struct ConflictPoint
{
  LaneId lane_a = 0;
  LaneId lane_b = 0;
  double s_a = 0.0;
  double s_b = 0.0;
  Vec2 point;

  bool involves(LaneId lane) const { return lane == lane_a || lane == lane_b; }
  double s_on(LaneId lane) const { return lane == lane_a ? s_a : s_b; }
  LaneId other(LaneId lane) const { return lane == lane_a ? lane_b : lane_a; }
};

struct FrenetPose
{
  LaneId lane_id = 0;
  double s = 0.0;
  double d = 0.0;  // left of travel direction is positive
};

struct MatchingConfig
{
  double lateral_cutoff = 4.0;                            // m
  double heading_gate = 60.0 * std::numbers::pi / 180.0;  // rad
  double heading_weight = 3.0;                            // m/rad
};

struct TopologyConfig
{
  double lookahead = 150.0;  // m
  int max_depth = 5;         // successor hops
};

class LaneMap
{
public:
  LaneMap() = default;

  explicit LaneMap(std::vector<Lane> lanes, std::vector<ConflictPoint> conflicts = {}, Json meta = Json::object())
  : lanes_(std::move(lanes)), conflicts_(std::move(conflicts)), meta_(std::move(meta))
  {
    std::sort(lanes_.begin(), lanes_.end(), [](const Lane & a, const Lane & b) { return a.lane_id < b.lane_id; });
    for (size_t i = 0; i < lanes_.size(); ++i) {
      auto & lane = lanes_[i];
      if (!index_.emplace(lane.lane_id, i).second) {
        throw Error(ErrorCode::SchemaViolation, "duplicate lane id " + std::to_string(lane.lane_id));
      }
      if (lane.centerline.size() < 2) {
        throw Error(
          ErrorCode::DegenerateCenterline, "lane " + std::to_string(lane.lane_id) + " needs at least 2 points");
      }
      for (size_t k = 1; k < lane.centerline.size(); ++k) {
        if (distance(lane.centerline[k - 1], lane.centerline[k]) <= 0.0) {
          throw Error(
            ErrorCode::DegenerateCenterline,
            "lane " + std::to_string(lane.lane_id) + " has a zero-length segment at point " + std::to_string(k));
        }
      }
      if (!(lane.width > 0.0)) {
        throw Error(ErrorCode::SchemaViolation, "lane " + std::to_string(lane.lane_id) + " width must be > 0");
      }
      lane.compute_arc_length();
    }
    auto require_known = [&](LaneId from, LaneId ref, const char * what) {
      if (!index_.contains(ref)) {
        throw Error(
          ErrorCode::SchemaViolation,
          "lane " + std::to_string(from) + " " + what + " references unknown lane " + std::to_string(ref));
      }
    };
    for (const auto & lane : lanes_) {
      for (LaneId succ : lane.successors) {
        require_known(lane.lane_id, succ, "successor");
      }
      if (lane.left_neighbor) {
        require_known(lane.lane_id, *lane.left_neighbor, "left_neighbor");
        const Lane & other = lanes_[index_.at(*lane.left_neighbor)];
        if (other.right_neighbor != lane.lane_id) {
          throw Error(
            ErrorCode::AsymmetricNeighbor, "lane " + std::to_string(lane.lane_id) + " has left neighbor " +
                                             std::to_string(other.lane_id) + " which does not name it as right neighbor");
        }
      }
      if (lane.right_neighbor) {
        require_known(lane.lane_id, *lane.right_neighbor, "right_neighbor");
        const Lane & other = lanes_[index_.at(*lane.right_neighbor)];
        if (other.left_neighbor != lane.lane_id) {
          throw Error(
            ErrorCode::AsymmetricNeighbor, "lane " + std::to_string(lane.lane_id) + " has right neighbor " +
                                             std::to_string(other.lane_id) + " which does not name it as left neighbor");
        }
      }
    }
  }

  const std::vector<Lane> & lanes() const { return lanes_; }
  const std::vector<ConflictPoint> & conflicts() const { return conflicts_; }
  const Json & meta() const { return meta_; }

  const Lane * find_lane(LaneId id) const
  {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &lanes_[it->second];
  }

  const Lane & lane(LaneId id) const
  {
    const Lane * l = find_lane(id);
    if (!l) {
      throw Error(ErrorCode::SchemaViolation, "unknown lane " + std::to_string(id));
    }
    return *l;
  }

  /// Conflicts between two lanes, queryable in either argument order.
  std::vector<const ConflictPoint *> conflicts_between(LaneId x, LaneId y) const
  {
    std::vector<const ConflictPoint *> out;
    const LaneId a = std::min(x, y);
    const LaneId b = std::max(x, y);
    for (const auto & c : conflicts_) {
      if (c.lane_a == a && c.lane_b == b) {
        out.push_back(&c);
      }
    }
    return out;
  }

  bool are_neighbors(LaneId x, LaneId y) const
  {
    const Lane * lx = find_lane(x);
    return lx && (lx->left_neighbor == y || lx->right_neighbor == y);
  }

private:
  std::vector<Lane> lanes_;
  std::vector<ConflictPoint> conflicts_;
  Json meta_ = Json::object();
  std::map<LaneId, size_t> index_;
};

// ---------------------------------------------------------------------------
// Canonical lane-map JSON
// ---------------------------------------------------------------------------

inline constexpr int kLaneMapFormatVersion = 1;

inline LaneMap lane_map_from_json(const Json & doc)
{
  auto fail = [](const std::string & msg) { throw Error(ErrorCode::SchemaViolation, msg); };
  if (!doc.is_object()) {
    fail("lane map must be a JSON object");
  }
  if (doc.contains("version") && doc["version"] != kLaneMapFormatVersion) {
    fail("unsupported lane map version");
  }
  if (!doc.contains("lanes") || !doc["lanes"].is_array()) {
    fail("lane map requires a 'lanes' array");
  }
  Json meta = Json::object();
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object()) {
      fail("'meta' must be an object");
    }
    meta = doc["meta"];
  }
  std::vector<Lane> lanes;
  try {
    for (const auto & item : doc["lanes"]) {
      Lane lane;
      lane.lane_id = item.at("id").get<LaneId>();
      const std::string where = "lane " + std::to_string(lane.lane_id);
      if (item.contains("type")) {
        const auto type = item["type"].get<std::string>();
        if (type == "road") {
          lane.type = LaneType::Road;
        } else if (type == "crosswalk") {
          lane.type = LaneType::Crosswalk;
        } else {
          fail(where + ": unknown type '" + type + "'");
        }
      }
      if (item.contains("width")) {
        lane.width = item["width"].get<double>();
      }
      const auto & pts = item.at("centerline");
      if (!pts.is_array()) {
        fail(where + ": centerline must be an array");
      }
      for (const auto & p : pts) {
        if (!p.is_array() || p.size() < 2 || !p[0].is_number() || !p[1].is_number()) {
          fail(where + ": centerline points must be [x, y]");
        }
        lane.centerline.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      if (item.contains("successors")) {
        lane.successors = item["successors"].get<std::vector<LaneId>>();
      }
      if (item.contains("left_neighbor") && !item["left_neighbor"].is_null()) {
        lane.left_neighbor = item["left_neighbor"].get<LaneId>();
      }
      if (item.contains("right_neighbor") && !item["right_neighbor"].is_null()) {
        lane.right_neighbor = item["right_neighbor"].get<LaneId>();
      }
      lanes.push_back(std::move(lane));
    }
  } catch (const Json::exception & e) {
    fail(std::string("lane map: ") + e.what());
  }
  return LaneMap(std::move(lanes), {}, std::move(meta));
}

/// Parses and validates a lane map (conflicts are not yet computed).
inline LaneMap parse_lane_map(const std::string & text)
{
  return lane_map_from_json(parse_json_text(text, ErrorCode::SchemaViolation, "lane map"));
}

inline Json lane_map_to_json(const LaneMap & map)
{
  Json doc;
  doc["format"] = "critscene.lanemap";
  doc["version"] = kLaneMapFormatVersion;
  doc["meta"] = map.meta();
  Json lanes = Json::array();
  for (const auto & lane : map.lanes()) {
    Json l;
    l["id"] = lane.lane_id;
    l["type"] = lane.type == LaneType::Road ? "road" : "crosswalk";
    l["width"] = json_number(lane.width);
    Json pts = Json::array();
    for (const auto & p : lane.centerline) {
      pts.push_back(Json::array({json_number(p.x), json_number(p.y)}));
    }
    l["centerline"] = std::move(pts);
    l["successors"] = lane.successors;
    l["left_neighbor"] = json_optional(lane.left_neighbor);
    l["right_neighbor"] = json_optional(lane.right_neighbor);
    lanes.push_back(std::move(l));
  }
  doc["lanes"] = std::move(lanes);
  Json conflicts = Json::array();
  for (const auto & c : map.conflicts()) {
    conflicts.push_back(
      {{"lane_a", c.lane_a},
       {"lane_b", c.lane_b},
       {"s_a", json_number(c.s_a)},
       {"s_b", json_number(c.s_b)},
       {"point", Json::array({json_number(c.point.x), json_number(c.point.y)})}});
  }
  doc["conflicts"] = std::move(conflicts);
  return doc;
}

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

namespace detail
{

struct Bounds
{
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void add(Vec2 p)
  {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  bool overlaps(const Bounds & o, double pad) const
  {
    return lo.x <= o.hi.x + pad && o.lo.x <= hi.x + pad && lo.y <= o.hi.y + pad && o.lo.y <= hi.y + pad;
  }
};

inline bool is_lane_endpoint(const Lane & lane, Vec2 p, double tol)
{
  return distance(lane.centerline.front(), p) <= tol || distance(lane.centerline.back(), p) <= tol;
}

}  // namespace detail

/// Finds every transversal crossing between lane centerlines. Points shared
/// as endpoints by both lanes (successor links, forks, merges) are not crossings.
inline LaneMap build_conflicts(const LaneMap & map, double parallel_eps = 1e-9)
{
  constexpr double kSamePointTol = 1e-6;
  const auto & lanes = map.lanes();
  std::vector<detail::Bounds> bounds(lanes.size());
  for (size_t i = 0; i < lanes.size(); ++i) {
    for (const auto & p : lanes[i].centerline) {
      bounds[i].add(p);
    }
  }

  std::vector<ConflictPoint> conflicts;
  for (size_t i = 0; i < lanes.size(); ++i) {
    for (size_t j = i + 1; j < lanes.size(); ++j) {
      if (!bounds[i].overlaps(bounds[j], kSamePointTol)) {
        continue;
      }
      const Lane & a = lanes[i];
      const Lane & b = lanes[j];
      std::vector<ConflictPoint> pair_hits;
      for (size_t ka = 0; ka + 1 < a.centerline.size(); ++ka) {
        for (size_t kb = 0; kb + 1 < b.centerline.size(); ++kb) {
          const auto hit = intersect_segments(
            a.centerline[ka], a.centerline[ka + 1], b.centerline[kb], b.centerline[kb + 1], parallel_eps);
          if (!hit) {
            continue;
          }
          if (
            detail::is_lane_endpoint(a, hit->point, kSamePointTol) &&
            detail::is_lane_endpoint(b, hit->point, kSamePointTol)) {
            continue;
          }
          const bool duplicate = std::any_of(pair_hits.begin(), pair_hits.end(), [&](const ConflictPoint & c) {
            return distance(c.point, hit->point) <= kSamePointTol;
          });
          if (duplicate) {
            continue;
          }
          ConflictPoint c;
          c.lane_a = a.lane_id;
          c.lane_b = b.lane_id;
          c.s_a = a.arc_length[ka] + hit->t * (a.arc_length[ka + 1] - a.arc_length[ka]);
          c.s_b = b.arc_length[kb] + hit->u * (b.arc_length[kb + 1] - b.arc_length[kb]);
          c.point = hit->point;
          pair_hits.push_back(c);
        }
      }
      std::sort(pair_hits.begin(), pair_hits.end(), [](const auto & x, const auto & y) { return x.s_a < y.s_a; });
      conflicts.insert(conflicts.end(), pair_hits.begin(), pair_hits.end());
    }
  }
  return LaneMap(lanes, std::move(conflicts), map.meta());
}

/// Parses, validates and enriches with conflict points.
inline LaneMap load_lane_map(const std::string & text) { return build_conflicts(parse_lane_map(text)); }

// ---------------------------------------------------------------------------
// Frenet projection
// ---------------------------------------------------------------------------

struct LaneProjection
{
  double s = 0.0;
  double d = 0.0;
  double distance = std::numeric_limits<double>::infinity();
  double tangent_heading = 0.0;
};

/// Projection of a point onto one centerline segment.
inline LaneProjection project_onto_segment(const Lane & lane, size_t k, Vec2 p)
{
  const Vec2 a = lane.centerline[k];
  const Vec2 b = lane.centerline[k + 1];
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  const Vec2 foot = a + t * ab;
  LaneProjection proj;
  proj.distance = distance(foot, p);
  const double side = cross(ab, p - a);
  proj.d = side >= 0.0 ? proj.distance : -proj.distance;
  proj.s = lane.arc_length[k] + t * (lane.arc_length[k + 1] - lane.arc_length[k]);
  proj.tangent_heading = std::atan2(ab.y, ab.x);
  return proj;
}

/// Nearest-point projection onto a single lane, with no gating.
inline LaneProjection project_onto_lane(const Lane & lane, Vec2 p)
{
  LaneProjection best;
  for (size_t k = 0; k + 1 < lane.centerline.size(); ++k) {
    const auto proj = project_onto_segment(lane, k, p);
    if (proj.distance < best.distance) {
      best = proj;
    }
  }
  return best;
}

/// Matches a pose to the lane segment minimizing
/// `lateral distance + heading_weight * heading misalignment`, subject to the
/// lateral cutoff and heading gate. `accept` filters candidate lanes.
template <typename LaneFilter>
FrenetPose project_to_frenet(
  Vec2 position, double yaw, const LaneMap & map, const MatchingConfig & config, LaneFilter && accept)
{
  std::optional<FrenetPose> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto & lane : map.lanes()) {
    if (!accept(lane)) {
      continue;
    }
    for (size_t k = 0; k + 1 < lane.centerline.size(); ++k) {
      const auto proj = project_onto_segment(lane, k, position);
      if (proj.distance > config.lateral_cutoff) {
        continue;
      }
      const double misalignment = angle_diff(yaw, proj.tangent_heading);
      if (misalignment > config.heading_gate) {
        continue;
      }
      const double cost = proj.distance + config.heading_weight * misalignment;
      if (cost < best_cost) {
        best_cost = cost;
        best = FrenetPose{lane.lane_id, proj.s, proj.d};
      }
    }
  }
  if (!best) {
    throw Error(
      ErrorCode::NoLaneMatch, "no lane within " + std::to_string(config.lateral_cutoff) + " m of (" +
                                std::to_string(position.x) + ", " + std::to_string(position.y) + ")");
  }
  return *best;
}

inline FrenetPose project_to_frenet(
  Vec2 position, double yaw, const LaneMap & map, const MatchingConfig & config = {})
{
  return project_to_frenet(position, yaw, map, config, [](const Lane &) { return true; });
}

/// Center-to-center distance travelling forward from `from` to `to` along the
/// successor graph, or nullopt when `to` is not reachable within the horizon.
inline std::optional<double> forward_distance(
  const FrenetPose & from, const FrenetPose & to, const LaneMap & map, const TopologyConfig & topo = {})
{
  if (from.lane_id == to.lane_id) {
    return to.s >= from.s ? std::optional<double>(to.s - from.s) : std::nullopt;
  }
  const Lane * start = map.find_lane(from.lane_id);
  if (!start) {
    return std::nullopt;
  }
  std::optional<double> best;
  // (lane, distance travelled up to the lane's start, depth)
  struct Frame
  {
    LaneId lane;
    double travelled;
    int depth;
  };
  std::vector<Frame> stack;
  const double to_end = start->length() - from.s;
  for (LaneId succ : start->successors) {
    stack.push_back({succ, to_end, 1});
  }
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.travelled > topo.lookahead) {
      continue;
    }
    if (f.lane == to.lane_id) {
      const double dist = f.travelled + to.s;
      if (dist <= topo.lookahead && (!best || dist < *best)) {
        best = dist;
      }
      continue;
    }
    if (f.depth >= topo.max_depth) {
      continue;
    }
    const Lane & lane = map.lane(f.lane);
    for (LaneId succ : lane.successors) {
      stack.push_back({succ, f.travelled + lane.length(), f.depth + 1});
    }
  }
  return best;
}

/// Signed center offset of `b` relative to `a` along the lane graph
/// (positive when `b` is ahead of `a`), or nullopt when unconnected.
inline std::optional<double> longitudinal_offset(
  const FrenetPose & a, const FrenetPose & b, const LaneMap & map, const TopologyConfig & topo = {})
{
  if (a.lane_id == b.lane_id) {
    return b.s - a.s;
  }
  if (auto ahead = forward_distance(a, b, map, topo)) {
    return *ahead;
  }
  if (auto behind = forward_distance(b, a, map, topo)) {
    return -*behind;
  }
  return std::nullopt;
}

/// Bumper-to-bumper gap along the lane graph, clamped at zero.
inline std::optional<double> gap_along_lane(
  const FrenetPose & a, const FrenetPose & b, const LaneMap & map, double half_length_a, double half_length_b,
  const TopologyConfig & topo = {})
{
  const auto offset = longitudinal_offset(a, b, map, topo);
  if (!offset) {
    return std::nullopt;
  }
  return std::max(0.0, std::abs(*offset) - half_length_a - half_length_b);
}

}  // namespace critscene

#endif  // CRITSCENE__LANEMAP_HPP_
