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

#ifndef CRITSCENE__SCENEGRAPH_HPP_
#define CRITSCENE__SCENEGRAPH_HPP_

#include "critscene/error.hpp"
#include "critscene/ingest.hpp"
#include "critscene/json_util.hpp"
#include "critscene/lanemap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace critscene
{

enum class RelationKind { Longitudinal, Lateral, Intersecting };

inline std::string_view to_string(RelationKind kind)
{
  switch (kind) {
    case RelationKind::Longitudinal:
      return "Longitudinal";
    case RelationKind::Lateral:
      return "Lateral";
    case RelationKind::Intersecting:
      return "Intersecting";
  }
  return "Longitudinal";
}

struct GraphConfig
{
  MatchingConfig matching;
  TopologyConfig topology;
  double lateral_buffer = 5.0;  // m added to the summed half lengths
};

/// Conflict point as seen by one edge: center distances of both actors to it.
struct ConflictRef
{
  ConflictPoint point;
  double from_distance = 0.0;
  double to_distance = 0.0;
};

struct RelationEdge
{
  TrackId from = 0;
  TrackId to = 0;
  RelationKind kind = RelationKind::Longitudinal;
  std::optional<double> gap;  // bumper gap, longitudinal edges only
  std::optional<ConflictRef> conflict;
};

struct GraphNode
{
  TrackedObject object;
  ObjectState state;
  std::optional<FrenetPose> pose;  // absent when the object matched no lane
};

struct SceneGraph
{
  TimestampMs timestamp = 0;
  std::vector<GraphNode> nodes;  // ordered by track id
  std::vector<RelationEdge> edges;

  const GraphNode * find_node(TrackId id) const
  {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id, [](const GraphNode & n, TrackId value) {
      return n.object.track_id < value;
    });
    return it == nodes.end() || it->object.track_id != id ? nullptr : &*it;
  }
};

namespace detail
{

/// Lanes reachable from a pose with the offset of each lane's start relative
/// to the actor (negative for the actor's own lane).
inline std::map<LaneId, double> reachable_lanes(const FrenetPose & pose, const LaneMap & map, const TopologyConfig & topo)
{
  std::map<LaneId, double> reach;
  struct Frame
  {
    LaneId lane;
    double offset;
    int depth;
  };
  std::vector<Frame> stack{{pose.lane_id, -pose.s, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.offset > topo.lookahead) {
      continue;
    }
    auto [it, inserted] = reach.emplace(f.lane, f.offset);
    if (!inserted) {
      if (f.offset >= it->second) {
        continue;
      }
      it->second = f.offset;
    }
    if (f.depth >= topo.max_depth) {
      continue;
    }
    const Lane & lane = map.lane(f.lane);
    for (LaneId succ : lane.successors) {
      stack.push_back({succ, f.offset + lane.length(), f.depth + 1});
    }
  }
  return reach;
}

/// Closest conflict ahead of both actors, by summed distance.
inline std::optional<ConflictRef> shared_conflict_ahead(
  const FrenetPose & a, const FrenetPose & b, const LaneMap & map, const TopologyConfig & topo)
{
  if (map.conflicts().empty()) {
    return std::nullopt;
  }
  const auto reach_a = reachable_lanes(a, map, topo);
  const auto reach_b = reachable_lanes(b, map, topo);
  std::optional<ConflictRef> best;
  for (const auto & c : map.conflicts()) {
    for (int orientation = 0; orientation < 2; ++orientation) {
      const LaneId lane_for_a = orientation == 0 ? c.lane_a : c.lane_b;
      const LaneId lane_for_b = c.other(lane_for_a);
      const auto ia = reach_a.find(lane_for_a);
      const auto ib = reach_b.find(lane_for_b);
      if (ia == reach_a.end() || ib == reach_b.end()) {
        continue;
      }
      const double da = ia->second + c.s_on(lane_for_a);
      const double db = ib->second + c.s_on(lane_for_b);
      if (da <= 0.0 || db <= 0.0 || da > topo.lookahead || db > topo.lookahead) {
        continue;
      }
      if (!best || da + db < best->from_distance + best->to_distance) {
        best = ConflictRef{c, da, db};
      }
    }
  }
  return best;
}

inline bool accepts_lane(ObjectClass cls, const Lane & lane)
{
  return cls == ObjectClass::Pedestrian ? lane.type == LaneType::Crosswalk : lane.type == LaneType::Road;
}

}  // namespace detail

/// Builds the directed relation graph of one scene. Objects that match no
/// lane stay in the graph as isolated nodes.
inline SceneGraph build_scene_graph(const Scene & scene, const LaneMap & map, const GraphConfig & config = {})
{
  SceneGraph graph;
  graph.timestamp = scene.timestamp;
  for (const auto & obj : scene.objects) {
    GraphNode node{obj.object, obj.state, std::nullopt};
    try {
      node.pose = project_to_frenet(
        obj.state.position(), obj.state.yaw, map, config.matching,
        [cls = obj.object.cls](const Lane & lane) { return detail::accepts_lane(cls, lane); });
    } catch (const Error & e) {
      if (e.code() != ErrorCode::NoLaneMatch) {
        throw;
      }
    }
    graph.nodes.push_back(std::move(node));
  }
  std::sort(graph.nodes.begin(), graph.nodes.end(), [](const GraphNode & a, const GraphNode & b) {
    return a.object.track_id < b.object.track_id;
  });

  for (size_t i = 0; i < graph.nodes.size(); ++i) {
    const GraphNode & a = graph.nodes[i];
    if (!a.pose) {
      continue;
    }
    for (size_t j = i + 1; j < graph.nodes.size(); ++j) {
      const GraphNode & b = graph.nodes[j];
      if (!b.pose) {
        continue;
      }
      const TrackId id_a = a.object.track_id;
      const TrackId id_b = b.object.track_id;
      const bool both_vehicles = is_vehicle(a.object.cls) && is_vehicle(b.object.cls);

      if (both_vehicles) {
        if (const auto offset = longitudinal_offset(*a.pose, *b.pose, map, config.topology)) {
          const double gap = std::max(0.0, std::abs(*offset) - a.object.half_length() - b.object.half_length());
          // ties in s resolve to the lower track id following
          const bool b_leads = *offset >= 0.0;
          graph.edges.push_back(
            {b_leads ? id_a : id_b, b_leads ? id_b : id_a, RelationKind::Longitudinal, gap, std::nullopt});
        }

        if (map.are_neighbors(a.pose->lane_id, b.pose->lane_id)) {
          const Lane & lane_a = map.lane(a.pose->lane_id);
          const double s_b_on_a = project_onto_lane(lane_a, b.state.position()).s;
          const double reach = a.object.half_length() + b.object.half_length() + config.lateral_buffer;
          if (std::abs(a.pose->s - s_b_on_a) <= reach) {
            graph.edges.push_back({id_a, id_b, RelationKind::Lateral, std::nullopt, std::nullopt});
            graph.edges.push_back({id_b, id_a, RelationKind::Lateral, std::nullopt, std::nullopt});
          }
        }
      }

      if (a.pose->lane_id != b.pose->lane_id) {
        if (const auto conflict = detail::shared_conflict_ahead(*a.pose, *b.pose, map, config.topology)) {
          graph.edges.push_back({id_a, id_b, RelationKind::Intersecting, std::nullopt, *conflict});
          ConflictRef mirrored{conflict->point, conflict->to_distance, conflict->from_distance};
          graph.edges.push_back({id_b, id_a, RelationKind::Intersecting, std::nullopt, mirrored});
        }
      }
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end(), [](const RelationEdge & x, const RelationEdge & y) {
    return std::tie(x.from, x.to, x.kind) < std::tie(y.from, y.to, y.kind);
  });
  return graph;
}

inline Json conflict_to_json(const ConflictRef & c)
{
  return {
    {"lane_a", c.point.lane_a},
    {"lane_b", c.point.lane_b},
    {"s_a", json_number(c.point.s_a)},
    {"s_b", json_number(c.point.s_b)},
    {"point", Json::array({json_number(c.point.point.x), json_number(c.point.point.y)})},
    {"from_distance", json_number(c.from_distance)},
    {"to_distance", json_number(c.to_distance)}};
}

inline Json scene_graph_to_json(const SceneGraph & graph)
{
  Json doc;
  doc["timestamp"] = graph.timestamp;
  Json nodes = Json::array();
  for (const auto & n : graph.nodes) {
    Json node;
    node["track_id"] = n.object.track_id;
    node["class"] = std::string(to_string(n.object.cls));
    node["length"] = json_number(n.object.length);
    node["width"] = json_number(n.object.width);
    node["x"] = json_number(n.state.x);
    node["y"] = json_number(n.state.y);
    node["yaw"] = json_number(n.state.yaw);
    node["speed"] = json_number(n.state.speed);
    if (n.pose) {
      node["frenet"] = {{"lane_id", n.pose->lane_id}, {"s", json_number(n.pose->s)}, {"d", json_number(n.pose->d)}};
    } else {
      node["frenet"] = nullptr;
    }
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const auto & e : graph.edges) {
    Json edge;
    edge["from"] = e.from;
    edge["to"] = e.to;
    edge["kind"] = std::string(to_string(e.kind));
    edge["gap"] = json_optional(e.gap);
    edge["conflict"] = e.conflict ? conflict_to_json(*e.conflict) : Json(nullptr);
    edges.push_back(std::move(edge));
  }
  doc["edges"] = std::move(edges);
  return doc;
}

}  // namespace critscene

#endif  // CRITSCENE__SCENEGRAPH_HPP_
