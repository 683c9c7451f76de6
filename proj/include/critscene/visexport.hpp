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

#ifndef CRITSCENE__VISEXPORT_HPP_
#define CRITSCENE__VISEXPORT_HPP_

#include "critscene/analysis.hpp"
#include "critscene/criticality.hpp"
#include "critscene/error.hpp"
#include "critscene/geometry.hpp"
#include "critscene/ingest.hpp"
#include "critscene/json_util.hpp"
#include "critscene/scenegraph.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace critscene
{

using Color = std::array<double, 4>;  // rgba in [0, 1]

inline constexpr Color kRampLight{1.0, 0.9, 0.2, 1.0};
inline constexpr Color kRampDark{0.4, 0.0, 0.0, 1.0};
inline constexpr Color kLinkColor{1.0, 1.0, 1.0, 1.0};
inline constexpr Color kConnectorColor{0.6, 0.6, 0.6, 1.0};

/// Criticality ramp: 0 is the light end, 1 the dark end.
inline Color criticality_color(double normalized)
{
  const double t = std::clamp(normalized, 0.0, 1.0);
  Color c;
  for (size_t i = 0; i < 4; ++i) {
    c[i] = kRampLight[i] + t * (kRampDark[i] - kRampLight[i]);
  }
  return c;
}

inline Color class_color(ObjectClass cls)
{
  switch (cls) {
    case ObjectClass::Car:
      return {0.2, 0.45, 0.85, 1.0};
    case ObjectClass::Truck:
      return {0.35, 0.3, 0.6, 1.0};
    case ObjectClass::Bike:
      return {0.2, 0.7, 0.4, 1.0};
    case ObjectClass::Pedestrian:
      return {0.9, 0.5, 0.1, 1.0};
  }
  return {0.5, 0.5, 0.5, 1.0};
}

struct BoxPrimitive
{
  TrackId track_id = 0;
  Vec3 center;
  double yaw = 0.0;
  Vec3 extent;  // length, width, height
  Color color{};
};

struct SpherePrimitive
{
  TrackId from = 0;
  TrackId to = 0;
  Vec3 center;
  double radius = 0.6;
  double value = 0.0;       // raw measure value
  double normalized = 0.0;  // position on the color ramp
  Color color{};
};

struct PolylinePrimitive
{
  TrackId track_id = 0;
  std::string role;  // "elevated" | "ground"
  std::vector<Vec3> points;
  Color color{};
  double width = 0.1;
};

struct SegmentPrimitive
{
  std::string role;  // "link" | "connector"
  Vec3 a;
  Vec3 b;
  Color color{};
  std::optional<TrackId> track_id;
};

using Primitive = std::variant<BoxPrimitive, SpherePrimitive, PolylinePrimitive, SegmentPrimitive>;

enum class VisKind { SceneGraphView, SpaceTimeCube };

struct VisDocument
{
  VisKind kind = VisKind::SceneGraphView;
  std::vector<Primitive> primitives;
  Json meta = Json::object();

  template <typename T>
  std::vector<const T *> all() const
  {
    std::vector<const T *> out;
    for (const auto & p : primitives) {
      if (const auto * v = std::get_if<T>(&p)) {
        out.push_back(v);
      }
    }
    return out;
  }
};

enum class ColorNormalization { Range, Absolute };

struct SceneViewOptions
{
  ColorNormalization normalization = ColorNormalization::Range;
  double absolute_max = 1.0;  // value mapped to the dark end in Absolute mode
  double sphere_radius = 0.6;
  double sphere_height = 1.0;
};

/// Actor boxes plus one sphere (and two link segments) per record strictly
/// above `threshold`, placed at the pair midpoint and shaded by criticality.
inline VisDocument export_scene_graph_view(
  const SceneGraph & graph, const std::vector<CriticalityRecord> & records, double threshold, Measure measure,
  const SceneViewOptions & options = {})
{
  if (!(threshold >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "threshold must be >= 0");
  }
  VisDocument doc;
  doc.kind = VisKind::SceneGraphView;
  doc.meta = {
    {"timestamp", graph.timestamp},
    {"measure", std::string(to_string(measure))},
    {"threshold", json_number(threshold)},
    {"normalization", options.normalization == ColorNormalization::Range ? "range" : "absolute"}};

  for (const auto & n : graph.nodes) {
    const double height = default_extent(n.object.cls).height;
    doc.primitives.push_back(BoxPrimitive{
      n.object.track_id,
      {n.state.x, n.state.y, 0.5 * height},
      n.state.yaw,
      {n.object.length, n.object.width, height},
      class_color(n.object.cls)});
  }

  struct Critical
  {
    const GraphNode * from;
    const GraphNode * to;
    double value;
  };
  std::vector<Critical> critical;
  for (const auto & r : records) {
    if (r.timestamp != graph.timestamp) {
      throw Error(
        ErrorCode::MismatchedTimestamp, "record at t=" + std::to_string(r.timestamp) + " for graph at t=" +
                                          std::to_string(graph.timestamp));
    }
    const auto v = measure_value(r, measure);
    if (!v || !(*v > threshold)) {
      continue;
    }
    const GraphNode * from = graph.find_node(r.from);
    const GraphNode * to = graph.find_node(r.to);
    if (!from || !to) {
      continue;
    }
    critical.push_back({from, to, *v});
  }

  double lo = 0.0;
  double hi = 0.0;
  if (!critical.empty()) {
    lo = hi = critical.front().value;
    for (const auto & c : critical) {
      lo = std::min(lo, c.value);
      hi = std::max(hi, c.value);
    }
  }
  for (const auto & c : critical) {
    double normalized = 1.0;
    if (options.normalization == ColorNormalization::Absolute) {
      normalized = options.absolute_max > 0.0 ? std::clamp(c.value / options.absolute_max, 0.0, 1.0) : 1.0;
    } else if (hi > lo) {
      normalized = (c.value - lo) / (hi - lo);
    }
    const Vec3 a{c.from->state.x, c.from->state.y, options.sphere_height};
    const Vec3 b{c.to->state.x, c.to->state.y, options.sphere_height};
    const Vec3 mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y), options.sphere_height};
    doc.primitives.push_back(SpherePrimitive{
      c.from->object.track_id, c.to->object.track_id, mid, options.sphere_radius, c.value, normalized,
      criticality_color(normalized)});
    doc.primitives.push_back(SegmentPrimitive{"link", a, mid, kLinkColor, c.from->object.track_id});
    doc.primitives.push_back(SegmentPrimitive{"link", b, mid, kLinkColor, c.to->object.track_id});
  }
  return doc;
}

/// Space-time cube over [t0, t1]: per track an elevated polyline with
/// z = (t - t0) * time_scale / 1000, its ground projection, and a vertical
/// connector every `stride` frames of that track.
inline VisDocument export_space_time_cube(
  const Scenario & scenario, TimestampMs t0, TimestampMs t1, int stride = 1, double time_scale = 1.0)
{
  if (stride < 1) {
    throw Error(ErrorCode::InvalidParameter, "stride must be >= 1");
  }
  if (!(time_scale > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "time_scale must be > 0");
  }
  const auto & ts = scenario.timestamps();
  const auto first_in = std::lower_bound(ts.begin(), ts.end(), t0);
  if (t0 >= t1 || first_in == ts.end() || *first_in > t1) {
    throw Error(
      ErrorCode::EmptyWindow, "window [" + std::to_string(t0) + ", " + std::to_string(t1) + "] contains no frames");
  }

  VisDocument doc;
  doc.kind = VisKind::SpaceTimeCube;
  doc.meta = {
    {"t0", t0}, {"t1", t1}, {"stride", stride}, {"time_scale", json_number(time_scale)}};

  for (const auto & track : scenario.tracks()) {
    PolylinePrimitive elevated{track.object.track_id, "elevated", {}, class_color(track.object.cls), 0.1};
    PolylinePrimitive ground{track.object.track_id, "ground", {}, class_color(track.object.cls), 0.1};
    ground.color[3] = 0.5;
    std::vector<SegmentPrimitive> connectors;
    size_t k = 0;
    for (const auto & s : track.states) {
      if (s.timestamp < t0 || s.timestamp > t1) {
        continue;
      }
      const double z = static_cast<double>(s.timestamp - t0) * time_scale / 1000.0;
      const Vec3 up{s.x, s.y, z};
      const Vec3 down{s.x, s.y, 0.0};
      elevated.points.push_back(up);
      ground.points.push_back(down);
      if (k % static_cast<size_t>(stride) == 0) {
        connectors.push_back(SegmentPrimitive{"connector", up, down, kConnectorColor, track.object.track_id});
      }
      ++k;
    }
    if (elevated.points.empty()) {
      continue;
    }
    doc.primitives.push_back(std::move(elevated));
    doc.primitives.push_back(std::move(ground));
    for (auto & c : connectors) {
      doc.primitives.push_back(std::move(c));
    }
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace detail
{

inline Json vec3_json(const Vec3 & v) { return Json::array({json_number(v.x), json_number(v.y), json_number(v.z)}); }

inline Json color_json(const Color & c)
{
  return Json::array({json_number(c[0]), json_number(c[1]), json_number(c[2]), json_number(c[3])});
}

struct PrimitiveToJson
{
  Json operator()(const BoxPrimitive & b) const
  {
    return {
      {"type", "box"},         {"track_id", b.track_id}, {"center", vec3_json(b.center)},
      {"yaw", json_number(b.yaw)}, {"extent", vec3_json(b.extent)}, {"color", color_json(b.color)}};
  }
  Json operator()(const SpherePrimitive & s) const
  {
    return {
      {"type", "sphere"},
      {"pair", Json::array({s.from, s.to})},
      {"center", vec3_json(s.center)},
      {"radius", json_number(s.radius)},
      {"value", json_number(s.value)},
      {"normalized", json_number(s.normalized)},
      {"color", color_json(s.color)}};
  }
  Json operator()(const PolylinePrimitive & p) const
  {
    Json pts = Json::array();
    for (const auto & v : p.points) {
      pts.push_back(vec3_json(v));
    }
    return {
      {"type", "polyline"}, {"track_id", p.track_id},          {"role", p.role},
      {"points", std::move(pts)}, {"color", color_json(p.color)}, {"width", json_number(p.width)}};
  }
  Json operator()(const SegmentPrimitive & s) const
  {
    return {
      {"type", "segment"},
      {"role", s.role},
      {"track_id", json_optional(s.track_id)},
      {"a", vec3_json(s.a)},
      {"b", vec3_json(s.b)},
      {"color", color_json(s.color)}};
  }
};

}  // namespace detail

inline constexpr int kVisDocumentVersion = 1;

inline Json vis_document_to_json(const VisDocument & doc)
{
  Json j;
  j["format"] = "critscene.visdocument";
  j["version"] = kVisDocumentVersion;
  j["kind"] = doc.kind == VisKind::SceneGraphView ? "SceneGraphView" : "SpaceTimeCube";
  j["meta"] = doc.meta;
  Json prims = Json::array();
  for (const auto & p : doc.primitives) {
    prims.push_back(std::visit(detail::PrimitiveToJson{}, p));
  }
  j["primitives"] = std::move(prims);
  return j;
}

/// Flat CSV of cube polylines: track_id,role,index,x,y,z.
inline std::string cube_to_csv(const VisDocument & doc)
{
  std::ostringstream out;
  out << "track_id,role,index,x,y,z\n";
  for (const auto * p : doc.all<PolylinePrimitive>()) {
    for (size_t k = 0; k < p->points.size(); ++k) {
      const auto & v = p->points[k];
      out << p->track_id << ',' << p->role << ',' << k << ',' << format_fixed(v.x) << ',' << format_fixed(v.y) << ','
          << format_fixed(v.z) << '\n';
    }
  }
  return out.str();
}

}  // namespace critscene

#endif  // CRITSCENE__VISEXPORT_HPP_
