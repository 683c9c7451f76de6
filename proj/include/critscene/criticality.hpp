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

#ifndef CRITSCENE__CRITICALITY_HPP_
#define CRITSCENE__CRITICALITY_HPP_

#include "critscene/error.hpp"
#include "critscene/ingest.hpp"
#include "critscene/json_util.hpp"
#include "critscene/scenegraph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace critscene
{

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct RssClassParams
{
  double response_time = 1.0;  // s
  double a_max_accel = 2.0;    // m/s^2, worst-case acceleration during the response time
  double a_min_brake = 4.0;    // m/s^2, braking the follower is guaranteed to apply
  double a_max_brake = 8.0;    // m/s^2, hardest braking the leader may apply
};

struct SffParams
{
  double a_brake = 5.0;     // m/s^2, hard-stop deceleration of the safety procedure
  double norm_order = 2.0;  // p of the p-norm; infinity selects the max norm
};

struct MeasureParams
{
  std::map<ObjectClass, RssClassParams> rss{
    {ObjectClass::Car, {}}, {ObjectClass::Truck, {}}, {ObjectClass::Bike, {}}, {ObjectClass::Pedestrian, {}}};
  SffParams sff;
  double simultaneity_window = 2.0;  // s, TTC_int arrival window

  const RssClassParams & rss_for(ObjectClass cls) const
  {
    auto it = rss.find(cls);
    if (it == rss.end()) {
      throw Error(ErrorCode::InvalidParameter, "no RSS parameters for class " + std::string(to_string(cls)));
    }
    return it->second;
  }

  void validate() const
  {
    auto check = [](bool ok, const std::string & what) {
      if (!ok) {
        throw Error(ErrorCode::InvalidParameter, what);
      }
    };
    for (const auto & [cls, p] : rss) {
      const std::string where = "rss." + std::string(to_string(cls));
      check(p.response_time >= 0.0, where + ".response_time must be >= 0");
      check(p.a_max_accel > 0.0, where + ".a_max_accel must be > 0");
      check(p.a_min_brake > 0.0, where + ".a_min_brake must be > 0");
      check(p.a_max_brake > 0.0, where + ".a_max_brake must be > 0");
    }
    check(sff.a_brake > 0.0, "sff.a_brake must be > 0");
    check(sff.norm_order >= 1.0, "sff.norm_order must be >= 1");
    check(simultaneity_window >= 0.0, "ttc_int.simultaneity_window must be >= 0");
  }
};

/// Reads a parameter document:
/// `{"rss": {"Car": {...}, ...}, "sff": {...}, "ttc_int": {"simultaneity_window": ...}}`.
/// Missing sections and keys keep their defaults.
inline MeasureParams measure_params_from_json(const Json & doc)
{
  MeasureParams params;
  try {
    if (doc.contains("rss")) {
      for (const auto & [name, section] : doc.at("rss").items()) {
        const auto cls = parse_object_class(name);
        if (!cls) {
          throw Error(ErrorCode::InvalidParameter, "rss section for unknown class '" + name + "'");
        }
        RssClassParams p = params.rss[*cls];
        p.response_time = section.value("response_time", p.response_time);
        p.a_max_accel = section.value("a_max_accel", p.a_max_accel);
        p.a_min_brake = section.value("a_min_brake", p.a_min_brake);
        p.a_max_brake = section.value("a_max_brake", p.a_max_brake);
        params.rss[*cls] = p;
      }
    }
    if (doc.contains("sff")) {
      const auto & s = doc.at("sff");
      params.sff.a_brake = s.value("a_brake", params.sff.a_brake);
      if (s.contains("norm_order") && s["norm_order"].is_string() && s["norm_order"] == "inf") {
        params.sff.norm_order = std::numeric_limits<double>::infinity();
      } else {
        params.sff.norm_order = s.value("norm_order", params.sff.norm_order);
      }
    }
    if (doc.contains("ttc_int")) {
      params.simultaneity_window = doc.at("ttc_int").value("simultaneity_window", params.simultaneity_window);
    }
  } catch (const Json::exception & e) {
    throw Error(ErrorCode::InvalidParameter, std::string("parameter document: ") + e.what());
  }
  params.validate();
  return params;
}

// ---------------------------------------------------------------------------
// Time to collision
// ---------------------------------------------------------------------------

/// Constant-velocity time to collision; nullopt unless the follower closes in.
inline std::optional<double> compute_ttc(double gap, double v_lead, double v_follow)
{
  const double closing = v_follow - v_lead;
  if (!(closing > 0.0)) {
    return std::nullopt;
  }
  return gap / closing;
}

/// Inverse TTC, continuous through matched speeds. A zero gap while closing
/// is contact and raises ZeroGap.
inline double compute_inverse_ttc(double gap, double v_lead, double v_follow)
{
  const double closing = std::max(0.0, v_follow - v_lead);
  if (closing == 0.0) {
    return 0.0;
  }
  if (!(gap > 0.0)) {
    throw Error(ErrorCode::ZeroGap, "gap is zero while closing at " + std::to_string(closing) + " m/s");
  }
  return closing / gap;
}

/// TTC at a conflict point: the travel time of whichever actor arrives second,
/// provided both arrivals fall within `window` seconds of each other.
inline std::optional<double> compute_ttc_int(
  double distance_a, double speed_a, double distance_b, double speed_b, double window)
{
  if (!(speed_a > 0.0) || !(speed_b > 0.0)) {
    return std::nullopt;
  }
  const double arrival_a = distance_a / speed_a;
  const double arrival_b = distance_b / speed_b;
  if (std::abs(arrival_a - arrival_b) > window) {
    return std::nullopt;
  }
  return std::max(arrival_a, arrival_b);
}

inline std::optional<double> compute_ttc_int(
  const RelationEdge & edge, const ObjectState & from, const ObjectState & to, const MeasureParams & params)
{
  if (edge.kind != RelationKind::Intersecting || !edge.conflict) {
    return std::nullopt;
  }
  return compute_ttc_int(
    edge.conflict->from_distance, from.speed, edge.conflict->to_distance, to.speed, params.simultaneity_window);
}

// ---------------------------------------------------------------------------
// RSS
// ---------------------------------------------------------------------------

struct RssResult
{
  bool unsafe = false;
  double d_min = 0.0;
};

/// Minimum safe longitudinal distance for same-direction traffic: the follower
/// accelerates for the response time then brakes gently, the leader brakes hard.
inline double rss_safe_distance(
  double v_follow, double v_lead, const RssClassParams & follower, const RssClassParams & leader)
{
  const double tau = follower.response_time;
  const double v_after_response = v_follow + tau * follower.a_max_accel;
  const double d = v_follow * tau + 0.5 * follower.a_max_accel * tau * tau +
                   v_after_response * v_after_response / (2.0 * follower.a_min_brake) -
                   v_lead * v_lead / (2.0 * leader.a_max_brake);
  return std::max(0.0, d);
}

inline RssResult compute_rss_longitudinal(
  double gap, double v_follow, double v_lead, const RssClassParams & follower, const RssClassParams & leader)
{
  RssResult r;
  r.d_min = rss_safe_distance(v_follow, v_lead, follower, leader);
  r.unsafe = gap < r.d_min;
  return r;
}

inline RssResult compute_rss_longitudinal(double gap, double v_follow, double v_lead, const RssClassParams & params)
{
  return compute_rss_longitudinal(gap, v_follow, v_lead, params, params);
}

// ---------------------------------------------------------------------------
// SFF safety potential
// ---------------------------------------------------------------------------

/// Actor on a shared longitudinal axis (Frenet s).
struct AxisState
{
  double s = 0.0;
  double v = 0.0;
};

struct SffDetail
{
  std::optional<double> c_t;  // first instant of bumper overlap
  double t_a_stop = 0.0;
  double t_b_stop = 0.0;
};

struct SffResult
{
  double rho = 0.0;
  SffDetail detail;
};

namespace detail
{

/// Position under a hard stop from (s, v) with deceleration a, holding at rest.
inline double hard_stop_position(const AxisState & x, double a, double t)
{
  const double t_stop = x.v / a;
  const double tt = std::min(t, t_stop);
  return x.s + x.v * tt - 0.5 * a * tt * tt;
}

/// Real roots of c0 + c1 t + c2 t^2 in ascending order.
inline std::vector<double> quadratic_roots(double c0, double c1, double c2)
{
  std::vector<double> roots;
  if (c2 == 0.0) {
    if (c1 != 0.0) {
      roots.push_back(-c0 / c1);
    }
    return roots;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) {
    return roots;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (c1 + std::copysign(sq, c1));
  if (q != 0.0) {
    roots.push_back(q / c2);
    roots.push_back(c0 / q);
  } else {
    roots.push_back(0.0);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline double p_norm(double a, double b, double p)
{
  if (std::isinf(p)) {
    return std::max(std::abs(a), std::abs(b));
  }
  if (a == 0.0 && b == 0.0) {
    return 0.0;
  }
  return std::pow(std::pow(std::abs(a), p) + std::pow(std::abs(b), p), 1.0 / p);
}

}  // namespace detail

/// Earliest instant at which the hard-stop profiles of `rear` and `front`
/// overlap bumper-to-bumper (strictly), or nullopt if they never do.
inline std::optional<double> sff_collision_time(
  const AxisState & rear, const AxisState & front, double half_rear, double half_front, double a_brake)
{
  // D(t) = (front(t) - half_front) - (rear(t) + half_rear); overlap while D < 0.
  const double t_rear = rear.v / a_brake;
  const double t_front = front.v / a_brake;
  auto separation = [&](double t) {
    return (detail::hard_stop_position(front, a_brake, t) - half_front) -
           (detail::hard_stop_position(rear, a_brake, t) + half_rear);
  };
  if (separation(0.0) < 0.0) {
    return 0.0;
  }
  std::array<double, 3> knots{0.0, std::min(t_rear, t_front), std::max(t_rear, t_front)};
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double t0 = knots[k];
    const double t1 = knots[k + 1];
    if (t1 <= t0) {
      continue;
    }
    // Within [t0, t1] each actor is either braking or at rest, so D is quadratic.
    double c0 = front.s - half_front - rear.s - half_rear;
    double c1 = 0.0;
    double c2 = 0.0;
    const double mid = 0.5 * (t0 + t1);
    if (mid < t_front) {
      c1 += front.v;
      c2 -= 0.5 * a_brake;
    } else {
      c0 += front.v * front.v / (2.0 * a_brake);
    }
    if (mid < t_rear) {
      c1 -= rear.v;
      c2 += 0.5 * a_brake;
    } else {
      c0 -= rear.v * rear.v / (2.0 * a_brake);
    }
    for (double r : detail::quadratic_roots(c0, c1, c2)) {
      if (r < t0 || r > t1) {
        continue;
      }
      const double slope = c1 + 2.0 * c2 * r;
      if (slope < 0.0) {
        return r;
      }
    }
  }
  // After both stopped D is constant; it can only be negative if a crossing was found above.
  return std::nullopt;
}

/// Safety potential of two actors sharing one lane axis. Zero when the hard
/// stops never overlap, otherwise the p-norm of each actor's remaining
/// braking time at the overlap instant, with negative components clamped to 0.
inline SffResult compute_sff_safety_potential(
  const AxisState & a, const AxisState & b, double half_length_a, double half_length_b, const SffParams & params)
{
  SffResult result;
  result.detail.t_a_stop = a.v / params.a_brake;
  result.detail.t_b_stop = b.v / params.a_brake;
  const bool a_behind = a.s <= b.s;
  result.detail.c_t = a_behind ? sff_collision_time(a, b, half_length_a, half_length_b, params.a_brake)
                               : sff_collision_time(b, a, half_length_b, half_length_a, params.a_brake);
  if (!result.detail.c_t) {
    return result;
  }
  const double c_t = *result.detail.c_t;
  result.rho = detail::p_norm(
    std::max(0.0, result.detail.t_a_stop - c_t), std::max(0.0, result.detail.t_b_stop - c_t), params.norm_order);
  return result;
}

// ---------------------------------------------------------------------------
// Edge evaluation
// ---------------------------------------------------------------------------

struct RecordDetail
{
  std::optional<double> gap;
  std::optional<double> ttc;
  std::optional<double> ttc_int;
  std::optional<double> d_min;
  std::optional<double> c_t;
  std::optional<double> t_from_stop;
  std::optional<double> t_to_stop;
  bool contact = false;  // zero gap while closing: inverse TTC undefined
};

struct CriticalityRecord
{
  TimestampMs timestamp = 0;
  TrackId from = 0;
  TrackId to = 0;
  RelationKind kind = RelationKind::Longitudinal;
  std::optional<double> inv_ttc;
  std::optional<bool> rss_unsafe;
  std::optional<double> sff_potential;
  RecordDetail detail;

  bool has_measure() const { return inv_ttc || rss_unsafe || sff_potential; }
};

/// Evaluates every applicable measure on one edge. Lateral edges carry no
/// measure and yield nullopt.
inline std::optional<CriticalityRecord> evaluate_edge(
  const RelationEdge & edge, const GraphNode & from, const GraphNode & to, const MeasureParams & params,
  TimestampMs timestamp)
{
  CriticalityRecord rec;
  rec.timestamp = timestamp;
  rec.from = edge.from;
  rec.to = edge.to;
  rec.kind = edge.kind;

  switch (edge.kind) {
    case RelationKind::Lateral:
      return std::nullopt;

    case RelationKind::Intersecting: {
      rec.detail.ttc_int = compute_ttc_int(edge, from.state, to.state, params);
      rec.inv_ttc = rec.detail.ttc_int && *rec.detail.ttc_int > 0.0 ? 1.0 / *rec.detail.ttc_int : 0.0;
      break;
    }

    case RelationKind::Longitudinal: {
      const double gap = edge.gap.value_or(0.0);
      const double v_follow = from.state.speed;
      const double v_lead = to.state.speed;
      rec.detail.gap = gap;
      rec.detail.ttc = compute_ttc(gap, v_lead, v_follow);
      try {
        rec.inv_ttc = compute_inverse_ttc(gap, v_lead, v_follow);
      } catch (const Error & e) {
        if (e.code() != ErrorCode::ZeroGap) {
          throw;
        }
        rec.detail.contact = true;
      }

      const auto rss = compute_rss_longitudinal(
        gap, v_follow, v_lead, params.rss_for(from.object.cls), params.rss_for(to.object.cls));
      rec.rss_unsafe = rss.unsafe;
      rec.detail.d_min = rss.d_min;

      const double half_from = from.object.half_length();
      const double half_to = to.object.half_length();
      const auto sff = compute_sff_safety_potential(
        {0.0, v_follow}, {gap + half_from + half_to, v_lead}, half_from, half_to, params.sff);
      rec.sff_potential = sff.rho;
      rec.detail.c_t = sff.detail.c_t;
      rec.detail.t_from_stop = sff.detail.t_a_stop;
      rec.detail.t_to_stop = sff.detail.t_b_stop;
      break;
    }
  }
  if (!rec.has_measure()) {
    return std::nullopt;
  }
  return rec;
}

/// Records for one scene graph. Symmetric (intersecting) relations are
/// evaluated once per unordered pair, from the lower track id.
inline std::vector<CriticalityRecord> evaluate_graph(const SceneGraph & graph, const MeasureParams & params)
{
  std::vector<CriticalityRecord> records;
  for (const auto & edge : graph.edges) {
    if (edge.kind == RelationKind::Intersecting && edge.from > edge.to) {
      continue;
    }
    const GraphNode * from = graph.find_node(edge.from);
    const GraphNode * to = graph.find_node(edge.to);
    if (!from || !to) {
      continue;
    }
    if (auto rec = evaluate_edge(edge, *from, *to, params, graph.timestamp)) {
      records.push_back(std::move(*rec));
    }
  }
  return records;
}

inline Json record_to_json(const CriticalityRecord & r)
{
  Json j;
  j["timestamp"] = r.timestamp;
  j["from"] = r.from;
  j["to"] = r.to;
  j["kind"] = std::string(to_string(r.kind));
  j["inv_ttc"] = json_optional(r.inv_ttc);
  j["rss_unsafe"] = json_optional(r.rss_unsafe);
  j["sff_potential"] = json_optional(r.sff_potential);
  Json d;
  d["gap"] = json_optional(r.detail.gap);
  d["ttc"] = json_optional(r.detail.ttc);
  d["ttc_int"] = json_optional(r.detail.ttc_int);
  d["d_min"] = json_optional(r.detail.d_min);
  d["c_t"] = json_optional(r.detail.c_t);
  d["t_from_stop"] = json_optional(r.detail.t_from_stop);
  d["t_to_stop"] = json_optional(r.detail.t_to_stop);
  d["contact"] = r.detail.contact;
  j["detail"] = std::move(d);
  return j;
}

/// JSON-lines encoding, one record per line.
inline std::string records_to_jsonl(const std::vector<CriticalityRecord> & records)
{
  std::string out;
  for (const auto & r : records) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

}  // namespace critscene

#endif  // CRITSCENE__CRITICALITY_HPP_
