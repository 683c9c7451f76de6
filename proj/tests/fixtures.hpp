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

#ifndef CRITSCENE_TESTS__FIXTURES_HPP_
#define CRITSCENE_TESTS__FIXTURES_HPP_

// Synthetic maps and scenarios shared by the unit and acceptance suites.

#include "critscene/critscene.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace critscene::fixtures
{

inline Lane make_lane(LaneId id, std::vector<Vec2> pts, std::vector<LaneId> successors = {})
{
  Lane lane;
  lane.lane_id = id;
  lane.centerline = std::move(pts);
  lane.width = 3.5;
  lane.successors = std::move(successors);
  return lane;
}

/// One lane along +x from (0,0) to (length,0).
inline LaneMap straight_map(double length = 100.0)
{
  return build_conflicts(LaneMap({make_lane(1, {{0.0, 0.0}, {length, 0.0}})}));
}

/// Lane 1 (50 m) continues into lane 2 (100 m).
inline LaneMap successor_map()
{
  return build_conflicts(LaneMap({
    make_lane(1, {{0.0, 0.0}, {50.0, 0.0}}, {2}),
    make_lane(2, {{50.0, 0.0}, {150.0, 0.0}}),
  }));
}

/// Lane 1 along y = 0, lane 2 along y = 3.5 on its left; both 200 m.
inline LaneMap parallel_map()
{
  Lane right = make_lane(1, {{0.0, 0.0}, {200.0, 0.0}});
  Lane left = make_lane(2, {{0.0, 3.5}, {200.0, 3.5}});
  right.left_neighbor = 2;
  left.right_neighbor = 1;
  return build_conflicts(LaneMap({right, left}));
}

/// Lane 1 along +x and lane 2 along +y, both 100 m, crossing at the origin.
inline LaneMap crossing_map()
{
  return build_conflicts(LaneMap({
    make_lane(1, {{-50.0, 0.0}, {50.0, 0.0}}),
    make_lane(2, {{0.0, -50.0}, {0.0, 50.0}}),
  }));
}

/// Sampled sine centerline crossing the straight lane y = 0 twice
/// (near x = 26.2 and x = 56.2).
inline std::vector<Vec2> s_curve_points()
{
  std::vector<Vec2> pts;
  for (int k = 0; k <= 70; ++k) {
    const double x = 5.0 + k;
    pts.push_back({x, 6.0 * std::sin(2.0 * std::numbers::pi * x / 60.0 + 0.4)});
  }
  return pts;
}

inline LaneMap s_curve_map()
{
  return build_conflicts(LaneMap({
    make_lane(1, {{0.0, 0.0}, {100.0, 0.0}}),
    make_lane(2, s_curve_points()),
  }));
}

/// Well-separated curved lanes for projection round trips: a circular arc,
/// a straight diagonal and a gentle polynomial.
inline LaneMap round_trip_map()
{
  std::vector<Vec2> arc;
  for (int k = 0; k <= 120; ++k) {
    const double a = -0.5 * std::numbers::pi + std::numbers::pi * k / 120.0;
    arc.push_back({60.0 * std::cos(a), 60.0 * std::sin(a)});
  }
  std::vector<Vec2> poly;
  for (int k = 0; k <= 80; ++k) {
    const double x = 300.0 + 2.5 * k;
    const double u = (x - 300.0) / 200.0;
    poly.push_back({x, 300.0 + 40.0 * u * u * (3.0 - 2.0 * u)});
  }
  return build_conflicts(LaneMap({
    make_lane(1, std::move(arc)),
    make_lane(2, {{-400.0, -400.0}, {-250.0, -310.0}, {-120.0, -300.0}}),
    make_lane(3, std::move(poly)),
  }));
}

inline Track make_track(TrackId id, std::vector<ObjectState> states, ObjectClass cls = ObjectClass::Car,
                        double length = 4.0, double width = 1.8)
{
  Track t;
  t.object = {id, cls, length, width};
  t.states = std::move(states);
  return t;
}

inline ObjectState state(TimestampMs t, double x, double y, double yaw, double speed)
{
  return {t, x, y, yaw, speed, yaw};
}

/// Single-frame scene from (id, x, y, yaw, speed) tuples; cars 4 m long.
struct Actor
{
  TrackId id;
  double x;
  double y;
  double yaw;
  double speed;
  ObjectClass cls = ObjectClass::Car;
  double length = 4.0;
};

inline Scene scene_of(const std::vector<Actor> & actors, TimestampMs t = 0)
{
  Scene scene;
  scene.timestamp = t;
  for (const auto & a : actors) {
    scene.objects.push_back({{a.id, a.cls, a.length, 1.8}, state(t, a.x, a.y, a.yaw, a.speed)});
  }
  return scene;
}

/// Two cars on one straight lane: the follower (id 1, 15 m/s) closes on the
/// leader (id 2, 10 m/s) for 8 s at 10 Hz. A third car sits on an
/// unconnected lane.
inline Scenario approach_scenario()
{
  std::vector<ObjectState> follower;
  std::vector<ObjectState> leader;
  std::vector<ObjectState> parked;
  for (int k = 0; k <= 80; ++k) {
    const TimestampMs t = 100 * k;
    const double secs = 0.1 * k;
    follower.push_back(state(t, 10.0 + 15.0 * secs, 0.0, 0.0, 15.0));
    leader.push_back(state(t, 60.0 + 10.0 * secs, 0.0, 0.0, 10.0));
    parked.push_back(state(t, 100.0, 50.0, 0.0, 0.0));
  }
  return Scenario(
    "approach", {make_track(1, follower, ObjectClass::Car, 4.5), make_track(2, leader, ObjectClass::Car, 4.5),
                 make_track(3, parked, ObjectClass::Car, 4.5)});
}

/// Map for approach_scenario: the road plus a separate lane for the parked car.
inline LaneMap approach_map()
{
  return build_conflicts(LaneMap({
    make_lane(1, {{0.0, 0.0}, {500.0, 0.0}}),
    make_lane(7, {{0.0, 50.0}, {500.0, 50.0}}),
  }));
}

}  // namespace critscene::fixtures

#endif  // CRITSCENE_TESTS__FIXTURES_HPP_
