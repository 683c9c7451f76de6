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

#include "critscene/ingest.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace critscene
{
namespace
{

ColumnMapping minimal_mapping()
{
  ColumnMapping m;
  m.track_id = "id";
  m.time = "t";
  m.x = "x";
  m.y = "y";
  m.heading.reset();
  m.length.reset();
  m.width.reset();
  m.cls.reset();
  m.vx.reset();
  m.vy.reset();
  return m;
}

const char * kInD =
  "trackId,timestamp,xCenter,yCenter,heading,length,width,class,xVelocity,yVelocity\n"
  "1,0,0.0,0.0,0.0,4.5,1.8,car,10.0,0.0\n"
  "1,40,0.4,0.0,0.0,4.5,1.8,car,10.0,0.0\n"
  "2,40,20.0,3.5,0.0,12.0,2.5,truck,3.0,4.0\n"
  "1,80,0.8,0.0,0.0,4.5,1.8,car,10.0,0.0\n"
  "2,80,20.12,3.66,0.0,12.0,2.5,truck,3.0,4.0\n";

TEST(ParseTracks, BuildsTimestampsAndFrameInterval)
{
  const auto sc = parse_tracks("id,t,x,y\n1,0,0,0\n1,40,0.4,0\n1,80,0.8,0\n", minimal_mapping());
  ASSERT_EQ(sc.tracks().size(), 1u);
  EXPECT_EQ(sc.timestamps(), (std::vector<TimestampMs>{0, 40, 80}));
  EXPECT_EQ(sc.frame_interval(), 40);
  EXPECT_EQ(sc.tracks()[0].states.size(), 3u);
}

TEST(ParseTracks, SpeedFromVelocityComponents)
{
  ColumnMapping m = minimal_mapping();
  m.vx = "vx";
  m.vy = "vy";
  const auto sc = parse_tracks("id,t,x,y,vx,vy\n7,0,1,1,3,4\n", m);
  EXPECT_DOUBLE_EQ(sc.tracks()[0].states[0].speed, 5.0);
  EXPECT_NEAR(sc.tracks()[0].states[0].velocity_heading, std::atan2(4.0, 3.0), 1e-15);
}

TEST(ParseTracks, SpeedFromFiniteDifferenceWhenNoVelocity)
{
  const auto sc = parse_tracks("id,t,x,y\n1,0,0,0\n1,100,1,0\n1,200,2.5,0\n", minimal_mapping());
  const auto & s = sc.tracks()[0].states;
  EXPECT_NEAR(s[0].speed, 10.0, 1e-12);
  EXPECT_NEAR(s[1].speed, 15.0, 1e-12);
  EXPECT_NEAR(s[2].speed, 15.0, 1e-12);  // backward difference at the end
  EXPECT_NEAR(s[0].yaw, 0.0, 1e-12);
}

TEST(ParseTracks, DuplicateTimestampIsNonMonotonic)
{
  try {
    parse_tracks("id,t,x,y\n1,40,0,0\n1,40,1,0\n", minimal_mapping());
    FAIL() << "expected NonMonotonicTime";
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::NonMonotonicTime);
  }
}

TEST(ParseTracks, MissingColumnReported)
{
  ColumnMapping m = minimal_mapping();
  m.speed = "v";
  try {
    parse_tracks("id,t,x,y\n1,0,0,0\n", m);
    FAIL() << "expected MissingColumn";
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingColumn);
    EXPECT_NE(std::string(e.what()).find("'v'"), std::string::npos);
  }
}

TEST(ParseTracks, BadNumericNamesRowAndColumn)
{
  try {
    parse_tracks("id,t,x,y\n1,0,0,0\n1,40,abc,0\n", minimal_mapping());
    FAIL() << "expected BadNumeric";
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::BadNumeric);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'x'"), std::string::npos) << msg;
  }
}

TEST(ParseTracks, DefaultLayoutReadsClassesAndExtents)
{
  const auto sc = parse_tracks(kInD);
  ASSERT_EQ(sc.tracks().size(), 2u);
  const Track * truck = sc.find_track(2);
  ASSERT_NE(truck, nullptr);
  EXPECT_EQ(truck->object.cls, ObjectClass::Truck);
  EXPECT_DOUBLE_EQ(truck->object.length, 12.0);
  EXPECT_DOUBLE_EQ(truck->states[0].speed, 5.0);
  EXPECT_EQ(sc.timestamps(), (std::vector<TimestampMs>{0, 40, 80}));
}

TEST(ParseTracks, HeadingDegreesConvertedAndNormalized)
{
  ColumnMapping m = minimal_mapping();
  m.heading = "h";
  m.heading_in_degrees = true;
  const auto sc = parse_tracks("id,t,x,y,h\n1,0,0,0,270\n1,40,0,0,180\n", m);
  EXPECT_NEAR(sc.tracks()[0].states[0].yaw, -std::numbers::pi / 2.0, 1e-12);
  EXPECT_NEAR(sc.tracks()[0].states[1].yaw, std::numbers::pi, 1e-12);
}

TEST(ParseTracks, FrameIndexedTime)
{
  ColumnMapping m = minimal_mapping();
  m.time = "frame";
  m.time_unit = TimeUnit::Frames;
  m.frame_interval_ms = 40;
  const auto sc = parse_tracks("id,frame,x,y\n1,10,0,0\n1,11,1,0\n", m);
  EXPECT_EQ(sc.timestamps(), (std::vector<TimestampMs>{400, 440}));
  EXPECT_EQ(sc.frame_interval(), 40);
}

TEST(ParseTracks, UnknownClassRejected)
{
  ColumnMapping m = minimal_mapping();
  m.cls = "c";
  try {
    parse_tracks("id,t,x,y,c\n1,0,0,0,zeppelin\n", m);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownClass);
  }
}

TEST(ParseTracks, RowOrderDoesNotMatter)
{
  std::istringstream in(kInD);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> rows;
  for (std::string line; std::getline(in, line);) {
    rows.push_back(line);
  }
  const Scenario reference = parse_tracks(kInD);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(rows.begin(), rows.end(), rng);
    std::string text = header + "\n";
    for (const auto & r : rows) {
      text += r + "\n";
    }
    EXPECT_EQ(parse_tracks(text), reference);
  }
}

TEST(ColumnMapping, FromJsonDisablesAndRenames)
{
  const auto m = column_mapping_from_json(Json::parse(
    R"({"track_id": "id", "time": "frame", "time_unit": "frame", "frame_interval_ms": 40,
        "heading": null, "speed": "v", "heading_in_degrees": true})"));
  EXPECT_EQ(m.track_id, "id");
  EXPECT_EQ(m.time_unit, TimeUnit::Frames);
  EXPECT_EQ(m.frame_interval_ms, 40);
  EXPECT_FALSE(m.heading.has_value());
  EXPECT_EQ(m.speed, "v");
  EXPECT_TRUE(m.heading_in_degrees);
  EXPECT_EQ(m.x, "xCenter");
}

Scenario two_track_scenario()
{
  return Scenario(
    "demo", {
              {{1, ObjectClass::Car, 4.5, 1.8}, {{0, 0.0, 0.0, 0.0, 1.0, 0.0}, {1000, 1.0, 0.0, 0.0, 1.0, 0.0}}},
              {{2, ObjectClass::Pedestrian, 0.5, 0.5},
               {{500, 5.0, 5.0, 1.0, 0.5, 1.0}, {1000, 5.1, 5.2, 1.0, 0.5, 1.0}, {1500, 5.2, 5.4, 1.0, 0.5, 1.0}}},
            });
}

TEST(SceneAt, ReturnsTracksAliveAtTimestamp)
{
  const Scenario sc = two_track_scenario();
  const auto both = scene_at(sc, 1000);
  ASSERT_EQ(both.objects.size(), 2u);
  EXPECT_EQ(both.objects[0].object.track_id, 1);
  EXPECT_EQ(both.objects[1].object.track_id, 2);
  const auto early = scene_at(sc, 0);
  ASSERT_EQ(early.objects.size(), 1u);
  EXPECT_EQ(early.objects[0].object.track_id, 1);
}

TEST(SceneAt, UnknownTimestamp)
{
  try {
    scene_at(two_track_scenario(), 99999);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownTimestamp);
  }
}

TEST(SceneAt, EveryTimestampHasMatchingStates)
{
  const Scenario sc = parse_tracks(kInD);
  for (TimestampMs t : sc.timestamps()) {
    const auto scene = scene_at(sc, t);
    ASSERT_FALSE(scene.objects.empty());
    for (const auto & o : scene.objects) {
      EXPECT_EQ(o.state.timestamp, t);
    }
  }
}

TEST(ScenarioJson, RoundTripIsIdentity)
{
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(-1e4, 1e4);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_real_distribution<double> spd(0.0, 40.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Track> tracks;
    for (TrackId id = 1; id <= 5; ++id) {
      Track t{{id, static_cast<ObjectClass>(id % 4), 1.0 + id, 0.5 + 0.1 * id}, {}};
      for (int k = 0; k < 20; ++k) {
        t.states.push_back({40 * k + id, coord(rng), coord(rng), ang(rng), spd(rng), ang(rng)});
      }
      tracks.push_back(std::move(t));
    }
    const Scenario sc("random" + std::to_string(trial), std::move(tracks));
    const std::string text = scenario_to_json(sc).dump();
    EXPECT_EQ(scenario_from_json(Json::parse(text)), sc);
  }
}

TEST(ScenarioCsv, WriterOutputReparses)
{
  const Scenario sc = parse_tracks(kInD);
  const Scenario again = parse_tracks(scenario_to_csv(sc));
  ASSERT_EQ(again.tracks().size(), sc.tracks().size());
  EXPECT_EQ(again.timestamps(), sc.timestamps());
  for (size_t i = 0; i < sc.tracks().size(); ++i) {
    EXPECT_EQ(again.tracks()[i].object, sc.tracks()[i].object);
    for (size_t k = 0; k < sc.tracks()[i].states.size(); ++k) {
      EXPECT_NEAR(again.tracks()[i].states[k].speed, sc.tracks()[i].states[k].speed, 1e-12);
    }
  }
}

}  // namespace
}  // namespace critscene
