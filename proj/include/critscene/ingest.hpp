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

#ifndef CRITSCENE__INGEST_HPP_
#define CRITSCENE__INGEST_HPP_

#include "critscene/error.hpp"
#include "critscene/geometry.hpp"
#include "critscene/json_util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace critscene
{

using TrackId = std::int64_t;
using TimestampMs = std::int64_t;

enum class ObjectClass { Car, Truck, Bike, Pedestrian };

inline std::string_view to_string(ObjectClass cls)
{
  switch (cls) {
    case ObjectClass::Car:
      return "Car";
    case ObjectClass::Truck:
      return "Truck";
    case ObjectClass::Bike:
      return "Bike";
    case ObjectClass::Pedestrian:
      return "Pedestrian";
  }
  return "Car";
}

/// Accepts the canonical names plus the labels common drone datasets use.
inline std::optional<ObjectClass> parse_object_class(std::string_view text)
{
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (lower == "car" || lower == "van" || lower == "vehicle") {
    return ObjectClass::Car;
  }
  if (lower == "truck" || lower == "bus" || lower == "truck_bus" || lower == "trailer") {
    return ObjectClass::Truck;
  }
  if (lower == "bike" || lower == "bicycle" || lower == "motorcycle" || lower == "cyclist") {
    return ObjectClass::Bike;
  }
  if (lower == "pedestrian" || lower == "person") {
    return ObjectClass::Pedestrian;
  }
  return std::nullopt;
}

inline bool is_vehicle(ObjectClass cls) { return cls != ObjectClass::Pedestrian; }

/// Fallback extents (length, width, height) when a dataset omits them.
struct ClassExtent
{
  double length;
  double width;
  double height;
};

inline ClassExtent default_extent(ObjectClass cls)
{
  switch (cls) {
    case ObjectClass::Car:
      return {4.5, 1.8, 1.5};
    case ObjectClass::Truck:
      return {10.0, 2.5, 3.5};
    case ObjectClass::Bike:
      return {1.8, 0.6, 1.7};
    case ObjectClass::Pedestrian:
      return {0.5, 0.5, 1.8};
  }
  return {4.5, 1.8, 1.5};
}

struct TrackedObject
{
  TrackId track_id = 0;
  ObjectClass cls = ObjectClass::Car;
  double length = 0.0;  // meters
  double width = 0.0;   // meters

  double half_length() const { return 0.5 * length; }
  friend bool operator==(const TrackedObject &, const TrackedObject &) = default;
};

struct ObjectState
{
  TimestampMs timestamp = 0;
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;    // radians, (-pi, pi]
  double speed = 0.0;  // m/s, >= 0
  double velocity_heading = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const ObjectState &, const ObjectState &) = default;
};

struct Track
{
  TrackedObject object;
  std::vector<ObjectState> states;  // strictly increasing timestamps

  TimestampMs first_timestamp() const { return states.front().timestamp; }
  TimestampMs last_timestamp() const { return states.back().timestamp; }

  const ObjectState * state_at(TimestampMs t) const
  {
    auto it = std::lower_bound(
      states.begin(), states.end(), t,
      [](const ObjectState & s, TimestampMs value) { return s.timestamp < value; });
    if (it == states.end() || it->timestamp != t) {
      return nullptr;
    }
    return &*it;
  }

  friend bool operator==(const Track &, const Track &) = default;
};

struct SceneObject
{
  TrackedObject object;
  ObjectState state;
};

/// All objects with a state at one timestamp, ordered by track id.
struct Scene
{
  TimestampMs timestamp = 0;
  std::vector<SceneObject> objects;
};

/// Immutable container of tracks. Construction validates and derives the
/// global timestamp list.
class Scenario
{
public:
  Scenario() = default;

  Scenario(std::string id, std::vector<Track> tracks, std::optional<TimestampMs> frame_interval = {})
  : id_(std::move(id)), tracks_(std::move(tracks))
  {
    std::sort(tracks_.begin(), tracks_.end(), [](const Track & a, const Track & b) {
      return a.object.track_id < b.object.track_id;
    });
    for (size_t i = 0; i < tracks_.size(); ++i) {
      const auto & track = tracks_[i];
      if (i > 0 && tracks_[i - 1].object.track_id == track.object.track_id) {
        throw Error(
          ErrorCode::SchemaViolation,
          "duplicate track_id " + std::to_string(track.object.track_id));
      }
      if (track.states.empty()) {
        throw Error(
          ErrorCode::SchemaViolation,
          "track " + std::to_string(track.object.track_id) + " has no states");
      }
      if (is_vehicle(track.object.cls) && (track.object.length <= 0.0 || track.object.width <= 0.0)) {
        throw Error(
          ErrorCode::BadNumeric,
          "track " + std::to_string(track.object.track_id) + " has non-positive extent");
      }
      for (size_t k = 0; k < track.states.size(); ++k) {
        const auto & s = track.states[k];
        if (k > 0 && s.timestamp <= track.states[k - 1].timestamp) {
          throw Error(
            ErrorCode::NonMonotonicTime, "track " + std::to_string(track.object.track_id) +
                                           " repeats or reverses timestamp " +
                                           std::to_string(s.timestamp));
        }
        if (!(s.speed >= 0.0)) {
          throw Error(
            ErrorCode::BadNumeric, "track " + std::to_string(track.object.track_id) +
                                     " has negative speed at " + std::to_string(s.timestamp));
        }
        timestamps_.push_back(s.timestamp);
      }
    }
    std::sort(timestamps_.begin(), timestamps_.end());
    timestamps_.erase(std::unique(timestamps_.begin(), timestamps_.end()), timestamps_.end());

    if (frame_interval) {
      frame_interval_ = *frame_interval;
    } else {
      for (size_t k = 1; k < timestamps_.size(); ++k) {
        const TimestampMs diff = timestamps_[k] - timestamps_[k - 1];
        if (frame_interval_ == 0 || diff < frame_interval_) {
          frame_interval_ = diff;
        }
      }
    }
  }

  const std::string & id() const { return id_; }
  const std::vector<Track> & tracks() const { return tracks_; }
  const std::vector<TimestampMs> & timestamps() const { return timestamps_; }
  TimestampMs frame_interval() const { return frame_interval_; }
  bool empty() const { return timestamps_.empty(); }

  bool has_timestamp(TimestampMs t) const
  {
    return std::binary_search(timestamps_.begin(), timestamps_.end(), t);
  }

  const Track * find_track(TrackId id) const
  {
    auto it = std::lower_bound(
      tracks_.begin(), tracks_.end(), id,
      [](const Track & track, TrackId value) { return track.object.track_id < value; });
    if (it == tracks_.end() || it->object.track_id != id) {
      return nullptr;
    }
    return &*it;
  }

  friend bool operator==(const Scenario &, const Scenario &) = default;

private:
  std::string id_;
  std::vector<Track> tracks_;
  std::vector<TimestampMs> timestamps_;
  TimestampMs frame_interval_ = 0;
};

inline Scene scene_at(const Scenario & scenario, TimestampMs t)
{
  if (!scenario.has_timestamp(t)) {
    throw Error(ErrorCode::UnknownTimestamp, "no scene at t=" + std::to_string(t) + " ms");
  }
  Scene scene;
  scene.timestamp = t;
  for (const auto & track : scenario.tracks()) {
    if (t < track.first_timestamp() || t > track.last_timestamp()) {
      continue;
    }
    if (const ObjectState * state = track.state_at(t)) {
      scene.objects.push_back({track.object, *state});
    }
  }
  return scene;
}

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

enum class TimeUnit { Milliseconds, Seconds, Frames };

/// Maps canonical fields onto dataset column names. Optional columns set to
/// nullopt are not read; every named column must be present in the header.
struct ColumnMapping
{
  std::string track_id = "trackId";
  std::string time = "timestamp";
  TimeUnit time_unit = TimeUnit::Milliseconds;
  std::string x = "xCenter";
  std::string y = "yCenter";
  std::optional<std::string> heading = "heading";
  std::optional<std::string> length = "length";
  std::optional<std::string> width = "width";
  std::optional<std::string> cls = "class";
  std::optional<std::string> vx = "xVelocity";
  std::optional<std::string> vy = "yVelocity";
  std::optional<std::string> speed;
  bool heading_in_degrees = false;
  TimestampMs frame_interval_ms = 0;  // required for TimeUnit::Frames; 0 infers otherwise
};

namespace detail
{

inline std::vector<std::string> split_csv_line(std::string_view line)
{
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  for (auto & f : fields) {
    const auto first = f.find_first_not_of(" \t\r");
    const auto last = f.find_last_not_of(" \t\r");
    f = first == std::string::npos ? std::string() : f.substr(first, last - first + 1);
  }
  return fields;
}

template <typename T>
T parse_number(const std::string & text, size_t row, const std::string & column)
{
  T value{};
  const char * begin = text.data();
  const char * end = begin + text.size();
  if (!text.empty() && *begin == '+') {
    ++begin;
  }
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  bool ok = ec == std::errc() && ptr == end && !text.empty();
  if constexpr (std::is_floating_point_v<T>) {
    ok = ok && std::isfinite(value);
  }
  if (!ok) {
    throw Error(
      ErrorCode::BadNumeric,
      "row " + std::to_string(row) + ", column '" + column + "': '" + text + "'");
  }
  return value;
}

struct RawRow
{
  size_t row = 0;
  TrackId track_id = 0;
  TimestampMs timestamp = 0;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> heading;
  std::optional<double> length;
  std::optional<double> width;
  std::optional<ObjectClass> cls;
  std::optional<double> vx;
  std::optional<double> vy;
  std::optional<double> speed;
};

}  // namespace detail

/// Parses an object-list CSV into a Scenario. Row order does not matter:
/// states are sorted per track, and a repeated (track, timestamp) is an error.
inline Scenario parse_tracks(
  std::istream & source, const ColumnMapping & mapping = {}, const std::string & scenario_id = "scenario")
{
  std::string line;
  if (!std::getline(source, line)) {
    throw Error(ErrorCode::MissingColumn, "empty input, header row expected");
  }
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
    line.erase(0, 3);  // UTF-8 BOM
  }
  const auto header = detail::split_csv_line(line);
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < header.size(); ++i) {
    index.emplace(header[i], i);
  }
  auto column = [&](const std::string & name) -> size_t {
    auto it = index.find(name);
    if (it == index.end()) {
      throw Error(ErrorCode::MissingColumn, "column '" + name + "' not in header");
    }
    return it->second;
  };
  auto optional_column = [&](const std::optional<std::string> & name) -> std::optional<size_t> {
    if (!name) {
      return std::nullopt;
    }
    return column(*name);
  };
  const size_t c_id = column(mapping.track_id);
  const size_t c_time = column(mapping.time);
  const size_t c_x = column(mapping.x);
  const size_t c_y = column(mapping.y);
  const auto c_heading = optional_column(mapping.heading);
  const auto c_length = optional_column(mapping.length);
  const auto c_width = optional_column(mapping.width);
  const auto c_cls = optional_column(mapping.cls);
  const auto c_vx = optional_column(mapping.vx);
  const auto c_vy = optional_column(mapping.vy);
  const auto c_speed = optional_column(mapping.speed);
  if (c_vx.has_value() != c_vy.has_value()) {
    throw Error(ErrorCode::MissingColumn, "velocity columns must be mapped in pairs");
  }
  if (mapping.time_unit == TimeUnit::Frames && mapping.frame_interval_ms <= 0) {
    throw Error(ErrorCode::BadNumeric, "frame-indexed time requires frame_interval_ms > 0");
  }

  std::map<TrackId, std::vector<detail::RawRow>> rows_by_track;
  size_t row_number = 1;
  while (std::getline(source, line)) {
    ++row_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const auto fields = detail::split_csv_line(line);
    auto field = [&](size_t col, const std::string & name) -> const std::string & {
      if (col >= fields.size()) {
        throw Error(
          ErrorCode::BadNumeric,
          "row " + std::to_string(row_number) + ", column '" + name + "': missing field");
      }
      return fields[col];
    };
    auto number = [&](size_t col, const std::string & name) {
      return detail::parse_number<double>(field(col, name), row_number, name);
    };

    detail::RawRow raw;
    raw.row = row_number;
    raw.track_id = detail::parse_number<TrackId>(field(c_id, mapping.track_id), row_number, mapping.track_id);
    const double t = number(c_time, mapping.time);
    switch (mapping.time_unit) {
      case TimeUnit::Milliseconds:
        raw.timestamp = static_cast<TimestampMs>(std::llround(t));
        break;
      case TimeUnit::Seconds:
        raw.timestamp = static_cast<TimestampMs>(std::llround(t * 1000.0));
        break;
      case TimeUnit::Frames:
        raw.timestamp = static_cast<TimestampMs>(std::llround(t)) * mapping.frame_interval_ms;
        break;
    }
    raw.x = number(c_x, mapping.x);
    raw.y = number(c_y, mapping.y);
    if (c_heading) {
      double h = number(*c_heading, *mapping.heading);
      if (mapping.heading_in_degrees) {
        h *= std::numbers::pi / 180.0;
      }
      raw.heading = h;
    }
    if (c_length) {
      raw.length = number(*c_length, *mapping.length);
    }
    if (c_width) {
      raw.width = number(*c_width, *mapping.width);
    }
    if (c_cls) {
      const auto & text = field(*c_cls, *mapping.cls);
      raw.cls = parse_object_class(text);
      if (!raw.cls) {
        throw Error(
          ErrorCode::UnknownClass,
          "row " + std::to_string(row_number) + ", column '" + *mapping.cls + "': '" + text + "'");
      }
    }
    if (c_vx) {
      raw.vx = number(*c_vx, *mapping.vx);
      raw.vy = number(*c_vy, *mapping.vy);
    }
    if (c_speed) {
      raw.speed = number(*c_speed, *mapping.speed);
      if (*raw.speed < 0.0) {
        throw Error(
          ErrorCode::BadNumeric,
          "row " + std::to_string(row_number) + ", column '" + *mapping.speed + "': negative speed");
      }
    }
    rows_by_track[raw.track_id].push_back(raw);
  }

  std::vector<Track> tracks;
  for (auto & [id, rows] : rows_by_track) {
    std::sort(rows.begin(), rows.end(), [](const auto & a, const auto & b) {
      return a.timestamp < b.timestamp;
    });
    for (size_t k = 1; k < rows.size(); ++k) {
      if (rows[k].timestamp == rows[k - 1].timestamp) {
        throw Error(
          ErrorCode::NonMonotonicTime, "track " + std::to_string(id) + " has two rows at t=" +
                                         std::to_string(rows[k].timestamp) + " ms (rows " +
                                         std::to_string(std::min(rows[k].row, rows[k - 1].row)) +
                                         ", " +
                                         std::to_string(std::max(rows[k].row, rows[k - 1].row)) + ")");
      }
    }

    Track track;
    track.object.track_id = id;
    const auto & first = rows.front();
    track.object.cls = first.cls.value_or(ObjectClass::Car);
    const ClassExtent fallback = default_extent(track.object.cls);
    track.object.length = first.length.value_or(fallback.length);
    track.object.width = first.width.value_or(fallback.width);

    for (size_t k = 0; k < rows.size(); ++k) {
      const auto & r = rows[k];
      ObjectState s;
      s.timestamp = r.timestamp;
      s.x = r.x;
      s.y = r.y;

      // finite difference fallback, forward except at the last state
      std::optional<Vec2> fd_velocity;
      if (rows.size() > 1) {
        const auto & a = k + 1 < rows.size() ? rows[k] : rows[k - 1];
        const auto & b = k + 1 < rows.size() ? rows[k + 1] : rows[k];
        const double dt = static_cast<double>(b.timestamp - a.timestamp) / 1000.0;
        fd_velocity = Vec2{(b.x - a.x) / dt, (b.y - a.y) / dt};
      }

      std::optional<Vec2> velocity;
      if (r.vx) {
        velocity = Vec2{*r.vx, *r.vy};
      } else if (!r.speed) {
        velocity = fd_velocity;
      }
      if (r.speed) {
        s.speed = *r.speed;
      } else if (velocity) {
        s.speed = norm(*velocity);
      }

      if (r.heading) {
        s.yaw = normalize_angle(*r.heading);
      } else if (velocity && norm(*velocity) > 1e-6) {
        s.yaw = normalize_angle(std::atan2(velocity->y, velocity->x));
      } else if (fd_velocity && norm(*fd_velocity) > 1e-6) {
        s.yaw = normalize_angle(std::atan2(fd_velocity->y, fd_velocity->x));
      }
      const std::optional<Vec2> heading_source = velocity ? velocity : fd_velocity;
      if (heading_source && norm(*heading_source) > 1e-6) {
        s.velocity_heading = normalize_angle(std::atan2(heading_source->y, heading_source->x));
      } else {
        s.velocity_heading = s.yaw;
      }
      track.states.push_back(s);
    }
    tracks.push_back(std::move(track));
  }

  std::optional<TimestampMs> frame_interval;
  if (mapping.frame_interval_ms > 0) {
    frame_interval = mapping.frame_interval_ms;
  }
  return Scenario(scenario_id, std::move(tracks), frame_interval);
}

inline Scenario parse_tracks(
  const std::string & text, const ColumnMapping & mapping = {}, const std::string & scenario_id = "scenario")
{
  std::istringstream in(text);
  return parse_tracks(in, mapping, scenario_id);
}

/// Column mapping from a key-value JSON document. Keys absent from the
/// document keep their defaults; a null value disables an optional column.
inline ColumnMapping column_mapping_from_json(const Json & doc)
{
  if (!doc.is_object()) {
    throw Error(ErrorCode::SchemaViolation, "column mapping must be a JSON object");
  }
  ColumnMapping m;
  auto required = [&](const char * key, std::string & target) {
    if (doc.contains(key)) {
      if (!doc[key].is_string()) {
        throw Error(ErrorCode::SchemaViolation, std::string("mapping key '") + key + "' must be a string");
      }
      target = doc[key].get<std::string>();
    }
  };
  auto optional = [&](const char * key, std::optional<std::string> & target) {
    if (!doc.contains(key)) {
      return;
    }
    if (doc[key].is_null()) {
      target.reset();
    } else if (doc[key].is_string()) {
      target = doc[key].get<std::string>();
    } else {
      throw Error(ErrorCode::SchemaViolation, std::string("mapping key '") + key + "' must be a string or null");
    }
  };
  required("track_id", m.track_id);
  required("time", m.time);
  required("x", m.x);
  required("y", m.y);
  optional("heading", m.heading);
  optional("length", m.length);
  optional("width", m.width);
  optional("class", m.cls);
  optional("vx", m.vx);
  optional("vy", m.vy);
  optional("speed", m.speed);
  if (doc.contains("time_unit")) {
    if (!doc["time_unit"].is_string()) {
      throw Error(ErrorCode::SchemaViolation, "time_unit must be a string");
    }
    const auto unit = doc["time_unit"].get<std::string>();
    if (unit == "ms") {
      m.time_unit = TimeUnit::Milliseconds;
    } else if (unit == "s") {
      m.time_unit = TimeUnit::Seconds;
    } else if (unit == "frame" || unit == "frames") {
      m.time_unit = TimeUnit::Frames;
    } else {
      throw Error(ErrorCode::SchemaViolation, "time_unit must be one of ms, s, frame");
    }
  }
  if (doc.contains("heading_in_degrees")) {
    if (!doc["heading_in_degrees"].is_boolean()) {
      throw Error(ErrorCode::SchemaViolation, "heading_in_degrees must be a boolean");
    }
    m.heading_in_degrees = doc["heading_in_degrees"].get<bool>();
  }
  if (doc.contains("frame_interval_ms")) {
    if (!doc["frame_interval_ms"].is_number_integer() || doc["frame_interval_ms"].get<TimestampMs>() <= 0) {
      throw Error(ErrorCode::SchemaViolation, "frame_interval_ms must be a positive integer");
    }
    m.frame_interval_ms = doc["frame_interval_ms"].get<TimestampMs>();
  }
  return m;
}

// ---------------------------------------------------------------------------
// Scenario serialization
// ---------------------------------------------------------------------------

inline constexpr int kScenarioFormatVersion = 1;

/// Full-precision JSON; `scenario_from_json(scenario_to_json(s)) == s`.
inline Json scenario_to_json(const Scenario & scenario)
{
  Json doc;
  doc["format"] = "critscene.scenario";
  doc["version"] = kScenarioFormatVersion;
  doc["id"] = scenario.id();
  doc["frame_interval_ms"] = scenario.frame_interval();
  Json tracks = Json::array();
  for (const auto & track : scenario.tracks()) {
    Json t;
    t["track_id"] = track.object.track_id;
    t["class"] = std::string(to_string(track.object.cls));
    t["length"] = track.object.length;
    t["width"] = track.object.width;
    Json states = Json::array();
    for (const auto & s : track.states) {
      states.push_back(Json::array({s.timestamp, s.x, s.y, s.yaw, s.speed, s.velocity_heading}));
    }
    t["states"] = std::move(states);
    tracks.push_back(std::move(t));
  }
  doc["tracks"] = std::move(tracks);
  return doc;
}

inline Scenario scenario_from_json(const Json & doc)
{
  try {
    if (doc.at("format") != "critscene.scenario") {
      throw Error(ErrorCode::SchemaViolation, "not a scenario document");
    }
    if (doc.at("version").get<int>() != kScenarioFormatVersion) {
      throw Error(ErrorCode::SchemaViolation, "unsupported scenario version");
    }
    std::vector<Track> tracks;
    for (const auto & t : doc.at("tracks")) {
      Track track;
      track.object.track_id = t.at("track_id").get<TrackId>();
      const auto cls = parse_object_class(t.at("class").get<std::string>());
      if (!cls) {
        throw Error(ErrorCode::UnknownClass, t.at("class").get<std::string>());
      }
      track.object.cls = *cls;
      track.object.length = t.at("length").get<double>();
      track.object.width = t.at("width").get<double>();
      for (const auto & s : t.at("states")) {
        if (!s.is_array() || s.size() != 6) {
          throw Error(ErrorCode::SchemaViolation, "state must be [t, x, y, yaw, speed, velocity_heading]");
        }
        track.states.push_back(
          {s[0].get<TimestampMs>(), s[1].get<double>(), s[2].get<double>(), s[3].get<double>(),
           s[4].get<double>(), s[5].get<double>()});
      }
      tracks.push_back(std::move(track));
    }
    return Scenario(doc.at("id").get<std::string>(), std::move(tracks), doc.at("frame_interval_ms").get<TimestampMs>());
  } catch (const Json::exception & e) {
    throw Error(ErrorCode::SchemaViolation, std::string("scenario document: ") + e.what());
  }
}

/// Writes the scenario back as CSV in the default column layout.
inline std::string scenario_to_csv(const Scenario & scenario)
{
  std::ostringstream out;
  out << "trackId,timestamp,xCenter,yCenter,heading,length,width,class,xVelocity,yVelocity\n";
  char buf[512];
  for (const auto & track : scenario.tracks()) {
    for (const auto & s : track.states) {
      std::snprintf(
        buf, sizeof(buf), "%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g\n",
        static_cast<long long>(track.object.track_id), static_cast<long long>(s.timestamp), s.x, s.y,
        s.yaw, track.object.length, track.object.width, std::string(to_string(track.object.cls)).c_str(),
        s.speed * std::cos(s.velocity_heading), s.speed * std::sin(s.velocity_heading));
      out << buf;
    }
  }
  return out.str();
}

}  // namespace critscene

#endif  // CRITSCENE__INGEST_HPP_
