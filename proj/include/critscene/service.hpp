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

#ifndef CRITSCENE__SERVICE_HPP_
#define CRITSCENE__SERVICE_HPP_

#include "critscene/analysis.hpp"
#include "critscene/criticality.hpp"
#include "critscene/error.hpp"
#include "critscene/ingest.hpp"
#include "critscene/json_util.hpp"
#include "critscene/lanemap.hpp"
#include "critscene/scenegraph.hpp"
#include "critscene/visexport.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace critscene
{

/// Everything the API serves for one scenario; immutable once built.
struct ScenarioHandle
{
  std::string id;
  Scenario scenario;
  LaneMap map;
  MeasureParams params;
  GraphConfig graph_config;
  AnalysisResult analysis;  // all measures
  int default_min_gap = 5;
  bool ready = false;
};

/// Loads inputs and runs the full analysis for every measure.
inline std::shared_ptr<const ScenarioHandle> make_scenario_handle(
  std::string id, Scenario scenario, LaneMap map, MeasureParams params = {}, GraphConfig graph_config = {},
  unsigned threads = 1)
{
  auto handle = std::make_shared<ScenarioHandle>();
  handle->id = std::move(id);
  handle->scenario = std::move(scenario);
  handle->map = std::move(map);
  handle->params = std::move(params);
  handle->graph_config = graph_config;
  AnalysisOptions options;
  options.graph = graph_config;
  options.threads = threads;
  handle->analysis = analyze_scenario(
    handle->scenario, handle->map, handle->params, {std::begin(kAllMeasures), std::end(kAllMeasures)}, options);
  handle->ready = true;
  return handle;
}

/// Reads `<dir>/tracks.csv`, `<dir>/map.json` and the optional
/// `<dir>/params.json` and `<dir>/mapping.json`.
inline std::shared_ptr<const ScenarioHandle> load_scenario_dir(
  const std::filesystem::path & dir, const std::string & id, unsigned threads = 1)
{
  ColumnMapping mapping;
  if (std::filesystem::exists(dir / "mapping.json")) {
    mapping = column_mapping_from_json(
      parse_json_text(read_text_file((dir / "mapping.json").string()), ErrorCode::SchemaViolation, "mapping"));
  }
  MeasureParams params;
  if (std::filesystem::exists(dir / "params.json")) {
    params = measure_params_from_json(
      parse_json_text(read_text_file((dir / "params.json").string()), ErrorCode::InvalidParameter, "params"));
  }
  std::ifstream tracks((dir / "tracks.csv").string(), std::ios::binary);
  if (!tracks) {
    throw Error(ErrorCode::Io, "cannot open '" + (dir / "tracks.csv").string() + "'");
  }
  Scenario scenario = parse_tracks(tracks, mapping, id);
  LaneMap map = load_lane_map(read_text_file((dir / "map.json").string()));
  return make_scenario_handle(id, std::move(scenario), std::move(map), std::move(params), {}, threads);
}

struct ApiRequest
{
  std::string path;
  std::map<std::string, std::string> query;
};

struct ApiResponse
{
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Read-only API over preloaded scenarios. `handle()` is a pure function of
/// the request and the immutable store, so concurrent calls are safe.
class ScenarioService
{
public:
  void add(std::shared_ptr<const ScenarioHandle> handle)
  {
    const std::string id = handle->id;
    handles_[id] = std::move(handle);
  }

  /// Every subdirectory holding `tracks.csv` and `map.json` becomes a scenario
  /// named after the directory.
  void load_directory(const std::filesystem::path & root, unsigned threads = 1)
  {
    if (!std::filesystem::is_directory(root)) {
      throw Error(ErrorCode::Io, "scenario directory '" + root.string() + "' does not exist");
    }
    std::vector<std::filesystem::path> dirs;
    for (const auto & entry : std::filesystem::directory_iterator(root)) {
      if (
        entry.is_directory() && std::filesystem::exists(entry.path() / "tracks.csv") &&
        std::filesystem::exists(entry.path() / "map.json")) {
        dirs.push_back(entry.path());
      }
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto & dir : dirs) {
      add(load_scenario_dir(dir, dir.filename().string(), threads));
    }
  }

  size_t size() const { return handles_.size(); }

  ApiResponse handle(const ApiRequest & req) const
  {
    try {
      return route(req);
    } catch (const HttpError & e) {
      return error(e.status, e.message);
    } catch (const Error & e) {
      switch (e.code()) {
        case ErrorCode::UnknownTimestamp:
          return error(404, e.what());
        case ErrorCode::EmptyWindow:
        case ErrorCode::InvalidParameter:
          return error(422, e.what());
        default:
          return error(500, e.what());
      }
    }
  }

private:
  struct HttpError
  {
    int status;
    std::string message;
  };

  std::map<std::string, std::shared_ptr<const ScenarioHandle>> handles_;

  static ApiResponse ok(const Json & body) { return {200, body.dump(), "application/json"}; }

  static ApiResponse error(int status, const std::string & message)
  {
    return {status, Json{{"error", message}, {"status", status}}.dump(), "application/json"};
  }

  static std::vector<std::string> split_path(const std::string & path)
  {
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= path.size()) {
      const size_t end = path.find('/', start);
      const std::string part = path.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (!part.empty()) {
        parts.push_back(part);
      }
      if (end == std::string::npos) {
        break;
      }
      start = end + 1;
    }
    return parts;
  }

  template <typename T>
  static std::optional<T> parse_query_number(const ApiRequest & req, const std::string & key)
  {
    auto it = req.query.find(key);
    if (it == req.query.end()) {
      return std::nullopt;
    }
    T value{};
    const auto & text = it->second;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    bool ok = ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
    if constexpr (std::is_floating_point_v<T>) {
      ok = ok && std::isfinite(value);
    }
    if (!ok) {
      throw HttpError{400, "query parameter '" + key + "' is not a number: '" + text + "'"};
    }
    return value;
  }

  static Measure query_measure(const ApiRequest & req)
  {
    auto it = req.query.find("measure");
    if (it == req.query.end()) {
      return Measure::InvTTC;
    }
    const auto m = parse_measure(it->second);
    if (!m) {
      throw HttpError{400, "unknown measure '" + it->second + "' (expected inv_ttc, rss or sff)"};
    }
    return *m;
  }

  static double query_threshold(const ApiRequest & req)
  {
    const double threshold = parse_query_number<double>(req, "threshold").value_or(0.0);
    if (threshold < 0.0) {
      throw HttpError{422, "threshold must be >= 0"};
    }
    return threshold;
  }

  static TimestampMs path_timestamp(const ScenarioHandle & h, const std::string & text)
  {
    TimestampMs t = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), t);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw HttpError{400, "timestamp '" + text + "' is not an integer"};
    }
    if (!h.scenario.has_timestamp(t)) {
      throw HttpError{404, "scenario '" + h.id + "' has no frame at t=" + text};
    }
    return t;
  }

  const ScenarioHandle & lookup(const std::string & id) const
  {
    auto it = handles_.find(id);
    if (it == handles_.end() || !it->second->ready) {
      throw HttpError{404, "unknown scenario '" + id + "'"};
    }
    return *it->second;
  }

  static Json scenario_summary(const ScenarioHandle & h)
  {
    Json j;
    j["id"] = h.id;
    const auto & ts = h.scenario.timestamps();
    j["t_start"] = ts.empty() ? Json(nullptr) : Json(ts.front());
    j["t_end"] = ts.empty() ? Json(nullptr) : Json(ts.back());
    j["frames"] = ts.size();
    j["track_count"] = h.scenario.tracks().size();
    Json measures = Json::array();
    for (const auto & tl : h.analysis.timelines) {
      measures.push_back(std::string(to_string(tl.measure)));
    }
    j["measures"] = std::move(measures);
    return j;
  }

  static std::vector<CriticalityRecord> records_at(const ScenarioHandle & h, TimestampMs t)
  {
    const auto & recs = h.analysis.records;
    auto lo = std::lower_bound(recs.begin(), recs.end(), t, [](const CriticalityRecord & r, TimestampMs v) {
      return r.timestamp < v;
    });
    auto hi = std::upper_bound(recs.begin(), recs.end(), t, [](TimestampMs v, const CriticalityRecord & r) {
      return v < r.timestamp;
    });
    return {lo, hi};
  }

  static Json poses_json(const ScenarioHandle & h, TimestampMs t)
  {
    const Scene scene = scene_at(h.scenario, t);
    Json actors = Json::array();
    for (const auto & obj : scene.objects) {
      const auto & s = obj.state;
      const double height = default_extent(obj.object.cls).height;
      const Vec2 forward{std::cos(s.yaw), std::sin(s.yaw)};
      const Vec2 left{-forward.y, forward.x};
      const Vec2 eye = s.position() + 0.3 * left;
      const double eye_z = 0.5 * height + 0.5;
      Json a;
      a["track_id"] = obj.object.track_id;
      a["class"] = std::string(to_string(obj.object.cls));
      a["position"] = Json::array({json_number(s.x), json_number(s.y), json_number(0.5 * height)});
      a["yaw"] = json_number(s.yaw);
      a["speed"] = json_number(s.speed);
      a["extent"] = Json::array({json_number(obj.object.length), json_number(obj.object.width), json_number(height)});
      a["camera"] = {
        {"eye", Json::array({json_number(eye.x), json_number(eye.y), json_number(eye_z)})},
        {"forward", Json::array({json_number(forward.x), json_number(forward.y), 0.0})},
        {"target",
         Json::array({json_number(eye.x + forward.x), json_number(eye.y + forward.y), json_number(eye_z)})},
        {"up", Json::array({0.0, 0.0, 1.0})}};
      actors.push_back(std::move(a));
    }
    return {{"scenario", h.id}, {"timestamp", t}, {"actors", std::move(actors)}};
  }

  ApiResponse route(const ApiRequest & req) const
  {
    const auto parts = split_path(req.path);
    if (parts.size() < 2 || parts[0] != "api" || parts[1] != "scenarios") {
      throw HttpError{404, "no route for '" + req.path + "'"};
    }
    if (parts.size() == 2) {
      Json list = Json::array();
      for (const auto & [id, h] : handles_) {
        if (h->ready) {
          list.push_back(scenario_summary(*h));
        }
      }
      return ok({{"scenarios", std::move(list)}});
    }
    const ScenarioHandle & h = lookup(parts[2]);
    if (parts.size() == 3) {
      return ok(scenario_summary(h));
    }
    const std::string & leaf = parts[3];
    if (parts.size() == 4) {
      if (leaf == "timestamps") {
        return ok({{"scenario", h.id}, {"timestamps", h.scenario.timestamps()}});
      }
      if (leaf == "map") {
        return ok(lane_map_to_json(h.map));
      }
      if (leaf == "timeline") {
        const Measure m = query_measure(req);
        for (const auto & tl : h.analysis.timelines) {
          if (tl.measure == m) {
            return ok(timeline_to_json(tl));
          }
        }
        throw HttpError{404, "measure not analyzed"};
      }
      if (leaf == "intervals") {
        const Measure m = query_measure(req);
        const double threshold = query_threshold(req);
        const int min_gap = parse_query_number<int>(req, "min_gap").value_or(h.default_min_gap);
        if (min_gap < 0) {
          throw HttpError{422, "min_gap must be >= 0"};
        }
        return ok(intervals_to_json(detect_intervals(h.analysis, m, threshold, min_gap), threshold, min_gap));
      }
      if (leaf == "cube") {
        const auto & ts = h.scenario.timestamps();
        if (ts.empty()) {
          throw HttpError{422, "scenario has no frames"};
        }
        const TimestampMs from = parse_query_number<TimestampMs>(req, "from").value_or(ts.front());
        const TimestampMs to = parse_query_number<TimestampMs>(req, "to").value_or(ts.back());
        const int stride = parse_query_number<int>(req, "stride").value_or(1);
        if (stride < 1) {
          throw HttpError{422, "stride must be >= 1"};
        }
        const double time_scale = parse_query_number<double>(req, "time_scale").value_or(1.0);
        if (!(time_scale > 0.0)) {
          throw HttpError{422, "time_scale must be > 0"};
        }
        return ok(vis_document_to_json(export_space_time_cube(h.scenario, from, to, stride, time_scale)));
      }
    }
    if (parts.size() == 6 && leaf == "frames") {
      const TimestampMs t = path_timestamp(h, parts[4]);
      if (parts[5] == "graph") {
        const Measure m = query_measure(req);
        const double threshold = query_threshold(req);
        const SceneGraph graph = build_scene_graph(scene_at(h.scenario, t), h.map, h.graph_config);
        const VisDocument view = export_scene_graph_view(graph, records_at(h, t), threshold, m);
        return ok({{"view", vis_document_to_json(view)}, {"graph", scene_graph_to_json(graph)}});
      }
      if (parts[5] == "poses") {
        return ok(poses_json(h, t));
      }
    }
    throw HttpError{404, "no route for '" + req.path + "'"};
  }
};

}  // namespace critscene

#endif  // CRITSCENE__SERVICE_HPP_
