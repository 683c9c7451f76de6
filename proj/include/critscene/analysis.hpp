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

#ifndef CRITSCENE__ANALYSIS_HPP_
#define CRITSCENE__ANALYSIS_HPP_

#include "critscene/criticality.hpp"
#include "critscene/error.hpp"
#include "critscene/ingest.hpp"
#include "critscene/json_util.hpp"
#include "critscene/lanemap.hpp"
#include "critscene/scenegraph.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

namespace critscene
{

enum class Measure { InvTTC, RSS, SFF };

inline constexpr Measure kAllMeasures[] = {Measure::InvTTC, Measure::RSS, Measure::SFF};

inline std::string_view to_string(Measure m)
{
  switch (m) {
    case Measure::InvTTC:
      return "inv_ttc";
    case Measure::RSS:
      return "rss";
    case Measure::SFF:
      return "sff";
  }
  return "inv_ttc";
}

inline std::optional<Measure> parse_measure(std::string_view text)
{
  for (Measure m : kAllMeasures) {
    if (text == to_string(m)) {
      return m;
    }
  }
  return std::nullopt;
}

/// Scalar value of a record under one measure; RSS maps unsafe to 1 and safe to 0.
inline std::optional<double> measure_value(const CriticalityRecord & r, Measure m)
{
  switch (m) {
    case Measure::InvTTC:
      return r.inv_ttc;
    case Measure::RSS:
      if (!r.rss_unsafe) {
        return std::nullopt;
      }
      return *r.rss_unsafe ? 1.0 : 0.0;
    case Measure::SFF:
      return r.sff_potential;
  }
  return std::nullopt;
}

struct TimelinePoint
{
  TimestampMs timestamp = 0;
  double value = 0.0;
};

struct Timeline
{
  Measure measure = Measure::InvTTC;
  std::vector<TimelinePoint> points;
};

struct AnalysisOptions
{
  GraphConfig graph;
  unsigned threads = 1;  // 0 uses the hardware concurrency
};

struct AnalysisResult
{
  std::vector<CriticalityRecord> records;  // ordered by (timestamp, from, to, kind)
  std::vector<Timeline> timelines;         // one per requested measure, in request order
};

inline bool record_less(const CriticalityRecord & a, const CriticalityRecord & b)
{
  return std::tie(a.timestamp, a.from, a.to, a.kind) < std::tie(b.timestamp, b.from, b.to, b.kind);
}

/// Max over the records at each scenario timestamp; frames without records read 0.
inline Timeline build_timeline(
  const std::vector<TimestampMs> & timestamps, const std::vector<CriticalityRecord> & records, Measure measure)
{
  Timeline tl;
  tl.measure = measure;
  std::map<TimestampMs, double> peak;
  for (const auto & r : records) {
    if (const auto v = measure_value(r, measure)) {
      auto [it, inserted] = peak.emplace(r.timestamp, *v);
      if (!inserted) {
        it->second = std::max(it->second, *v);
      }
    }
  }
  tl.points.reserve(timestamps.size());
  for (TimestampMs t : timestamps) {
    auto it = peak.find(t);
    tl.points.push_back({t, it == peak.end() ? 0.0 : std::max(0.0, it->second)});
  }
  return tl;
}

/// Evaluates one frame: scene extraction, graph construction, edge measures.
inline std::vector<CriticalityRecord> analyze_frame(
  const Scenario & scenario, const LaneMap & map, const MeasureParams & params, TimestampMs t,
  const GraphConfig & graph_config = {})
{
  const SceneGraph graph = build_scene_graph(scene_at(scenario, t), map, graph_config);
  return evaluate_graph(graph, params);
}

inline AnalysisResult analyze_scenario(
  const Scenario & scenario, const LaneMap & map, const MeasureParams & params, const std::vector<Measure> & measures,
  const AnalysisOptions & options = {})
{
  const auto & timestamps = scenario.timestamps();
  std::vector<std::vector<CriticalityRecord>> per_frame(timestamps.size());

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<size_t>(1, timestamps.size())));

  if (threads <= 1) {
    for (size_t k = 0; k < timestamps.size(); ++k) {
      per_frame[k] = analyze_frame(scenario, map, params, timestamps[k], options.graph);
    }
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (size_t k = next++; k < timestamps.size(); k = next++) {
          try {
            per_frame[k] = analyze_frame(scenario, map, params, timestamps[k], options.graph);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
          }
        }
      });
    }
    for (auto & th : pool) {
      th.join();
    }
    if (failure) {
      std::rethrow_exception(failure);
    }
  }

  AnalysisResult result;
  for (auto & frame : per_frame) {
    std::sort(frame.begin(), frame.end(), record_less);
    result.records.insert(result.records.end(), frame.begin(), frame.end());
  }
  for (Measure m : measures) {
    result.timelines.push_back(build_timeline(timestamps, result.records, m));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Critical intervals
// ---------------------------------------------------------------------------

struct CriticalInterval
{
  Measure measure = Measure::InvTTC;
  TimestampMs t_start = 0;
  TimestampMs t_end = 0;
  double peak_value = 0.0;
  TimestampMs peak_timestamp = 0;
  std::optional<std::pair<TrackId, TrackId>> peak_pair;
};

/// Record carrying the timeline value at `t` (first in record order on ties).
inline const CriticalityRecord * peak_record(
  const std::vector<CriticalityRecord> & records, Measure measure, TimestampMs t)
{
  auto lo = std::lower_bound(records.begin(), records.end(), t, [](const CriticalityRecord & r, TimestampMs value) {
    return r.timestamp < value;
  });
  const CriticalityRecord * best = nullptr;
  double best_value = 0.0;
  for (auto it = lo; it != records.end() && it->timestamp == t; ++it) {
    const auto v = measure_value(*it, measure);
    if (v && (!best || *v > best_value)) {
      best = &*it;
      best_value = *v;
    }
  }
  return best;
}

/// Maximal runs of points strictly above `threshold`; runs separated by fewer
/// than `min_gap` below-threshold frames are merged. `records` must be sorted
/// by timestamp and supply the peak pair.
inline std::vector<CriticalInterval> detect_critical_intervals(
  const Timeline & timeline, const std::vector<CriticalityRecord> & records, double threshold, int min_gap = 5)
{
  if (!(threshold >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "threshold must be >= 0");
  }
  if (min_gap < 0) {
    throw Error(ErrorCode::InvalidParameter, "min_gap must be >= 0");
  }
  const auto & pts = timeline.points;
  std::vector<std::pair<size_t, size_t>> runs;  // inclusive index ranges
  for (size_t k = 0; k < pts.size();) {
    if (!(pts[k].value > threshold)) {
      ++k;
      continue;
    }
    size_t end = k;
    while (end + 1 < pts.size() && pts[end + 1].value > threshold) {
      ++end;
    }
    if (!runs.empty() && static_cast<long>(k - runs.back().second - 1) < min_gap) {
      runs.back().second = end;
    } else {
      runs.emplace_back(k, end);
    }
    k = end + 1;
  }

  std::vector<CriticalInterval> intervals;
  for (const auto & [first, last] : runs) {
    CriticalInterval iv;
    iv.measure = timeline.measure;
    iv.t_start = pts[first].timestamp;
    iv.t_end = pts[last].timestamp;
    size_t peak = first;
    for (size_t k = first; k <= last; ++k) {
      if (pts[k].value > pts[peak].value) {
        peak = k;
      }
    }
    iv.peak_value = pts[peak].value;
    iv.peak_timestamp = pts[peak].timestamp;
    if (const auto * rec = peak_record(records, timeline.measure, iv.peak_timestamp)) {
      iv.peak_pair = std::make_pair(rec->from, rec->to);
    }
    intervals.push_back(iv);
  }
  return intervals;
}

/// Intervals for one measure of an analysis result. The CLI and the HTTP
/// service both go through here.
inline std::vector<CriticalInterval> detect_intervals(
  const AnalysisResult & result, Measure measure, double threshold, int min_gap)
{
  for (const auto & tl : result.timelines) {
    if (tl.measure == measure) {
      return detect_critical_intervals(tl, result.records, threshold, min_gap);
    }
  }
  throw Error(ErrorCode::InvalidParameter, "measure '" + std::string(to_string(measure)) + "' was not analyzed");
}

struct PairSeries
{
  TrackId from = 0;
  TrackId to = 0;
  Measure measure = Measure::InvTTC;
  std::vector<TimelinePoint> points;
};

/// Per-pair, per-measure series of the records inside the interval's time span.
inline std::vector<PairSeries> pair_breakdown(
  const std::vector<CriticalityRecord> & records, const CriticalInterval & interval)
{
  std::map<std::tuple<TrackId, TrackId, int>, PairSeries> series;
  for (const auto & r : records) {
    if (r.timestamp < interval.t_start || r.timestamp > interval.t_end) {
      continue;
    }
    for (Measure m : kAllMeasures) {
      const auto v = measure_value(r, m);
      if (!v) {
        continue;
      }
      auto & s = series[{r.from, r.to, static_cast<int>(m)}];
      s.from = r.from;
      s.to = r.to;
      s.measure = m;
      if (!s.points.empty() && s.points.back().timestamp == r.timestamp) {
        s.points.back().value = std::max(s.points.back().value, *v);
      } else {
        s.points.push_back({r.timestamp, *v});
      }
    }
  }
  std::vector<PairSeries> out;
  out.reserve(series.size());
  for (auto & [key, s] : series) {
    std::sort(s.points.begin(), s.points.end(), [](const auto & a, const auto & b) {
      return a.timestamp < b.timestamp;
    });
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline Json timeline_to_json(const Timeline & tl)
{
  Json points = Json::array();
  for (const auto & p : tl.points) {
    points.push_back(Json::array({p.timestamp, json_number(p.value)}));
  }
  return {{"measure", std::string(to_string(tl.measure))}, {"points", std::move(points)}};
}

inline Json interval_to_json(const CriticalInterval & iv)
{
  Json j;
  j["measure"] = std::string(to_string(iv.measure));
  j["t_start"] = iv.t_start;
  j["t_end"] = iv.t_end;
  j["peak_value"] = json_number(iv.peak_value);
  j["peak_timestamp"] = iv.peak_timestamp;
  j["peak_pair"] = iv.peak_pair ? Json::array({iv.peak_pair->first, iv.peak_pair->second}) : Json(nullptr);
  return j;
}

inline Json intervals_to_json(const std::vector<CriticalInterval> & intervals, double threshold, int min_gap)
{
  Json list = Json::array();
  for (const auto & iv : intervals) {
    list.push_back(interval_to_json(iv));
  }
  return {{"threshold", json_number(threshold)}, {"min_gap", min_gap}, {"intervals", std::move(list)}};
}

inline Json pair_series_to_json(const PairSeries & s)
{
  Json points = Json::array();
  for (const auto & p : s.points) {
    points.push_back(Json::array({p.timestamp, json_number(p.value)}));
  }
  return {
    {"from", s.from}, {"to", s.to}, {"measure", std::string(to_string(s.measure))}, {"points", std::move(points)}};
}

/// Peak of a timeline (first occurrence), or nullopt when empty.
inline std::optional<TimelinePoint> timeline_peak(const Timeline & tl)
{
  std::optional<TimelinePoint> best;
  for (const auto & p : tl.points) {
    if (!best || p.value > best->value) {
      best = p;
    }
  }
  return best;
}

inline Json summary_to_json(const Scenario & scenario, const AnalysisResult & result)
{
  Json doc;
  doc["format"] = "critscene.summary";
  doc["version"] = 1;
  Json sc;
  sc["id"] = scenario.id();
  sc["t_start"] = scenario.empty() ? Json(nullptr) : Json(scenario.timestamps().front());
  sc["t_end"] = scenario.empty() ? Json(nullptr) : Json(scenario.timestamps().back());
  sc["frames"] = scenario.timestamps().size();
  sc["tracks"] = scenario.tracks().size();
  sc["frame_interval_ms"] = scenario.frame_interval();
  doc["scenario"] = std::move(sc);
  doc["record_count"] = result.records.size();
  Json peaks = Json::array();
  Json timelines = Json::array();
  for (const auto & tl : result.timelines) {
    Json peak;
    peak["measure"] = std::string(to_string(tl.measure));
    if (const auto p = timeline_peak(tl)) {
      peak["value"] = json_number(p->value);
      peak["timestamp"] = p->timestamp;
      const auto * rec = peak_record(result.records, tl.measure, p->timestamp);
      peak["pair"] = rec && p->value > 0.0 ? Json::array({rec->from, rec->to}) : Json(nullptr);
    } else {
      peak["value"] = nullptr;
      peak["timestamp"] = nullptr;
      peak["pair"] = nullptr;
    }
    peaks.push_back(std::move(peak));
    timelines.push_back(timeline_to_json(tl));
  }
  doc["peaks"] = std::move(peaks);
  doc["timelines"] = std::move(timelines);
  return doc;
}

/// One row per timestamp, one column per timeline.
inline std::string timelines_to_csv(const std::vector<Timeline> & timelines)
{
  std::ostringstream out;
  out << "timestamp";
  for (const auto & tl : timelines) {
    out << ',' << to_string(tl.measure);
  }
  out << '\n';
  if (timelines.empty()) {
    return out.str();
  }
  for (size_t k = 0; k < timelines.front().points.size(); ++k) {
    out << timelines.front().points[k].timestamp;
    for (const auto & tl : timelines) {
      out << ',' << format_fixed(tl.points[k].value);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace critscene

#endif  // CRITSCENE__ANALYSIS_HPP_
