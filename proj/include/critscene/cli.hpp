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

#ifndef CRITSCENE__CLI_HPP_
#define CRITSCENE__CLI_HPP_

#include "critscene/analysis.hpp"
#include "critscene/criticality.hpp"
#include "critscene/error.hpp"
#include "critscene/ingest.hpp"
#include "critscene/json_util.hpp"
#include "critscene/lanemap.hpp"
#include "critscene/scenegraph.hpp"
#include "critscene/service.hpp"
#include "critscene/service_http.hpp"
#include "critscene/visexport.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace critscene
{

enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

struct RunConfig
{
  std::string tracks;
  std::string map;
  std::string params;
  std::string mapping;
  std::string scenario_id;
  std::string measures = "inv_ttc,rss,sff";
  double threshold = 0.0;
  int min_gap = 5;
  std::string window;  // "t0:t1", empty for the full scenario
  int stride = 1;
  double time_scale = 1.0;
  std::vector<TimestampMs> at;  // export timestamps
  std::string out = "out";
  std::string addr = "127.0.0.1:8080";
  std::string scenario_dir;
  unsigned threads = 1;
};

namespace cli_detail
{

struct UsageError
{
  std::string message;
};

inline std::vector<Measure> parse_measure_list(const std::string & text)
{
  std::vector<Measure> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      continue;
    }
    const auto m = parse_measure(item);
    if (!m) {
      throw UsageError{"unknown measure '" + item + "' (expected inv_ttc, rss or sff)"};
    }
    if (std::find(out.begin(), out.end(), *m) == out.end()) {
      out.push_back(*m);
    }
  }
  if (out.empty()) {
    throw UsageError{"at least one measure must be selected"};
  }
  return out;
}

inline std::pair<TimestampMs, TimestampMs> parse_window(const std::string & text, const Scenario & scenario)
{
  if (text.empty()) {
    if (scenario.empty()) {
      throw Error(ErrorCode::EmptyWindow, "scenario has no frames");
    }
    return {scenario.timestamps().front(), scenario.timestamps().back()};
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError{"--window expects t0:t1 in milliseconds"};
  }
  try {
    size_t used0 = 0;
    size_t used1 = 0;
    const std::string a = text.substr(0, colon);
    const std::string b = text.substr(colon + 1);
    const TimestampMs t0 = std::stoll(a, &used0);
    const TimestampMs t1 = std::stoll(b, &used1);
    if (used0 != a.size() || used1 != b.size()) {
      throw UsageError{"--window expects t0:t1 in milliseconds"};
    }
    return {t0, t1};
  } catch (const std::logic_error &) {
    throw UsageError{"--window expects t0:t1 in milliseconds"};
  }
}

struct Inputs
{
  Scenario scenario;
  LaneMap map;
  MeasureParams params;
};

inline Inputs load_inputs(const RunConfig & cfg)
{
  if (cfg.tracks.empty() || cfg.map.empty()) {
    throw UsageError{"--tracks and --map are required"};
  }
  ColumnMapping mapping;
  if (!cfg.mapping.empty()) {
    mapping = column_mapping_from_json(
      parse_json_text(read_text_file(cfg.mapping), ErrorCode::SchemaViolation, "column mapping"));
  }
  MeasureParams params;
  if (!cfg.params.empty()) {
    params = measure_params_from_json(
      parse_json_text(read_text_file(cfg.params), ErrorCode::InvalidParameter, "parameter file"));
  }
  LaneMap map = load_lane_map(read_text_file(cfg.map));
  std::ifstream tracks(cfg.tracks, std::ios::binary);
  if (!tracks) {
    throw Error(ErrorCode::Io, "cannot open '" + cfg.tracks + "'");
  }
  std::string id = cfg.scenario_id;
  if (id.empty()) {
    // `<name>/tracks.csv` is named after its directory, as the service does
    const auto path = std::filesystem::absolute(cfg.tracks);
    id = path.stem() == "tracks" ? path.parent_path().filename().string() : path.stem().string();
  }
  Scenario scenario = parse_tracks(tracks, mapping, id);
  return {std::move(scenario), std::move(map), std::move(params)};
}

inline std::filesystem::path prepare_out(const RunConfig & cfg)
{
  const std::filesystem::path out(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec || !std::filesystem::is_directory(out)) {
    throw Error(ErrorCode::Io, "cannot create output directory '" + cfg.out + "'");
  }
  return out;
}

inline AnalysisResult run_analysis(const Inputs & in, const std::vector<Measure> & measures, const RunConfig & cfg)
{
  AnalysisOptions options;
  options.threads = cfg.threads;
  return analyze_scenario(in.scenario, in.map, in.params, measures, options);
}

inline int cmd_analyze(const RunConfig & cfg, std::ostream & out)
{
  const auto measures = parse_measure_list(cfg.measures);
  const Inputs in = load_inputs(cfg);
  const auto dir = prepare_out(cfg);
  const AnalysisResult result = run_analysis(in, measures, cfg);

  write_text_file((dir / "records.jsonl").string(), records_to_jsonl(result.records));
  write_text_file((dir / "summary.json").string(), summary_to_json(in.scenario, result).dump(2) + "\n");
  write_text_file((dir / "timelines.csv").string(), timelines_to_csv(result.timelines));

  const auto & ts = in.scenario.timestamps();
  out << "scenario " << in.scenario.id() << ": " << in.scenario.tracks().size() << " tracks, " << ts.size()
      << " frames";
  if (!ts.empty()) {
    out << ", t = [" << ts.front() << ", " << ts.back() << "] ms";
  }
  out << "\n";
  for (const auto & tl : result.timelines) {
    const auto peak = timeline_peak(tl);
    out << "peak " << to_string(tl.measure) << ": ";
    if (!peak) {
      out << "n/a\n";
      continue;
    }
    out << format_fixed(peak->value) << " at t=" << peak->timestamp << " ms";
    if (const auto * rec = peak_record(result.records, tl.measure, peak->timestamp); rec && peak->value > 0.0) {
      out << " (pair " << rec->from << " -> " << rec->to << ")";
    }
    out << "\n";
  }
  out << "wrote " << result.records.size() << " records to " << (dir / "records.jsonl").string() << "\n";
  return kExitOk;
}

inline int cmd_detect(const RunConfig & cfg, std::ostream & out)
{
  const auto measures = parse_measure_list(cfg.measures);
  if (!(cfg.threshold >= 0.0)) {
    throw UsageError{"--threshold must be >= 0"};
  }
  if (cfg.min_gap < 0) {
    throw UsageError{"--min-gap must be >= 0"};
  }
  const Inputs in = load_inputs(cfg);
  const auto dir = prepare_out(cfg);
  const AnalysisResult result = run_analysis(in, measures, cfg);

  for (Measure m : measures) {
    const auto intervals = detect_intervals(result, m, cfg.threshold, cfg.min_gap);
    const std::string name(to_string(m));
    write_text_file(
      (dir / ("intervals_" + name + ".json")).string(),
      intervals_to_json(intervals, cfg.threshold, cfg.min_gap).dump() + "\n");
    Json breakdown = Json::array();
    for (const auto & iv : intervals) {
      Json series = Json::array();
      for (const auto & s : pair_breakdown(result.records, iv)) {
        series.push_back(pair_series_to_json(s));
      }
      breakdown.push_back({{"interval", interval_to_json(iv)}, {"series", std::move(series)}});
    }
    write_text_file((dir / ("breakdown_" + name + ".json")).string(), breakdown.dump(2) + "\n");

    out << name << ": " << intervals.size() << " interval(s) above " << format_fixed(cfg.threshold) << "\n";
    for (const auto & iv : intervals) {
      out << "  [" << iv.t_start << ", " << iv.t_end << "] ms, peak " << format_fixed(iv.peak_value) << " at t="
          << iv.peak_timestamp;
      if (iv.peak_pair) {
        out << " (pair " << iv.peak_pair->first << " -> " << iv.peak_pair->second << ")";
      }
      out << "\n";
    }
  }
  return kExitOk;
}

inline int cmd_export(const RunConfig & cfg, std::ostream & out)
{
  const auto measures = parse_measure_list(cfg.measures);
  if (!(cfg.threshold >= 0.0)) {
    throw UsageError{"--threshold must be >= 0"};
  }
  if (cfg.stride < 1) {
    throw UsageError{"--stride must be >= 1"};
  }
  const Inputs in = load_inputs(cfg);
  const auto [t0, t1] = parse_window(cfg.window, in.scenario);
  const VisDocument cube = export_space_time_cube(in.scenario, t0, t1, cfg.stride, cfg.time_scale);

  const auto dir = prepare_out(cfg);
  const AnalysisResult result = run_analysis(in, measures, cfg);
  const Measure primary = measures.front();

  std::vector<TimestampMs> stamps = cfg.at;
  if (stamps.empty()) {
    if (const auto peak = timeline_peak(result.timelines.front())) {
      stamps.push_back(peak->timestamp);
    }
  }
  GraphConfig graph_config;
  for (TimestampMs t : stamps) {
    const SceneGraph graph = build_scene_graph(scene_at(in.scenario, t), in.map, graph_config);
    std::vector<CriticalityRecord> frame_records;
    for (const auto & r : result.records) {
      if (r.timestamp == t) {
        frame_records.push_back(r);
      }
    }
    const VisDocument view = export_scene_graph_view(graph, frame_records, cfg.threshold, primary);
    const auto path = dir / ("scene_" + std::to_string(t) + ".json");
    write_text_file(path.string(), vis_document_to_json(view).dump() + "\n");
    write_text_file(
      (dir / ("graph_" + std::to_string(t) + ".json")).string(), scene_graph_to_json(graph).dump() + "\n");
    out << "scene graph view at t=" << t << " ms: " << view.all<SpherePrimitive>().size() << " sphere(s) -> "
        << path.string() << "\n";
  }

  write_text_file((dir / "cube.json").string(), vis_document_to_json(cube).dump() + "\n");
  write_text_file((dir / "cube.csv").string(), cube_to_csv(cube));
  out << "space-time cube [" << t0 << ", " << t1 << "] ms, stride " << cfg.stride << ": "
      << cube.all<PolylinePrimitive>().size() / 2 << " track(s) -> " << (dir / "cube.json").string() << "\n";
  return kExitOk;
}

inline int cmd_serve(const RunConfig & cfg, std::ostream & out)
{
  auto service = std::make_shared<ScenarioService>();
  std::string dir = cfg.scenario_dir;
  if (dir.empty()) {
    if (const char * env = std::getenv("SCENARIO_DIR")) {
      dir = env;
    }
  }
  if (!dir.empty()) {
    service->load_directory(dir, cfg.threads);
  }
  if (!cfg.tracks.empty() || !cfg.map.empty()) {
    Inputs in = load_inputs(cfg);
    const std::string id = in.scenario.id();
    service->add(make_scenario_handle(id, std::move(in.scenario), std::move(in.map), std::move(in.params), {}, cfg.threads));
  }
  if (service->size() == 0) {
    throw UsageError{"nothing to serve: pass --scenario-dir, SCENARIO_DIR or --tracks/--map"};
  }

  const auto colon = cfg.addr.rfind(':');
  if (colon == std::string::npos) {
    throw UsageError{"--addr expects host:port"};
  }
  const std::string host = cfg.addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(cfg.addr.substr(colon + 1));
  } catch (const std::logic_error &) {
    throw UsageError{"--addr expects host:port"};
  }

  httplib::Server server;
  mount_service(server, service);
  out << "serving " << service->size() << " scenario(s) on http://" << host << ":" << port << "/api/scenarios\n"
      << std::flush;
  if (!server.listen(host, port)) {
    throw Error(ErrorCode::Io, "cannot listen on " + cfg.addr);
  }
  return kExitOk;
}

}  // namespace cli_detail

/// Entry point of the `critscene` tool. Returns 0 on success, 1 on pipeline
/// errors and 2 on usage errors.
inline int run_cli(const std::vector<std::string> & args, std::ostream & out = std::cout, std::ostream & err = std::cerr)
{
  RunConfig cfg;
  CLI::App app{"Criticality analysis and visualization export for road-traffic scenarios", "critscene"};
  app.require_subcommand(1);

  auto add_inputs = [&cfg](CLI::App * sub) {
    sub->add_option("--tracks", cfg.tracks, "Object-list CSV");
    sub->add_option("--map", cfg.map, "Lane-map JSON");
    sub->add_option("--params", cfg.params, "Measure parameter JSON");
    sub->add_option("--mapping", cfg.mapping, "CSV column-mapping JSON");
    sub->add_option("--id", cfg.scenario_id, "Scenario id (defaults to the tracks file stem, or its directory for tracks.csv)");
    sub->add_option("--threads", cfg.threads, "Worker threads for frame evaluation (0 = all cores)");
  };
  auto add_measures = [&cfg](CLI::App * sub) {
    sub->add_option("--measures", cfg.measures, "Comma-separated subset of inv_ttc,rss,sff")->capture_default_str();
    sub->add_option("--out", cfg.out, "Output directory")->capture_default_str();
  };

  CLI::App * analyze = app.add_subcommand("analyze", "Evaluate every frame and write records and timelines");
  add_inputs(analyze);
  add_measures(analyze);

  CLI::App * detect = app.add_subcommand("detect", "Extract critical intervals and per-pair breakdowns");
  add_inputs(detect);
  add_measures(detect);
  detect->add_option("--threshold", cfg.threshold, "Criticality threshold")->capture_default_str();
  detect->add_option("--min-gap", cfg.min_gap, "Merge runs separated by fewer frames")->capture_default_str();

  CLI::App * export_cmd = app.add_subcommand("export", "Write scene-graph and space-time-cube documents");
  add_inputs(export_cmd);
  add_measures(export_cmd);
  export_cmd->add_option("--threshold", cfg.threshold, "Sphere threshold")->capture_default_str();
  export_cmd->add_option("--at", cfg.at, "Timestamps (ms) for scene-graph views; default: peak of the first measure")
    ->delimiter(',');
  export_cmd->add_option("--window", cfg.window, "Cube window t0:t1 in ms; default: whole scenario");
  export_cmd->add_option("--stride", cfg.stride, "Connector stride in frames")->capture_default_str();
  export_cmd->add_option("--time-scale", cfg.time_scale, "Cube z meters per second")->capture_default_str();

  CLI::App * serve = app.add_subcommand("serve", "Serve the read-only exploration API");
  add_inputs(serve);
  serve->add_option("--addr", cfg.addr, "host:port")->capture_default_str();
  serve->add_option("--scenario-dir", cfg.scenario_dir, "Directory of scenarios (or SCENARIO_DIR)");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("critscene");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char *> argv;
  for (auto & a : argv_storage) {
    argv.push_back(a.data());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError & e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) {
      return cli_detail::cmd_analyze(cfg, out);
    }
    if (detect->parsed()) {
      return cli_detail::cmd_detect(cfg, out);
    }
    if (export_cmd->parsed()) {
      return cli_detail::cmd_export(cfg, out);
    }
    if (serve->parsed()) {
      return cli_detail::cmd_serve(cfg, out);
    }
  } catch (const cli_detail::UsageError & e) {
    err << "usage error: " << e.message << "\n";
    return kExitUsage;
  } catch (const Error & e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace critscene

#endif  // CRITSCENE__CLI_HPP_
