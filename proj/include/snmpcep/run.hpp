#pragma once

#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "snmpcep/alert_io.hpp"
#include "snmpcep/engine.hpp"
#include "snmpcep/errors.hpp"
#include "snmpcep/event_queue.hpp"
#include "snmpcep/latency_report.hpp"
#include "snmpcep/parser.hpp"
#include "snmpcep/poller.hpp"
#include "snmpcep/trace_io.hpp"
#include "snmpcep/validator.hpp"

namespace snmpcep {

// Exit codes for the detect command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

struct RunConfig {
  std::vector<std::string> pattern_files;
  std::optional<std::string> trace_path;     // trace mode
  std::optional<PollerConfig> live;          // live mode
  std::optional<std::string> alert_out_path; // default: stdout
  bool verbose = false;

  void check() const {
    if (pattern_files.empty()) throw ValueError("at least one pattern file is required");
    if (trace_path.has_value() == live.has_value())
      throw ValueError("exactly one input mode (trace or live) is required");
  }
};

// Parses and validates every pattern file up front; nothing is consumed if
// any pattern is broken.
inline std::vector<CheckedPattern> load_patterns(const std::vector<std::string>& files,
                                                 const MeasureRegistry& registry) {
  std::vector<CheckedPattern> out;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open pattern file: " + path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    std::vector<PatternAst> asts;
    try {
      asts = parse_pattern_file(content);
    } catch (const ParseError& e) {
      throw Error(path + ": " + e.what());
    }
    if (asts.empty()) throw Error(path + ": no patterns found");
    for (auto& ast : asts) {
      for (const auto& existing : out)
        if (existing.ast.name == ast.name)
          throw Error(path + ": duplicate pattern name '" + ast.name + "'");
      try {
        out.push_back(validate(std::move(ast), registry));
      } catch (const ValidateError& e) {
        throw Error(path + ": " + e.what());
      }
    }
  }
  return out;
}

namespace detail {

class AlertWriter {
 public:
  explicit AlertWriter(const std::optional<std::string>& path) {
    if (path) {
      file_.emplace(*path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw Error("cannot open alert output file: " + *path);
    }
  }

  // Append-only, flushed per line so the stream can be tailed live.
  void write(const Alert& a) {
    std::ostream& out = file_ ? static_cast<std::ostream&>(*file_) : std::cout;
    out << alert_to_json_line(a) << '\n';
    out.flush();
    ++count_;
  }

  std::size_t count() const { return count_; }

 private:
  std::optional<std::ofstream> file_;
  std::size_t count_ = 0;
};

}  // namespace detail

struct DetectStats {
  std::size_t events = 0;
  std::size_t alerts = 0;
};

// Trace-mode detection: fully deterministic; identical inputs produce a
// byte-identical alert stream.
inline DetectStats detect_over_trace(const std::vector<CheckedPattern>& patterns,
                                     const std::string& trace_path,
                                     const MeasureRegistry& registry,
                                     detail::AlertWriter& writer) {
  Correlator engine;
  for (const auto& p : patterns) engine.register_pattern(p);
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) throw Error("cannot open trace file: " + trace_path);
  TraceReader reader(in, registry);
  DetectStats stats;
  while (auto e = reader.next()) {
    ++stats.events;
    for (const auto& a : engine.on_event(*e)) {
      writer.write(a);
      ++stats.alerts;
    }
  }
  return stats;
}

// Live-mode detection: poller producer and correlator consumer joined by an
// ordered queue; stop_flag triggers drain-then-exit.
inline DetectStats detect_live(const std::vector<CheckedPattern>& patterns,
                               const PollerConfig& poller_config,
                               detail::AlertWriter& writer,
                               const std::atomic<bool>& stop_flag,
                               const WarnFn& warn = {}) {
  Correlator engine;
  for (const auto& p : patterns) engine.register_pattern(p);
  EventQueue queue;
  Poller poller(poller_config, default_oid_map(),
                [&queue](std::vector<Event> batch) { queue.push_batch(std::move(batch)); },
                warn);
  poller.start();
  DetectStats stats;
  while (true) {
    if (stop_flag && !queue.closed()) {
      poller.stop();
      queue.close();
    }
    if (poller.failed() && !queue.closed()) queue.close();
    auto e = queue.pop(std::chrono::milliseconds(200));
    if (!e) {
      // Stale partials are dropped when the next batch arrives; advancing the
      // clock from the consumer could outrun a batch still in flight.
      if (queue.drained()) break;
      continue;
    }
    ++stats.events;
    for (const auto& a : engine.on_event(*e)) {
      writer.write(a);
      ++stats.alerts;
    }
  }
  poller.stop();
  if (poller.failed()) throw Error("poller failed: " + poller.diagnostic());
  return stats;
}

// The detect command. Returns a process exit code.
inline int run_detect(const RunConfig& config, const std::atomic<bool>& stop_flag,
                      std::ostream& log = std::cerr) {
  MeasureRegistry registry = standard_registry();
  std::vector<CheckedPattern> patterns;
  try {
    config.check();
    patterns = load_patterns(config.pattern_files, registry);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (config.verbose)
    log << "loaded " << patterns.size() << " pattern(s) from " << config.pattern_files.size()
        << " file(s)\n";
  try {
    detail::AlertWriter writer(config.alert_out_path);
    DetectStats stats;
    if (config.trace_path) {
      stats = detect_over_trace(patterns, *config.trace_path, registry, writer);
    } else {
      auto warn = [&log](const std::string& msg) { log << "warning: " << msg << "\n"; };
      stats = detect_live(patterns, *config.live, writer, stop_flag, warn);
    }
    log << "processed " << stats.events << " events, " << stats.alerts << " alerts\n";
    return kExitOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

// The report command: detection latency per pattern for one scenario run.
inline int run_report(const std::string& alerts_path, const std::string& scenario_path,
                      const std::optional<std::string>& out_path,
                      const std::vector<std::string>& pattern_files,
                      std::ostream& out_stream = std::cout, std::ostream& log = std::cerr) {
  try {
    std::vector<Alert> alerts = read_alerts(alerts_path);
    ScenarioSpec scenario = load_scenario(scenario_path);
    std::vector<std::string> universe;
    if (!pattern_files.empty()) {
      for (const auto& p : load_patterns(pattern_files, standard_registry()))
        universe.push_back(p.ast.name);
      for (const auto& a : alerts) {
        bool known = false;
        for (const auto& name : universe) known = known || name == a.pattern_name;
        if (!known) throw Error("alert references unknown pattern '" + a.pattern_name + "'");
      }
    }
    LatencyReport rep = build_report(alerts, scenario, universe);
    std::string json = report_to_json(rep, scenario);
    if (out_path) {
      std::ofstream f(*out_path, std::ios::binary | std::ios::trunc);
      if (!f) throw Error("cannot open report output: " + *out_path);
      f << json;
    } else {
      out_stream << json;
    }
    log << report_table(rep);
    return kExitOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace snmpcep
