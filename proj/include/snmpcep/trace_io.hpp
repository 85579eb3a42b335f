#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "snmpcep/errors.hpp"
#include "snmpcep/event.hpp"

namespace snmpcep {

// Trace file format: UTF-8 JSONL, one event per line, LF endings, no BOM.
// {"ts_ms":<int>,"kind":"measurement"|"signal","measure":<text>,
//  "value":<int, omitted for signal>,"source":<text>}
// Lines are ordered by ts_ms.

inline std::string event_to_json_line(const Event& e) {
  std::string s = "{\"ts_ms\":" + std::to_string(e.ts_ms) + ",\"kind\":\"";
  s += e.kind == EventKind::Measurement ? "measurement" : "signal";
  s += "\",\"measure\":";
  s += nlohmann::json(e.measure).dump();
  if (e.kind == EventKind::Measurement) s += ",\"value\":" + std::to_string(*e.value);
  s += ",\"source\":";
  s += nlohmann::json(e.source).dump();
  s += "}";
  return s;
}

inline Event parse_trace_line(const std::string& line, const MeasureRegistry& registry,
                              std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& ex) {
    throw TraceError(std::string("bad JSON: ") + ex.what(), line_no);
  }
  if (!j.is_object()) throw TraceError("expected a JSON object", line_no);
  for (const auto& [key, val] : j.items()) {
    if (key != "ts_ms" && key != "kind" && key != "measure" && key != "value" &&
        key != "source")
      throw TraceError("unexpected field '" + key + "'", line_no);
  }
  if (!j.contains("ts_ms") || !j["ts_ms"].is_number_integer())
    throw TraceError("missing or non-integer 'ts_ms'", line_no);
  if (!j.contains("kind") || !j["kind"].is_string())
    throw TraceError("missing 'kind'", line_no);
  if (!j.contains("measure") || !j["measure"].is_string() ||
      j["measure"].get<std::string>().empty())
    throw TraceError("missing or empty 'measure'", line_no);
  if (!j.contains("source") || !j["source"].is_string())
    throw TraceError("missing 'source'", line_no);

  std::string kind = j["kind"].get<std::string>();
  Event e;
  e.ts_ms = j["ts_ms"].get<std::int64_t>();
  e.measure = j["measure"].get<std::string>();
  e.source = j["source"].get<std::string>();
  if (kind == "measurement") {
    e.kind = EventKind::Measurement;
    if (!j.contains("value") || !j["value"].is_number_integer())
      throw TraceError("measurement without integer 'value'", line_no);
    e.value = j["value"].get<std::int64_t>();
    if (!registry.contains(e.measure))
      throw TraceError("unknown measure '" + e.measure + "'", line_no);
  } else if (kind == "signal") {
    e.kind = EventKind::ApplicationSignal;
    if (j.contains("value")) throw TraceError("signal must not carry 'value'", line_no);
  } else {
    throw TraceError("kind must be 'measurement' or 'signal'", line_no);
  }
  return e;
}

// Streaming reader; rejects malformed lines and timestamp regressions.
class TraceReader {
 public:
  TraceReader(std::istream& in, const MeasureRegistry& registry)
      : in_(in), registry_(registry) {}

  std::optional<Event> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      Event e = parse_trace_line(line, registry_, line_no_);
      if (last_ts_ && e.ts_ms < *last_ts_)
        throw TraceError("timestamp regression: " + std::to_string(e.ts_ms) + " after " +
                             std::to_string(*last_ts_),
                         line_no_);
      last_ts_ = e.ts_ms;
      return e;
    }
    return std::nullopt;
  }

 private:
  std::istream& in_;
  const MeasureRegistry& registry_;
  std::size_t line_no_ = 0;
  std::optional<std::int64_t> last_ts_;
};

inline Trace read_trace(std::istream& in, const MeasureRegistry& registry) {
  TraceReader reader(in, registry);
  Trace events;
  while (auto e = reader.next()) events.push_back(std::move(*e));
  return events;
}

inline Trace read_trace(const std::string& path, const MeasureRegistry& registry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open trace file: " + path);
  return read_trace(in, registry);
}

inline void write_trace(const Trace& events, std::ostream& out) {
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (const auto& e : events) {
    if (e.ts_ms < last) throw ValueError("write_trace: events not in timestamp order");
    last = e.ts_ms;
    out << event_to_json_line(e) << '\n';
  }
}

inline void write_trace(const Trace& events, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open trace file for writing: " + path);
  write_trace(events, out);
  out.flush();
  if (!out) throw Error("I/O failure writing trace file: " + path);
}

}  // namespace snmpcep
