#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "snmpcep/errors.hpp"
#include "snmpcep/event.hpp"

namespace snmpcep {

// Alert stream format: JSONL, one alert per line, flushed per line so an
// operator can tail it live.
// {"ts_ms":…,"pattern":…,"bindings":[{"var":…,"measure":…,"value":…,"ts_ms":…}…],
//  "description":…}  (value omitted for signal bindings)

inline std::string alert_to_json_line(const Alert& a) {
  std::string s = "{\"ts_ms\":" + std::to_string(a.fired_at_ms) + ",\"pattern\":";
  s += nlohmann::json(a.pattern_name).dump();
  s += ",\"bindings\":[";
  bool first = true;
  for (const auto& [var, e] : a.bindings) {
    if (!first) s += ',';
    first = false;
    s += "{\"var\":";
    s += nlohmann::json(var).dump();
    s += ",\"measure\":";
    s += nlohmann::json(e.measure).dump();
    if (e.value) s += ",\"value\":" + std::to_string(*e.value);
    s += ",\"ts_ms\":" + std::to_string(e.ts_ms) + "}";
  }
  s += "],\"description\":";
  s += nlohmann::json(a.description).dump();
  s += "}";
  return s;
}

// Reads an alert line back (for the report tool). Binding events carry no
// source in the wire format.
inline Alert parse_alert_line(const std::string& line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& ex) {
    throw TraceError(std::string("bad alert JSON: ") + ex.what(), line_no);
  }
  if (!j.is_object() || !j.contains("ts_ms") || !j.contains("pattern"))
    throw TraceError("alert line missing 'ts_ms' or 'pattern'", line_no);
  Alert a;
  a.fired_at_ms = j["ts_ms"].get<std::int64_t>();
  a.pattern_name = j["pattern"].get<std::string>();
  if (j.contains("description")) a.description = j["description"].get<std::string>();
  if (j.contains("bindings")) {
    for (const auto& b : j["bindings"]) {
      Event e;
      e.ts_ms = b["ts_ms"].get<std::int64_t>();
      e.measure = b["measure"].get<std::string>();
      if (b.contains("value")) {
        e.kind = EventKind::Measurement;
        e.value = b["value"].get<std::int64_t>();
      } else {
        e.kind = EventKind::ApplicationSignal;
      }
      a.bindings.emplace_back(b["var"].get<std::string>(), std::move(e));
    }
  }
  return a;
}

inline std::vector<Alert> read_alerts(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open alert file: " + path);
  std::vector<Alert> alerts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    alerts.push_back(parse_alert_line(line, line_no));
  }
  return alerts;
}

}  // namespace snmpcep
