#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "snmpcep/event.hpp"
#include "snmpcep/scenarios.hpp"

namespace snmpcep {

// Detection-latency summary for one scenario run: per pattern, when the
// first alert after injection fired and how long after the injection start.
struct ReportRow {
  std::string pattern;
  std::int64_t injection_start_ms = 0;
  std::optional<std::int64_t> first_alert_ms;
  std::optional<std::int64_t> latency_ms;
  std::size_t alert_count = 0;
};

struct LatencyReport {
  std::vector<ReportRow> rows;
  std::size_t false_positives_pre_injection = 0;  // alerts before injection_start
};

// pattern_universe fixes the row set and order; when empty, patterns are
// taken from the alerts in first-appearance order.
inline LatencyReport build_report(const std::vector<Alert>& alerts,
                                  const ScenarioSpec& scenario,
                                  std::vector<std::string> pattern_universe = {}) {
  if (pattern_universe.empty()) {
    for (const auto& a : alerts)
      if (std::find(pattern_universe.begin(), pattern_universe.end(), a.pattern_name) ==
          pattern_universe.end())
        pattern_universe.push_back(a.pattern_name);
  }
  LatencyReport rep;
  for (const auto& a : alerts)
    if (a.fired_at_ms < scenario.injection_start_ms) ++rep.false_positives_pre_injection;
  for (const auto& name : pattern_universe) {
    ReportRow row;
    row.pattern = name;
    row.injection_start_ms = scenario.injection_start_ms;
    for (const auto& a : alerts) {
      if (a.pattern_name != name) continue;
      ++row.alert_count;
      if (a.fired_at_ms >= scenario.injection_start_ms && !row.first_alert_ms)
        row.first_alert_ms = a.fired_at_ms;
    }
    if (row.first_alert_ms) row.latency_ms = *row.first_alert_ms - row.injection_start_ms;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline std::string report_to_json(const LatencyReport& rep, const ScenarioSpec& scenario) {
  nlohmann::json j;
  j["scenario"] = scenario_to_json(scenario);
  j["false_positives_pre_injection"] = rep.false_positives_pre_injection;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    nlohmann::json row;
    row["pattern"] = r.pattern;
    row["injection_start_ms"] = r.injection_start_ms;
    row["first_alert_ms"] = r.first_alert_ms ? nlohmann::json(*r.first_alert_ms)
                                             : nlohmann::json(nullptr);
    row["latency_ms"] =
        r.latency_ms ? nlohmann::json(*r.latency_ms) : nlohmann::json(nullptr);
    row["alert_count"] = r.alert_count;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

inline std::string report_table(const LatencyReport& rep) {
  std::string out;
  out += "pattern                      injection_ms  first_alert_ms  latency_ms  alerts\n";
  out += "---------------------------  ------------  --------------  ----------  ------\n";
  auto pad = [](std::string s, std::size_t w, bool right) {
    if (s.size() < w) {
      std::string fill(w - s.size(), ' ');
      s = right ? fill + s : s + fill;
    }
    return s;
  };
  for (const auto& r : rep.rows) {
    out += pad(r.pattern, 27, false) + "  ";
    out += pad(std::to_string(r.injection_start_ms), 12, true) + "  ";
    out += pad(r.first_alert_ms ? std::to_string(*r.first_alert_ms) : "-", 14, true) + "  ";
    out += pad(r.latency_ms ? std::to_string(*r.latency_ms) : "-", 10, true) + "  ";
    out += pad(std::to_string(r.alert_count), 6, true) + "\n";
  }
  out += "pre-injection false positives: " +
         std::to_string(rep.false_positives_pre_injection) + "\n";
  return out;
}

}  // namespace snmpcep
