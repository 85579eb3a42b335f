#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snmpcep/errors.hpp"

namespace snmpcep {

enum class EventKind { Measurement, ApplicationSignal };

enum class MeasureSemantics { Counter, Gauge };

// One timestamped observation: an SNMP measurement (measure + value) or an
// application signal (name only). Immutable once constructed.
struct Event {
  std::int64_t ts_ms = 0;
  EventKind kind = EventKind::Measurement;
  std::string measure;               // SNMP object name, or signal name
  std::optional<std::int64_t> value; // present iff kind == Measurement
  std::string source;

  friend bool operator==(const Event&, const Event&) = default;
};

using Trace = std::vector<Event>;

// Table-row instances are polled as "<measure>.<rowindex>"; registry lookups
// and pattern measure literals address the base name.
inline std::string_view base_measure(std::string_view measure) {
  auto dot = measure.find('.');
  return dot == std::string_view::npos ? measure : measure.substr(0, dot);
}

// A pattern literal matches an event measure exactly or as its base name
// (so 'hrProcessorLoad' covers every hrProcessorLoad.<row> stream).
inline bool measure_matches(std::string_view event_measure, std::string_view literal) {
  if (event_measure == literal) return true;
  return event_measure.size() > literal.size() &&
         event_measure.compare(0, literal.size(), literal) == 0 &&
         event_measure[literal.size()] == '.';
}

// Registry of known measures and their counter/gauge semantics.
class MeasureRegistry {
 public:
  void add(std::string name, MeasureSemantics semantics) {
    entries_[std::move(name)] = semantics;
  }

  bool contains(std::string_view measure) const {
    return entries_.count(std::string(base_measure(measure))) != 0;
  }

  std::optional<MeasureSemantics> semantics(std::string_view measure) const {
    auto it = entries_.find(std::string(base_measure(measure)));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, MeasureSemantics>& entries() const { return entries_; }

 private:
  std::map<std::string, MeasureSemantics> entries_;
};

// The six measures this detector monitors.
inline MeasureRegistry standard_registry() {
  MeasureRegistry r;
  r.add("hrProcessorLoad", MeasureSemantics::Gauge);
  r.add("hrStorageUsed", MeasureSemantics::Gauge);
  r.add("hrSystemProcesses", MeasureSemantics::Gauge);
  r.add("icmpInEchos", MeasureSemantics::Counter);
  r.add("tcpEstabResets", MeasureSemantics::Counter);
  r.add("tcpRetransSegs", MeasureSemantics::Counter);
  return r;
}

inline Event make_measurement_event(std::int64_t ts_ms, std::string measure,
                                    std::int64_t value, std::string source,
                                    const MeasureRegistry& registry) {
  if (measure.empty()) throw ValueError("measurement needs a non-empty measure name");
  if (!registry.contains(measure))
    throw ValueError("unknown measure: " + measure);
  return Event{ts_ms, EventKind::Measurement, std::move(measure), value, std::move(source)};
}

inline Event make_signal_event(std::int64_t ts_ms, std::string signal, std::string source) {
  if (signal.empty()) throw ValueError("signal name must be non-empty");
  return Event{ts_ms, EventKind::ApplicationSignal, std::move(signal), std::nullopt,
               std::move(source)};
}

inline constexpr std::int64_t kCounterModulus = std::int64_t{1} << 32;

// later.value - earlier.value, corrected for a single 32-bit counter wrap.
inline std::int64_t counter_delta(const Event& earlier, const Event& later,
                                  const MeasureRegistry& registry) {
  if (earlier.kind != EventKind::Measurement || later.kind != EventKind::Measurement)
    throw ValueError("counter_delta needs two measurement events");
  if (earlier.measure != later.measure)
    throw ValueError("counter_delta over mismatched measures: " + earlier.measure +
                     " vs " + later.measure);
  if (earlier.ts_ms > later.ts_ms)
    throw ValueError("counter_delta arguments out of order");
  auto sem = registry.semantics(earlier.measure);
  if (!sem) throw ValueError("unknown measure: " + earlier.measure);
  if (*sem != MeasureSemantics::Counter)
    throw ValueError("counter_delta over non-counter measure: " + earlier.measure);
  std::int64_t d = *later.value - *earlier.value;
  if (d < 0) d += kCounterModulus;
  return d;
}

// A pattern match: who fired, when, and the bound events.
struct Alert {
  std::string pattern_name;
  std::int64_t fired_at_ms = 0;
  std::vector<std::pair<std::string, Event>> bindings;  // (variable, event)
  std::string description;

  friend bool operator==(const Alert&, const Alert&) = default;
};

// Deterministic identity of a binding tuple, used for alert dedup.
inline std::string binding_fingerprint(
    std::string_view pattern_name,
    const std::vector<std::pair<std::string, Event>>& bindings) {
  std::string fp(pattern_name);
  for (const auto& [var, e] : bindings) {
    fp += '|';
    fp += var;
    fp += '=';
    fp += e.kind == EventKind::Measurement ? 'm' : 's';
    fp += ':';
    fp += e.measure;
    fp += ':';
    fp += e.value ? std::to_string(*e.value) : std::string("-");
    fp += ':';
    fp += e.source;
    fp += '@';
    fp += std::to_string(e.ts_ms);
  }
  return fp;
}

inline Alert make_alert(std::string pattern_name,
                        std::vector<std::pair<std::string, Event>> bindings) {
  std::int64_t fired_at = 0;
  for (const auto& [var, e] : bindings) fired_at = std::max(fired_at, e.ts_ms);
  std::string desc = pattern_name + ": matched at " + std::to_string(fired_at) + " ms;";
  for (const auto& [var, e] : bindings) {
    desc += ' ';
    desc += var;
    desc += '=';
    desc += e.measure;
    if (e.value) {
      desc += '=';
      desc += std::to_string(*e.value);
    }
    desc += '@';
    desc += std::to_string(e.ts_ms);
  }
  return Alert{std::move(pattern_name), fired_at, std::move(bindings), std::move(desc)};
}

}  // namespace snmpcep
