#pragma once

#include <string>
#include <vector>

#include "snmpcep/event.hpp"
#include "snmpcep/snmp_ber.hpp"

namespace snmpcep {

// Association from measure names to SNMP object identifiers. Scalar objects
// are fetched as <oid>.0; per-row objects are walked and emitted as
// "<measure>.<rowindex>".
struct OidEntry {
  std::string measure;
  Oid oid;
  MeasureSemantics semantics = MeasureSemantics::Gauge;
  bool per_row = false;
};

struct OidMap {
  std::vector<OidEntry> entries;  // canonical poll order

  const OidEntry* find(const std::string& measure) const {
    for (const auto& e : entries)
      if (e.measure == measure) return &e;
    return nullptr;
  }
};

// MIB-II and HOST-RESOURCES-MIB assignments for the six monitored objects.
inline OidMap default_oid_map() {
  OidMap m;
  m.entries = {
      {"hrProcessorLoad", Oid::parse("1.3.6.1.2.1.25.3.3.1.2"), MeasureSemantics::Gauge, true},
      {"hrStorageUsed", Oid::parse("1.3.6.1.2.1.25.2.3.1.6"), MeasureSemantics::Gauge, true},
      {"hrSystemProcesses", Oid::parse("1.3.6.1.2.1.25.1.6"), MeasureSemantics::Gauge, false},
      {"icmpInEchos", Oid::parse("1.3.6.1.2.1.5.8"), MeasureSemantics::Counter, false},
      {"tcpEstabResets", Oid::parse("1.3.6.1.2.1.6.8"), MeasureSemantics::Counter, false},
      {"tcpRetransSegs", Oid::parse("1.3.6.1.2.1.6.12"), MeasureSemantics::Counter, false},
  };
  return m;
}

}  // namespace snmpcep
