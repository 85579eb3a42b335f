#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "snmpcep/event.hpp"
#include "snmpcep/parser.hpp"
#include "snmpcep/validator.hpp"

namespace snmpcep::test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string patterns_path() {
  return std::string(SNMPCEP_SOURCE_DIR) + "/patterns/detection.patterns";
}

// The five shipped patterns, validated against the standard registry.
inline std::vector<CheckedPattern> checked_corpus() {
  MeasureRegistry reg = standard_registry();
  std::vector<CheckedPattern> out;
  for (auto& ast : parse_pattern_file(read_file(patterns_path())))
    out.push_back(validate(std::move(ast), reg));
  return out;
}

inline CheckedPattern checked(const std::string& name, const std::string& src) {
  return validate(parse_pattern(name, src), standard_registry());
}

// Adversarial random traces: mixed measures and sources, bursty counters,
// occasional equal timestamps, signals, and near-wrap counter values.
inline Trace random_trace(std::uint64_t seed, std::size_t max_events = 200) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  std::size_t n = static_cast<std::size_t>(pick(10, static_cast<std::int64_t>(max_events)));
  std::vector<std::string> sources{"ictgw"};
  if (pick(0, 2) == 0) sources.push_back("rtu7");

  struct CounterState {
    std::int64_t icmp, estab, retrans;
  };
  std::vector<CounterState> state;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    CounterState cs;
    cs.icmp = pick(0, 4) == 0 ? (std::int64_t{1} << 32) - pick(1, 10) : pick(100, 10000);
    cs.estab = pick(0, 500);
    cs.retrans = pick(0, 2000);
    state.push_back(cs);
  }

  Trace out;
  std::int64_t ts = 0;
  const char* gauges[] = {"hrProcessorLoad", "hrStorageUsed", "hrSystemProcesses"};
  for (std::size_t i = 0; i < n; ++i) {
    if (pick(0, 4) != 0) ts += pick(50, 1300);
    std::size_t si = static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(sources.size()) - 1));
    Event e;
    e.ts_ms = ts;
    e.source = sources[si];
    if (pick(0, 6) == 0) {
      e.kind = EventKind::ApplicationSignal;
      e.measure = pick(0, 3) == 0 ? "OtherSignal" : "SocketException";
    } else {
      e.kind = EventKind::Measurement;
      switch (pick(0, 5)) {
        case 0:
          e.measure = gauges[0];
          e.value = pick(0, 120);
          break;
        case 1:
          e.measure = gauges[1];
          e.value = pick(40000, 70000);
          break;
        case 2:
          e.measure = gauges[2];
          e.value = pick(10, 60);
          break;
        case 3: {
          std::int64_t inc = pick(0, 9) < 7 ? pick(0, 3) : pick(4, 50);
          state[si].icmp = (state[si].icmp + inc) & 0xFFFFFFFF;
          e.measure = "icmpInEchos";
          e.value = state[si].icmp;
          break;
        }
        case 4: {
          state[si].estab = (state[si].estab + pick(0, 2)) & 0xFFFFFFFF;
          e.measure = "tcpEstabResets";
          e.value = state[si].estab;
          break;
        }
        default: {
          std::int64_t inc = pick(0, 9) < 7 ? pick(0, 2) : pick(5, 9);
          state[si].retrans = (state[si].retrans + inc) & 0xFFFFFFFF;
          e.measure = "tcpRetransSegs";
          e.value = state[si].retrans;
          break;
        }
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace snmpcep::test
