#include <doctest.h>

#include <string>

#include "snmpcep/engine.hpp"
#include "snmpcep/oracle.hpp"
#include "support/corpus.hpp"

using namespace snmpcep;
using snmpcep::test::checked;
using snmpcep::test::checked_corpus;
using snmpcep::test::random_trace;

namespace {

const MeasureRegistry kReg = standard_registry();

Event meas(std::int64_t ts, const std::string& m, std::int64_t v,
           const std::string& src = "ictgw") {
  return make_measurement_event(ts, m, v, src, kReg);
}

std::vector<Alert> engine_alerts(const std::vector<CheckedPattern>& patterns,
                                 const Trace& trace) {
  Correlator engine;
  for (const auto& p : patterns) engine.register_pattern(p);
  std::vector<Alert> out;
  for (const auto& e : trace)
    for (auto& a : engine.on_event(e)) out.push_back(std::move(a));
  return out;
}

std::vector<Alert> filter_by(const std::vector<Alert>& alerts, const std::string& name) {
  std::vector<Alert> out;
  for (const auto& a : alerts)
    if (a.pattern_name == name) out.push_back(a);
  return out;
}

}  // namespace

TEST_CASE("oracle on the empty trace") {
  for (const auto& p : checked_corpus()) CHECK(oracle_match(p, {}).empty());
}

TEST_CASE("oracle rejects oversized and unordered traces") {
  auto p = checked_corpus().front();
  Trace big(10001, meas(0, "icmpInEchos", 1));
  CHECK_THROWS_WITH_AS(oracle_match(p, big), doctest::Contains("too long"), ValueError);
  Trace unordered{meas(1000, "icmpInEchos", 1), meas(0, "icmpInEchos", 2)};
  CHECK_THROWS_WITH_AS(oracle_match(p, unordered), doctest::Contains("timestamp order"),
                       ValueError);
}

TEST_CASE("oracle agrees with the engine on the two-sample ICMP trace") {
  CheckedPattern p = checked(
      "ICMP Flooding Attack",
      "select istream * from pattern [every (e1=Event(e1.getMeasure()='icmpInEchos') -> "
      "e2=Event(e2.getMeasure()='icmpInEchos')) where timer:within(1 sec)] "
      "where (e2.getSNMPvalue() - e1.getSNMPvalue()) > 3");
  Trace trace{meas(0, "icmpInEchos", 100), meas(900, "icmpInEchos", 104)};
  auto from_oracle = oracle_match(p, trace);
  auto from_engine = engine_alerts({p}, trace);
  REQUIRE(from_oracle.size() == 1);
  CHECK(from_oracle == from_engine);
  CHECK(from_oracle[0].fired_at_ms == 900);
}

TEST_CASE("oracle equivalence on seeded random traces") {
  auto corpus = checked_corpus();
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Trace trace = random_trace(seed, 120);
    auto all_engine = engine_alerts(corpus, trace);
    for (const auto& p : corpus) {
      auto from_engine = filter_by(all_engine, p.ast.name);
      auto from_oracle = oracle_match(p, trace);
      if (from_engine != from_oracle) {
        CAPTURE(seed);
        CAPTURE(p.ast.name);
        CAPTURE(from_engine.size());
        CAPTURE(from_oracle.size());
        REQUIRE(from_engine == from_oracle);
      }
    }
  }
}

TEST_CASE("prefix stability: alerts for a prefix are a prefix of the full run") {
  auto corpus = checked_corpus();
  for (std::uint64_t seed = 50; seed < 56; ++seed) {
    Trace trace = random_trace(seed, 100);
    auto full = engine_alerts(corpus, trace);
    Trace prefix(trace.begin(), trace.begin() + static_cast<long>(trace.size() / 2));
    auto part = engine_alerts(corpus, prefix);
    REQUIRE(part.size() <= full.size());
    for (std::size_t i = 0; i < part.size(); ++i) CHECK(part[i] == full[i]);
  }
}

TEST_CASE("determinism: identical runs produce identical alerts") {
  auto corpus = checked_corpus();
  Trace trace = random_trace(99, 150);
  CHECK(engine_alerts(corpus, trace) == engine_alerts(corpus, trace));
}

TEST_CASE("counter wrap inside the where clause") {
  CheckedPattern p = checked(
      "ICMP Flooding Attack",
      "select * from pattern [every (e1=Event(e1.getMeasure()='icmpInEchos') -> "
      "e2=Event(e2.getMeasure()='icmpInEchos')) where timer:within(1 sec)] "
      "where (e2.getSNMPvalue() - e1.getSNMPvalue()) > 3");
  // counter wraps: (2^32 - 2) -> 3 is a delta of 5
  Trace trace{meas(0, "icmpInEchos", (std::int64_t{1} << 32) - 2),
              meas(800, "icmpInEchos", 3)};
  auto from_engine = engine_alerts({p}, trace);
  auto from_oracle = oracle_match(p, trace);
  REQUIRE(from_engine.size() == 1);
  CHECK(from_engine == from_oracle);
}
