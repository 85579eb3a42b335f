#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "snmpcep/generators.hpp"
#include "snmpcep/run.hpp"
#include "support/corpus.hpp"
#include "support/test_agent.hpp"

using namespace snmpcep;

namespace {

struct TempDir {
  std::filesystem::path dir;
  TempDir() {
    dir = std::filesystem::temp_directory_path() /
          ("snmpcep_test_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    std::filesystem::create_directories(dir);
  }
  ~TempDir() { std::filesystem::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string write_scenario(const TempDir& tmp, const ScenarioSpec& spec,
                           const std::string& name) {
  std::string p = tmp.path(name);
  std::ofstream out(p);
  out << scenario_to_json(spec).dump(2) << "\n";
  return p;
}

std::string gen_trace_file(const TempDir& tmp, const ScenarioSpec& spec,
                           const std::string& name) {
  std::string p = tmp.path(name);
  write_trace(generate_trace(spec), p);
  return p;
}

std::string slurp(const std::string& path) { return snmpcep::test::read_file(path); }

const std::atomic<bool> kNoStop{false};

}  // namespace

TEST_CASE("run_detect over a moderate flood trace") {
  TempDir tmp;
  ScenarioSpec spec;
  spec.kind = ScenarioKind::IcmpFloodModerate;
  spec.duration_ms = 70000;
  spec.injection_start_ms = 30000;
  spec.seed = 4;

  RunConfig config;
  config.pattern_files = {snmpcep::test::patterns_path()};
  config.trace_path = gen_trace_file(tmp, spec, "flood.jsonl");
  config.alert_out_path = tmp.path("alerts.jsonl");
  std::ostringstream log;
  CHECK(run_detect(config, kNoStop, log) == kExitOk);

  auto alerts = read_alerts(*config.alert_out_path);
  REQUIRE(!alerts.empty());
  for (const auto& a : alerts) CHECK(a.pattern_name == "ICMP Flooding Attack");

  SUBCASE("alert stream bytes are deterministic") {
    RunConfig again = config;
    again.alert_out_path = tmp.path("alerts2.jsonl");
    std::ostringstream log2;
    CHECK(run_detect(again, kNoStop, log2) == kExitOk);
    CHECK(slurp(*config.alert_out_path) == slurp(*again.alert_out_path));
  }
}

TEST_CASE("run_detect over a nominal trace stays silent") {
  TempDir tmp;
  ScenarioSpec spec;
  spec.kind = ScenarioKind::Nominal;
  spec.seed = 5;
  RunConfig config;
  config.pattern_files = {snmpcep::test::patterns_path()};
  config.trace_path = gen_trace_file(tmp, spec, "nominal.jsonl");
  config.alert_out_path = tmp.path("alerts.jsonl");
  std::ostringstream log;
  CHECK(run_detect(config, kNoStop, log) == kExitOk);
  CHECK(slurp(*config.alert_out_path).empty());
  CHECK(log.str().find("360 events, 0 alerts") != std::string::npos);
}

TEST_CASE("run_detect fails fast on a broken pattern file") {
  TempDir tmp;
  std::string bad = tmp.path("bad.patterns");
  {
    std::ofstream out(bad);
    out << "pattern: Broken\nselect * from pattern [e=Event(]\n";
  }
  RunConfig config;
  config.pattern_files = {bad};
  config.trace_path = tmp.path("missing.jsonl");  // never touched
  config.alert_out_path = tmp.path("alerts.jsonl");
  std::ostringstream log;
  CHECK(run_detect(config, kNoStop, log) == kExitConfigError);
  CHECK(log.str().find("bad.patterns") != std::string::npos);
  CHECK(!std::filesystem::exists(tmp.path("alerts.jsonl")));
}

TEST_CASE("run_detect config validation") {
  std::ostringstream log;
  RunConfig none;
  none.pattern_files = {snmpcep::test::patterns_path()};
  CHECK(run_detect(none, kNoStop, log) == kExitConfigError);  // no input mode

  RunConfig both = none;
  both.trace_path = "x";
  both.live = PollerConfig{};
  CHECK(run_detect(both, kNoStop, log) == kExitConfigError);

  RunConfig no_patterns;
  no_patterns.trace_path = "x";
  CHECK(run_detect(no_patterns, kNoStop, log) == kExitConfigError);
}

TEST_CASE("run_detect exits 2 on a malformed trace") {
  TempDir tmp;
  std::string trace = tmp.path("broken.jsonl");
  {
    std::ofstream out(trace);
    out << R"({"ts_ms":5,"kind":"measurement","measure":"icmpInEchos","value":1,"source":"a"})"
        << "\n"
        << R"({"ts_ms":3,"kind":"measurement","measure":"icmpInEchos","value":2,"source":"a"})"
        << "\n";
  }
  RunConfig config;
  config.pattern_files = {snmpcep::test::patterns_path()};
  config.trace_path = trace;
  config.alert_out_path = tmp.path("alerts.jsonl");
  std::ostringstream log;
  CHECK(run_detect(config, kNoStop, log) == kExitRuntimeError);
}

TEST_CASE("run_detect live mode drains on stop") {
  snmpcep::test::TestAgent agent;
  agent.populate_standard();
  TempDir tmp;
  RunConfig config;
  config.pattern_files = {snmpcep::test::patterns_path()};
  PollerConfig pc;
  pc.host = "127.0.0.1";
  pc.port = agent.port();
  pc.poll_interval_ms = 100;
  pc.timeout_ms = 300;
  pc.retries = 0;
  config.live = pc;
  config.alert_out_path = tmp.path("alerts.jsonl");

  std::atomic<bool> stop{false};
  std::ostringstream log;
  std::thread stopper([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(400));
    stop = true;
  });
  int rc = run_detect(config, stop, log);
  stopper.join();
  CHECK(rc == kExitOk);
  CHECK(log.str().find("processed") != std::string::npos);
  // nominal agent values stay below every threshold
  CHECK(slurp(*config.alert_out_path).empty());
}

TEST_CASE("run_report end to end") {
  TempDir tmp;

  SUBCASE("fast TCP reset: latency within two seconds") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::TcpResetFast;
    spec.seed = 8;
    RunConfig config;
    config.pattern_files = {snmpcep::test::patterns_path()};
    config.trace_path = gen_trace_file(tmp, spec, "fast.jsonl");
    config.alert_out_path = tmp.path("alerts.jsonl");
    std::ostringstream log;
    REQUIRE(run_detect(config, kNoStop, log) == kExitOk);

    std::string scenario_path = write_scenario(tmp, spec, "fast.scenario.json");
    std::ostringstream json_out, log2;
    REQUIRE(run_report(*config.alert_out_path, scenario_path, std::nullopt,
                       config.pattern_files, json_out, log2) == kExitOk);
    auto j = nlohmann::json::parse(json_out.str());
    REQUIRE(j["rows"].is_array());
    bool found = false;
    for (const auto& row : j["rows"]) {
      if (row["pattern"] == "TCP Reset Attack") {
        found = true;
        CHECK(row["latency_ms"].get<std::int64_t>() <= 2000);
        CHECK(row["alert_count"].get<int>() >= 1);
      }
    }
    CHECK(found);
    CHECK(j["false_positives_pre_injection"] == 0);
  }

  SUBCASE("slow TCP reset: latency three seconds, within a second") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::TcpResetSlow;
    spec.seed = 9;
    RunConfig config;
    config.pattern_files = {snmpcep::test::patterns_path()};
    config.trace_path = gen_trace_file(tmp, spec, "slow.jsonl");
    config.alert_out_path = tmp.path("alerts.jsonl");
    std::ostringstream log;
    REQUIRE(run_detect(config, kNoStop, log) == kExitOk);
    std::string scenario_path = write_scenario(tmp, spec, "slow.scenario.json");
    std::string report_path = tmp.path("report.json");
    std::ostringstream log2;
    REQUIRE(run_report(*config.alert_out_path, scenario_path, report_path,
                       config.pattern_files, std::cout, log2) == kExitOk);
    auto j = nlohmann::json::parse(slurp(report_path));
    for (const auto& row : j["rows"])
      if (row["pattern"] == "TCP Reset Attack") {
        std::int64_t latency = row["latency_ms"].get<std::int64_t>();
        CHECK(latency >= 2000);
        CHECK(latency <= 4000);
      }
    CHECK(log2.str().find("TCP Reset Attack") != std::string::npos);
  }

  SUBCASE("empty alert file: rows with zero counts and no latency") {
    std::string empty = tmp.path("none.jsonl");
    std::ofstream(empty).close();
    ScenarioSpec spec;
    spec.kind = ScenarioKind::Nominal;
    std::string scenario_path = write_scenario(tmp, spec, "nominal.scenario.json");
    std::ostringstream json_out, log2;
    REQUIRE(run_report(empty, scenario_path, std::nullopt,
                       {snmpcep::test::patterns_path()}, json_out, log2) == kExitOk);
    auto j = nlohmann::json::parse(json_out.str());
    REQUIRE(j["rows"].size() == 5);
    for (const auto& row : j["rows"]) {
      CHECK(row["alert_count"] == 0);
      CHECK(row["latency_ms"].is_null());
    }
  }

  SUBCASE("alerts naming unknown patterns are rejected") {
    std::string alerts = tmp.path("phantom.jsonl");
    {
      std::ofstream out(alerts);
      out << R"({"ts_ms":1,"pattern":"Phantom","bindings":[],"description":"x"})" << "\n";
    }
    ScenarioSpec spec;
    spec.kind = ScenarioKind::Nominal;
    std::string scenario_path = write_scenario(tmp, spec, "s.json");
    std::ostringstream json_out, log2;
    CHECK(run_report(alerts, scenario_path, std::nullopt, {snmpcep::test::patterns_path()},
                     json_out, log2) == kExitConfigError);
    CHECK(log2.str().find("Phantom") != std::string::npos);
  }
}
