// Acceptance suite: one scenario per criterion, one pass/fail line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "snmpcep/alert_io.hpp"
#include "snmpcep/engine.hpp"
#include "snmpcep/formatter.hpp"
#include "snmpcep/generators.hpp"
#include "snmpcep/latency_report.hpp"
#include "snmpcep/oracle.hpp"
#include "snmpcep/trace_io.hpp"
#include "support/corpus.hpp"

using namespace snmpcep;
using Clock = std::chrono::steady_clock;

namespace {

struct Checker {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Alert> run_engine(const std::vector<CheckedPattern>& patterns, const Trace& trace) {
  Correlator engine;
  for (const auto& p : patterns) engine.register_pattern(p);
  std::vector<Alert> out;
  for (const auto& e : trace)
    for (auto& a : engine.on_event(e)) out.push_back(std::move(a));
  return out;
}

ScenarioSpec make_spec(ScenarioKind kind, std::uint64_t seed,
                       std::int64_t duration_ms = 60000, std::int64_t inj_ms = 30000) {
  ScenarioSpec s;
  s.kind = kind;
  s.seed = seed;
  s.duration_ms = duration_ms;
  s.injection_start_ms = inj_ms;
  return s;
}

std::vector<Alert> filter_by(const std::vector<Alert>& alerts, const std::string& name) {
  std::vector<Alert> out;
  for (const auto& a : alerts)
    if (a.pattern_name == name) out.push_back(a);
  return out;
}

std::size_t pre_injection_count(const std::vector<Alert>& alerts, std::int64_t inj) {
  std::size_t n = 0;
  for (const auto& a : alerts)
    if (a.fired_at_ms < inj) ++n;
  return n;
}

// --- criteria ---------------------------------------------------------------

void criterion1_pattern_corpus(Checker& c) {
  auto t0 = Clock::now();
  MeasureRegistry reg = standard_registry();
  auto asts = parse_pattern_file(snmpcep::test::read_file(snmpcep::test::patterns_path()));
  c.expect(asts.size() == 5, "expected five shipped patterns");
  for (const auto& ast : asts) {
    CheckedPattern checked = validate(ast, reg);
    (void)checked;
    PatternAst again = parse_pattern(ast.name, format_pattern(ast));
    c.expect(pattern_equal(ast, again), ast.name + ": format/parse round trip broke");
    c.expect(format_pattern(again) == format_pattern(ast),
             ast.name + ": canonical text is not a fixed point");
  }
  c.expect(seconds_since(t0) < 1.0, "corpus checks exceeded 1 s");
}

void criterion2_tcp_fast(Checker& c) {
  auto corpus = snmpcep::test::checked_corpus();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioSpec spec = make_spec(ScenarioKind::TcpResetFast, seed);
    auto alerts = run_engine(corpus, generate_trace(spec));
    auto tcp = filter_by(alerts, "TCP Reset Attack");
    c.expect(!tcp.empty(), "seed " + std::to_string(seed) + ": no TCP alert");
    if (!tcp.empty()) {
      std::int64_t latency = tcp.front().fired_at_ms - spec.injection_start_ms;
      c.expect(latency >= 0 && latency <= 2000,
               "seed " + std::to_string(seed) + ": latency " + std::to_string(latency) +
                   " ms outside [0, 2000]");
    }
    c.expect(pre_injection_count(alerts, spec.injection_start_ms) == 0,
             "seed " + std::to_string(seed) + ": alerts on the pre-injection prefix");
  }
}

void criterion3_tcp_slow(Checker& c) {
  auto corpus = snmpcep::test::checked_corpus();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioSpec spec = make_spec(ScenarioKind::TcpResetSlow, seed);
    auto alerts = run_engine(corpus, generate_trace(spec));
    auto tcp = filter_by(alerts, "TCP Reset Attack");
    c.expect(!tcp.empty(), "seed " + std::to_string(seed) + ": no TCP alert");
    if (!tcp.empty()) {
      std::int64_t latency = tcp.front().fired_at_ms - spec.injection_start_ms;
      c.expect(latency >= 2000 && latency <= 4000,
               "seed " + std::to_string(seed) + ": latency " + std::to_string(latency) +
                   " ms outside 3000 +/- 1000");
    }
    c.expect(pre_injection_count(alerts, spec.injection_start_ms) == 0,
             "seed " + std::to_string(seed) + ": alerts on the pre-injection prefix");
  }
}

void criterion4_icmp_flood(Checker& c) {
  auto corpus = snmpcep::test::checked_corpus();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioSpec moderate = make_spec(ScenarioKind::IcmpFloodModerate, seed, 70000, 30000);
    auto alerts = run_engine(corpus, generate_trace(moderate));
    auto icmp = filter_by(alerts, "ICMP Flooding Attack");
    c.expect(!icmp.empty(), "moderate seed " + std::to_string(seed) + ": no ICMP alert");
    c.expect(pre_injection_count(alerts, moderate.injection_start_ms) == 0,
             "moderate seed " + std::to_string(seed) + ": pre-injection alert");

    ScenarioSpec strong = make_spec(ScenarioKind::IcmpFloodStrong, seed);
    strong.attack_duration_ms = 5000;
    auto strong_alerts = filter_by(run_engine(corpus, generate_trace(strong)),
                                   "ICMP Flooding Attack");
    c.expect(!strong_alerts.empty(), "strong seed " + std::to_string(seed) + ": no ICMP alert");
    if (!strong_alerts.empty()) {
      std::int64_t latency = strong_alerts.front().fired_at_ms - strong.injection_start_ms;
      c.expect(latency <= 2000, "strong seed " + std::to_string(seed) + ": first alert " +
                                    std::to_string(latency) + " ms in, beyond two samples");
    }

    ScenarioSpec nominal = make_spec(ScenarioKind::Nominal, seed);
    c.expect(filter_by(run_engine(corpus, generate_trace(nominal)), "ICMP Flooding Attack")
                 .empty(),
             "nominal seed " + std::to_string(seed) + ": spurious ICMP alert");
  }
}

void criterion5_resource_overloads(Checker& c) {
  auto corpus = snmpcep::test::checked_corpus();
  struct Case {
    ScenarioKind kind;
    const char* pattern;
  };
  const Case cases[] = {{ScenarioKind::CpuOverload, "CPU Overload"},
                        {ScenarioKind::RamOverload, "Memory Overload"},
                        {ScenarioKind::TaskStorm, "Tasks Number Overcoming"}};
  for (const auto& [kind, pattern] : cases) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      ScenarioSpec spec = make_spec(kind, seed);
      auto alerts = run_engine(corpus, generate_trace(spec));
      std::string tag = std::string(scenario_kind_name(kind)) + " seed " + std::to_string(seed);
      c.expect(!alerts.empty(), tag + ": no alert");
      bool only_own = true;
      for (const auto& a : alerts) only_own = only_own && a.pattern_name == pattern;
      c.expect(only_own, tag + ": a pattern other than '" + std::string(pattern) + "' fired");
      if (!alerts.empty())
        c.expect(alerts.front().fired_at_ms == spec.injection_start_ms,
                 tag + ": first alert at " + std::to_string(alerts.front().fired_at_ms) +
                     ", not at the first threshold-crossing sample");
    }
  }
}

void criterion6_false_positives(Checker& c) {
  auto t0 = Clock::now();
  auto corpus = snmpcep::test::checked_corpus();
  std::size_t total_alerts = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ScenarioSpec spec = make_spec(ScenarioKind::Nominal, seed, 120000, 60000);
    total_alerts += run_engine(corpus, generate_trace(spec)).size();
  }
  c.expect(total_alerts == 0,
           std::to_string(total_alerts) + " alerts across 100 nominal traces");
  c.expect(seconds_since(t0) < 60.0, "false-positive suite exceeded 60 s");
}

void criterion7_oracle_equivalence(Checker& c) {
  auto t0 = Clock::now();
  auto corpus = snmpcep::test::checked_corpus();
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Trace trace = snmpcep::test::random_trace(seed, 200);
    auto all_engine = run_engine(corpus, trace);
    for (const auto& p : corpus) {
      auto from_engine = filter_by(all_engine, p.ast.name);
      auto from_oracle = oracle_match(p, trace);
      if (from_engine != from_oracle) {
        c.expect(false, "seed " + std::to_string(seed) + ", pattern '" + p.ast.name +
                            "': engine " + std::to_string(from_engine.size()) +
                            " alerts vs oracle " + std::to_string(from_oracle.size()));
        return;
      }
    }
  }
  c.expect(seconds_since(t0) < 60.0, "oracle equivalence suite exceeded 60 s");
}

void criterion8_determinism(Checker& c) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "snmpcep_acceptance_determinism";
  fs::create_directories(dir);
  const ScenarioKind kinds[] = {ScenarioKind::TcpResetFast, ScenarioKind::TcpResetSlow,
                                ScenarioKind::IcmpFloodModerate, ScenarioKind::IcmpFloodStrong,
                                ScenarioKind::CpuOverload, ScenarioKind::RamOverload,
                                ScenarioKind::TaskStorm, ScenarioKind::Nominal};
  for (ScenarioKind kind : kinds) {
    ScenarioSpec spec = make_spec(kind, 42);
    std::string tag = scenario_kind_name(kind);
    std::string bytes[2], alerts[2], reports[2];
    for (int round = 0; round < 2; ++round) {
      fs::path trace_path = dir / (tag + std::to_string(round) + ".jsonl");
      Trace trace = generate_trace(spec);
      write_trace(trace, trace_path.string());
      std::ifstream in(trace_path, std::ios::binary);
      bytes[round].assign(std::istreambuf_iterator<char>(in), {});

      std::ostringstream alert_stream;
      for (const auto& a : run_engine(snmpcep::test::checked_corpus(), trace))
        alert_stream << alert_to_json_line(a) << "\n";
      alerts[round] = alert_stream.str();

      std::vector<Alert> parsed;
      std::istringstream alert_in(alerts[round]);
      std::string line;
      std::size_t ln = 0;
      while (std::getline(alert_in, line))
        if (!line.empty()) parsed.push_back(parse_alert_line(line, ++ln));
      reports[round] = report_to_json(build_report(parsed, spec), spec);
    }
    c.expect(bytes[0] == bytes[1], tag + ": trace bytes differ between runs");
    c.expect(alerts[0] == alerts[1], tag + ": alert bytes differ between runs");
    c.expect(reports[0] == reports[1], tag + ": report bytes differ between runs");
  }
  fs::remove_all(dir);
}

void criterion9_throughput(Checker& c, std::string& detail) {
  auto corpus = snmpcep::test::checked_corpus();
  // Six events per poll batch at 1 Hz; about one million events in total.
  ScenarioSpec spec = make_spec(ScenarioKind::Nominal, 1, 166667000, 0);
  Trace trace = generate_trace(spec);
  c.expect(trace.size() >= 1000000, "synthetic trace shorter than one million events");

  Correlator engine;
  for (const auto& p : corpus) engine.register_pattern(p);
  std::size_t alerts = 0;
  auto t0 = Clock::now();
  for (const auto& e : trace) alerts += engine.on_event(e).size();
  double elapsed = seconds_since(t0);
  double rate = static_cast<double>(trace.size()) / elapsed;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(0);
  os << rate << " events/s over " << trace.size() << " events";
  detail = os.str();
  c.expect(alerts == 0, "nominal megatrace fired " + std::to_string(alerts) + " alerts");
  c.expect(rate >= 1e5, "throughput " + detail + " below 1e5 events/s");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<void(Checker&, std::string&)> fn;
  };
  std::vector<Criterion> criteria = {
      {1, "pattern corpus parses, validates and round-trips",
       [](Checker& c, std::string&) { criterion1_pattern_corpus(c); }},
      {2, "TCP Reset fast mode detected within 2 s, clean prefix (10 seeds)",
       [](Checker& c, std::string&) { criterion2_tcp_fast(c); }},
      {3, "TCP Reset slow mode detected at 3 s +/- 1 s (10 seeds)",
       [](Checker& c, std::string&) { criterion3_tcp_slow(c); }},
      {4, "ICMP flood: moderate and strong fire, nominal never (10 seeds)",
       [](Checker& c, std::string&) { criterion4_icmp_flood(c); }},
      {5, "resource overloads fire exactly their pattern at first crossing (10 seeds)",
       [](Checker& c, std::string&) { criterion5_resource_overloads(c); }},
      {6, "zero alerts across 100 nominal traces of 120 s",
       [](Checker& c, std::string&) { criterion6_false_positives(c); }},
      {7, "incremental engine equals brute-force oracle on 100 random traces",
       [](Checker& c, std::string&) { criterion7_oracle_equivalence(c); }},
      {8, "fixed seeds give byte-identical traces, alerts and reports",
       [](Checker& c, std::string&) { criterion8_determinism(c); }},
      {9, "trace mode sustains 1e5 events/s with all five patterns",
       [](Checker& c, std::string& detail) { criterion9_throughput(c, detail); }},
  };

  int failed = 0;
  for (auto& cr : criteria) {
    Checker checker;
    std::string detail;
    auto t0 = Clock::now();
    try {
      cr.fn(checker, detail);
    } catch (const std::exception& e) {
      checker.expect(false, std::string("exception: ") + e.what());
    }
    double dt = seconds_since(t0);
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    if (checker.failures.empty()) {
      line << "[PASS] criterion " << cr.id << ": " << cr.name;
      if (!detail.empty()) line << " (" << detail << ")";
      line << " [" << dt << "s]";
    } else {
      ++failed;
      line << "[FAIL] criterion " << cr.id << ": " << cr.name << " [" << dt << "s]";
      for (const auto& f : checker.failures) line << "\n       - " << f;
    }
    std::cout << line.str() << "\n" << std::flush;
  }
  if (failed) {
    std::cout << failed << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 9 criteria passed\n";
  return 0;
}
