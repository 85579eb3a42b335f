#include <atomic>
#include <csignal>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snmpcep/generators.hpp"
#include "snmpcep/run.hpp"
#include "snmpcep/scenarios.hpp"
#include "snmpcep/trace_io.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop = true; }

int cmd_gen(const std::string& scenario_path, const std::string& kind,
            const std::string& out_path, std::optional<std::uint64_t> seed) {
  try {
    snmpcep::ScenarioSpec spec;
    if (!scenario_path.empty()) {
      spec = snmpcep::load_scenario(scenario_path);
    } else {
      spec.kind = snmpcep::scenario_kind_from_name(kind);
    }
    if (seed) spec.seed = *seed;
    spec.check();
    snmpcep::Trace trace = snmpcep::generate_trace(spec);
    snmpcep::write_trace(trace, out_path);
    std::cerr << "wrote " << trace.size() << " events to " << out_path << "\n";
    return snmpcep::kExitOk;
  } catch (const snmpcep::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return snmpcep::kExitConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SNMP fault and attack detector: event-pattern correlation over "
               "SNMP measurement streams"};
  app.require_subcommand(1);

  // detect
  auto* detect = app.add_subcommand("detect", "run detection over a trace or a live agent");
  std::vector<std::string> pattern_files;
  std::string trace_path, live_hostport, community = "public", out_path, source = "ictgw";
  std::int64_t interval_ms = 1000;
  bool verbose = false;
  detect->add_option("--patterns", pattern_files, "pattern file(s)")
      ->required()
      ->expected(-1);
  auto* trace_opt = detect->add_option("--trace", trace_path, "replay a trace file");
  auto* live_opt =
      detect->add_option("--live", live_hostport, "poll a live agent (host:port)");
  detect->add_option("--community", community, "SNMP community (live mode)");
  detect->add_option("--interval-ms", interval_ms, "poll interval in ms (live mode)");
  detect->add_option("--source", source, "source label for live events");
  detect->add_option("--out", out_path, "alert output file (default: stdout)");
  detect->add_flag("-v,--verbose", verbose, "verbose logging");
  trace_opt->excludes(live_opt);

  // report
  auto* report = app.add_subcommand("report", "detection-latency report for a scenario run");
  std::string alerts_path, scenario_path, report_out;
  std::vector<std::string> report_patterns;
  report->add_option("--alerts", alerts_path, "alert JSONL file from detect")->required();
  report->add_option("--scenario", scenario_path, "scenario spec JSON")->required();
  report->add_option("--out", report_out, "report JSON output (default: stdout)");
  report->add_option("--patterns", report_patterns, "pattern file(s) fixing the row set")
      ->expected(-1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a fault-injection trace");
  std::string gen_scenario, gen_kind, gen_out;
  std::uint64_t gen_seed = 0;
  bool gen_seed_set = false;
  gen->add_option("--scenario", gen_scenario, "scenario spec JSON");
  gen->add_option("--kind", gen_kind, "scenario kind with default parameters");
  gen->add_option("--out", gen_out, "trace output path")->required();
  gen->add_option("--seed", gen_seed, "override the scenario seed")
      ->each([&](const std::string&) { gen_seed_set = true; });

  CLI11_PARSE(app, argc, argv);

  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  if (detect->parsed()) {
    snmpcep::RunConfig config;
    config.pattern_files = pattern_files;
    config.verbose = verbose;
    if (!trace_path.empty()) config.trace_path = trace_path;
    if (!live_hostport.empty()) {
      snmpcep::PollerConfig pc;
      auto colon = live_hostport.rfind(':');
      if (colon == std::string::npos) {
        pc.host = live_hostport;
      } else {
        pc.host = live_hostport.substr(0, colon);
        try {
          pc.port = static_cast<std::uint16_t>(std::stoi(live_hostport.substr(colon + 1)));
        } catch (const std::exception&) {
          std::cerr << "error: bad host:port '" << live_hostport << "'\n";
          return snmpcep::kExitConfigError;
        }
      }
      pc.community = community;
      pc.poll_interval_ms = interval_ms;
      pc.source = source;
      config.live = pc;
    }
    if (!out_path.empty()) config.alert_out_path = out_path;
    return snmpcep::run_detect(config, g_stop);
  }

  if (report->parsed()) {
    std::optional<std::string> out =
        report_out.empty() ? std::nullopt : std::optional<std::string>(report_out);
    return snmpcep::run_report(alerts_path, scenario_path, out, report_patterns);
  }

  if (gen->parsed()) {
    if (gen_scenario.empty() == gen_kind.empty()) {
      std::cerr << "error: pass exactly one of --scenario or --kind\n";
      return snmpcep::kExitConfigError;
    }
    return cmd_gen(gen_scenario, gen_kind,  gen_out,
                   gen_seed_set ? std::optional<std::uint64_t>(gen_seed) : std::nullopt);
  }
  return snmpcep::kExitConfigError;
}
