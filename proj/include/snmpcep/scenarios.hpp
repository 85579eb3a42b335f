#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "snmpcep/errors.hpp"

namespace snmpcep {

enum class ScenarioKind {
  Nominal,
  CpuOverload,
  RamOverload,
  TaskStorm,
  TcpResetFast,
  TcpResetSlow,
  IcmpFloodModerate,
  IcmpFloodStrong,
};

inline const char* scenario_kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Nominal: return "nominal";
    case ScenarioKind::CpuOverload: return "cpu_overload";
    case ScenarioKind::RamOverload: return "ram_overload";
    case ScenarioKind::TaskStorm: return "task_storm";
    case ScenarioKind::TcpResetFast: return "tcp_reset_fast";
    case ScenarioKind::TcpResetSlow: return "tcp_reset_slow";
    case ScenarioKind::IcmpFloodModerate: return "icmp_flood_moderate";
    case ScenarioKind::IcmpFloodStrong: return "icmp_flood_strong";
  }
  return "?";
}

inline ScenarioKind scenario_kind_from_name(const std::string& s) {
  for (ScenarioKind k :
       {ScenarioKind::Nominal, ScenarioKind::CpuOverload, ScenarioKind::RamOverload,
        ScenarioKind::TaskStorm, ScenarioKind::TcpResetFast, ScenarioKind::TcpResetSlow,
        ScenarioKind::IcmpFloodModerate, ScenarioKind::IcmpFloodStrong})
    if (s == scenario_kind_name(k)) return k;
  throw ValueError("unknown scenario kind: " + s);
}

// Baseline envelope for nominal behavior. Defaults keep every measure below
// the detection thresholds.
struct BaselineParams {
  int cpu_min = 5;
  int cpu_max = 60;
  std::int64_t storage_min = 25000;
  std::int64_t storage_max = 55000;
  int tasks_min = 20;
  int tasks_max = 40;
  int icmp_delta_max = 3;           // per second
  int retrans_budget_15s = 4;       // total growth per 15 s

  friend bool operator==(const BaselineParams&, const BaselineParams&) = default;
};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Nominal;
  std::int64_t duration_ms = 60000;
  std::int64_t injection_start_ms = 30000;
  std::uint64_t seed = 1;
  std::int64_t poll_interval_ms = 1000;
  std::optional<std::int64_t> attack_duration_ms;  // floods; defaults per kind
  std::string source = "ictgw";
  BaselineParams baseline;

  void check() const {
    if (poll_interval_ms < 100) throw ValueError("poll_interval_ms must be >= 100");
    if (duration_ms <= 0) throw ValueError("duration_ms must be positive");
    if (injection_start_ms < 0 || injection_start_ms >= duration_ms)
      throw ValueError("injection_start_ms must lie in [0, duration_ms)");
    if (injection_start_ms % poll_interval_ms != 0)
      throw ValueError("injection_start_ms must align to the poll interval");
    bool per_second_signature =
        kind == ScenarioKind::TcpResetFast || kind == ScenarioKind::TcpResetSlow ||
        kind == ScenarioKind::IcmpFloodModerate || kind == ScenarioKind::IcmpFloodStrong;
    if (per_second_signature && poll_interval_ms != 1000)
      throw ValueError("attack signatures are defined at 1 s polling");
    if (attack_duration_ms && *attack_duration_ms <= 0)
      throw ValueError("attack_duration_ms must be positive");
  }
};

inline ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValueError("scenario spec must be a JSON object");
  ScenarioSpec s;
  if (!j.contains("kind")) throw ValueError("scenario spec needs 'kind'");
  s.kind = scenario_kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("duration_ms")) s.duration_ms = j.at("duration_ms").get<std::int64_t>();
  if (j.contains("injection_start_ms"))
    s.injection_start_ms = j.at("injection_start_ms").get<std::int64_t>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("poll_interval_ms"))
    s.poll_interval_ms = j.at("poll_interval_ms").get<std::int64_t>();
  if (j.contains("attack_duration_ms"))
    s.attack_duration_ms = j.at("attack_duration_ms").get<std::int64_t>();
  if (j.contains("source")) s.source = j.at("source").get<std::string>();
  if (j.contains("baseline")) {
    const auto& b = j.at("baseline");
    auto get = [&](const char* key, auto& into) {
      if (b.contains(key)) into = b.at(key).template get<std::decay_t<decltype(into)>>();
    };
    get("cpu_min", s.baseline.cpu_min);
    get("cpu_max", s.baseline.cpu_max);
    get("storage_min", s.baseline.storage_min);
    get("storage_max", s.baseline.storage_max);
    get("tasks_min", s.baseline.tasks_min);
    get("tasks_max", s.baseline.tasks_max);
    get("icmp_delta_max", s.baseline.icmp_delta_max);
    get("retrans_budget_15s", s.baseline.retrans_budget_15s);
  }
  s.check();
  return s;
}

inline ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error("bad scenario JSON in " + path + ": " + ex.what());
  }
  return scenario_from_json(j);
}

inline nlohmann::json scenario_to_json(const ScenarioSpec& s) {
  nlohmann::json j;
  j["kind"] = scenario_kind_name(s.kind);
  j["duration_ms"] = s.duration_ms;
  j["injection_start_ms"] = s.injection_start_ms;
  j["seed"] = s.seed;
  j["poll_interval_ms"] = s.poll_interval_ms;
  if (s.attack_duration_ms) j["attack_duration_ms"] = *s.attack_duration_ms;
  j["source"] = s.source;
  return j;
}

}  // namespace snmpcep
