#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "snmpcep/errors.hpp"
#include "snmpcep/event.hpp"
#include "snmpcep/scenarios.hpp"

namespace snmpcep {

// Seeded trace generators reproducing nominal behavior and the injected
// anomaly signatures. A fixed seed yields a byte-identical trace, and every
// scenario's pre-injection prefix equals the nominal trace for the same seed
// (injections only override samples at or after injection_start_ms).

namespace gen_detail {

struct Series {
  std::vector<std::int64_t> cpu;          // hrProcessorLoad level per batch
  std::vector<std::int64_t> storage;      // hrStorageUsed level
  std::vector<std::int64_t> tasks;        // hrSystemProcesses level
  std::vector<std::int64_t> icmp_inc;     // icmpInEchos increment per batch
  std::vector<std::int64_t> estab_inc;    // tcpEstabResets increment
  std::vector<std::int64_t> retrans_inc;  // tcpRetransSegs increment
  std::int64_t icmp0 = 0, estab0 = 0, retrans0 = 0;
  std::vector<std::pair<std::size_t, std::string>> signals;  // after batch index
};

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline Series nominal_series(const ScenarioSpec& spec, std::size_t batches) {
  const BaselineParams& b = spec.baseline;
  std::mt19937_64 rng(spec.seed);
  Series s;
  s.icmp0 = uniform(rng, 100, 10000);
  s.estab0 = uniform(rng, 0, 500);
  s.retrans0 = uniform(rng, 0, 2000);
  std::int64_t storage = (b.storage_min + b.storage_max) / 2;
  std::int64_t tasks = (b.tasks_min + b.tasks_max) / 2;
  std::deque<std::int64_t> retrans_window;
  std::int64_t window_batches = std::max<std::int64_t>(1, 15000 / spec.poll_interval_ms);
  for (std::size_t i = 0; i < batches; ++i) {
    s.cpu.push_back(uniform(rng, b.cpu_min, b.cpu_max));
    storage = std::clamp(storage + uniform(rng, -500, 500), b.storage_min, b.storage_max);
    s.storage.push_back(storage);
    tasks = std::clamp(tasks + uniform(rng, -2, 2), static_cast<std::int64_t>(b.tasks_min),
                       static_cast<std::int64_t>(b.tasks_max));
    s.tasks.push_back(tasks);
    s.icmp_inc.push_back(uniform(rng, 0, b.icmp_delta_max));
    s.estab_inc.push_back(0);
    std::int64_t want = uniform(rng, 0, 5) == 0 ? 1 : 0;
    std::int64_t in_window = 0;
    for (auto v : retrans_window) in_window += v;
    std::int64_t inc = in_window + want > b.retrans_budget_15s ? 0 : want;
    s.retrans_inc.push_back(inc);
    retrans_window.push_back(inc);
    if (static_cast<std::int64_t>(retrans_window.size()) >= window_batches)
      retrans_window.pop_front();
  }
  return s;
}

inline void inject(const ScenarioSpec& spec, Series& s, std::size_t batches) {
  const std::size_t b_inj = static_cast<std::size_t>(spec.injection_start_ms /
                                                     spec.poll_interval_ms);
  // Separate stream so baseline draws (and thus the prefix) stay untouched.
  std::mt19937_64 rng(spec.seed ^ (0x9e3779b97f4a7c15ULL *
                                   (static_cast<std::uint64_t>(spec.kind) + 1)));
  auto set_signal = [&](std::int64_t at_ms) {
    std::size_t idx = static_cast<std::size_t>(at_ms / spec.poll_interval_ms);
    if (idx < batches) s.signals.emplace_back(idx, "SocketException");
  };
  switch (spec.kind) {
    case ScenarioKind::Nominal:
      return;
    case ScenarioKind::CpuOverload:
      for (std::size_t i = b_inj; i < batches; ++i) s.cpu[i] = uniform(rng, 91, 100);
      return;
    case ScenarioKind::RamOverload:
      for (std::size_t i = b_inj; i < batches; ++i) s.storage[i] = uniform(rng, 62500, 68000);
      return;
    case ScenarioKind::TaskStorm:
      s.tasks[b_inj] = 41;
      for (std::size_t i = b_inj + 1; i < batches; ++i) s.tasks[i] = uniform(rng, 41, 60);
      return;
    case ScenarioKind::TcpResetFast: {
      // Reconnect-reset loop: +7 resets within the first second, waning
      // until the service times out two seconds after the burst starts.
      if (b_inj + 1 < batches) s.estab_inc[b_inj + 1] = 7;
      if (b_inj + 2 < batches) s.estab_inc[b_inj + 2] = 3;
      set_signal(spec.injection_start_ms + 2000);
      return;
    }
    case ScenarioKind::TcpResetSlow: {
      // Resets not yet triggered; the flooding side effect spikes
      // retransmissions until a socket exception three seconds in.
      if (b_inj + 1 < batches) s.retrans_inc[b_inj + 1] = 6;
      if (b_inj + 2 < batches) s.retrans_inc[b_inj + 2] = 2;
      if (b_inj + 3 < batches) s.retrans_inc[b_inj + 3] = 2;
      set_signal(spec.injection_start_ms + 3000);
      return;
    }
    case ScenarioKind::IcmpFloodModerate: {
      std::int64_t dur = spec.attack_duration_ms.value_or(30000);
      std::size_t n = static_cast<std::size_t>(dur / 1000);
      // ~100 pings over 30 s: alternating +4/+3 per second.
      for (std::size_t k = 1; k <= n && b_inj + k < batches; ++k)
        s.icmp_inc[b_inj + k] = (k % 2 == 1) ? 4 : 3;
      return;
    }
    case ScenarioKind::IcmpFloodStrong: {
      std::int64_t dur = spec.attack_duration_ms.value_or(5000);
      std::size_t n = static_cast<std::size_t>(dur / 1000);
      for (std::size_t k = 1; k <= n && b_inj + k < batches; ++k)
        s.icmp_inc[b_inj + k] = 40000 + uniform(rng, -2000, 2000);
      // A flood sustained past ~3 s breaks the connection; short bursts
      // leave it intact.
      if (dur > 3000) set_signal(spec.injection_start_ms + 3000);
      return;
    }
  }
}

inline Trace assemble(const ScenarioSpec& spec, const Series& s, std::size_t batches) {
  Trace out;
  std::int64_t icmp = s.icmp0, estab = s.estab0, retrans = s.retrans0;
  for (std::size_t i = 0; i < batches; ++i) {
    std::int64_t t = static_cast<std::int64_t>(i) * spec.poll_interval_ms;
    icmp += s.icmp_inc[i];
    estab += s.estab_inc[i];
    retrans += s.retrans_inc[i];
    auto m = [&](const char* name, std::int64_t v) {
      out.push_back(Event{t, EventKind::Measurement, name, v, spec.source});
    };
    m("hrProcessorLoad", s.cpu[i]);
    m("hrStorageUsed", s.storage[i]);
    m("hrSystemProcesses", s.tasks[i]);
    m("icmpInEchos", icmp);
    m("tcpEstabResets", estab);
    m("tcpRetransSegs", retrans);
    for (const auto& [idx, name] : s.signals)
      if (idx == i)
        out.push_back(Event{t, EventKind::ApplicationSignal, name, std::nullopt, spec.source});
  }
  return out;
}

inline Trace generate(const ScenarioSpec& spec) {
  spec.check();
  std::size_t batches = static_cast<std::size_t>(spec.duration_ms / spec.poll_interval_ms);
  Series s = nominal_series(spec, batches);
  inject(spec, s, batches);
  return assemble(spec, s, batches);
}

}  // namespace gen_detail

inline Trace generate_trace(const ScenarioSpec& spec) { return gen_detail::generate(spec); }

namespace detail {
inline void require_kind(const ScenarioSpec& spec, std::initializer_list<ScenarioKind> ok) {
  for (auto k : ok)
    if (spec.kind == k) return;
  throw ValueError(std::string("scenario kind mismatch: got ") +
                   scenario_kind_name(spec.kind));
}
}  // namespace detail

inline Trace gen_nominal(const ScenarioSpec& spec) {
  detail::require_kind(spec, {ScenarioKind::Nominal});
  return gen_detail::generate(spec);
}

inline Trace gen_tcp_reset_fast(const ScenarioSpec& spec) {
  detail::require_kind(spec, {ScenarioKind::TcpResetFast});
  return gen_detail::generate(spec);
}

inline Trace gen_tcp_reset_slow(const ScenarioSpec& spec) {
  detail::require_kind(spec, {ScenarioKind::TcpResetSlow});
  return gen_detail::generate(spec);
}

inline Trace gen_icmp_flood(const ScenarioSpec& spec) {
  detail::require_kind(spec, {ScenarioKind::IcmpFloodModerate, ScenarioKind::IcmpFloodStrong});
  return gen_detail::generate(spec);
}

inline Trace gen_resource_overload(const ScenarioSpec& spec) {
  detail::require_kind(spec, {ScenarioKind::CpuOverload, ScenarioKind::RamOverload,
                              ScenarioKind::TaskStorm});
  return gen_detail::generate(spec);
}

}  // namespace snmpcep
