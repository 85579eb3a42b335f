#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "snmpcep/errors.hpp"
#include "snmpcep/event.hpp"
#include "snmpcep/oid_map.hpp"
#include "snmpcep/snmp_client.hpp"

namespace snmpcep {

struct PollerConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 161;
  std::string community = "public";
  std::int64_t poll_interval_ms = 1000;
  std::vector<std::string> measures;  // enabled measures; empty = all in the map
  std::string source = "ictgw";
  int timeout_ms = 2000;
  int retries = 2;

  void check() const {
    if (poll_interval_ms < 100) throw ValueError("poll_interval_ms must be >= 100");
    if (host.empty()) throw ValueError("agent host must be set");
  }

  SnmpClientConfig client_config() const {
    return SnmpClientConfig{host, port, community, timeout_ms, retries};
  }
};

using WarnFn = std::function<void(const std::string&)>;

inline std::int64_t wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// One acquisition cycle: every enabled scalar object is fetched with a
// single GET, per-row objects are walked. The whole batch carries one
// acquisition timestamp. Objects the agent does not expose are skipped with
// a warning; a dead agent raises SnmpTimeout.
inline std::vector<Event> poll_once(SnmpClient& client, const OidMap& oid_map,
                                    const PollerConfig& config, const WarnFn& warn = {},
                                    std::int64_t ts_ms = -1) {
  auto enabled = [&](const std::string& measure) {
    if (config.measures.empty()) return true;
    for (const auto& m : config.measures)
      if (m == measure) return true;
    return false;
  };
  auto say = [&](const std::string& msg) {
    if (warn) warn(msg);
  };

  std::vector<Oid> scalar_oids;
  std::vector<const OidEntry*> scalars;
  for (const auto& e : oid_map.entries) {
    if (!e.per_row && enabled(e.measure)) {
      scalars.push_back(&e);
      scalar_oids.push_back(e.oid.with_suffix(0));
    }
  }

  if (ts_ms < 0) ts_ms = wall_clock_ms();
  std::vector<Event> out;

  for (const auto& e : oid_map.entries) {
    if (!e.per_row || !enabled(e.measure)) continue;
    std::vector<VarBind> rows = client.walk(e.oid);
    if (rows.empty()) {
      say("measure " + e.measure + ": no rows at " + e.oid.to_string());
      continue;
    }
    for (const auto& vb : rows) {
      if (!vb.value.is_numeric()) {
        say("measure " + e.measure + ": non-numeric value at " + vb.oid.to_string());
        continue;
      }
      std::string row;
      for (std::size_t i = e.oid.ids.size(); i < vb.oid.ids.size(); ++i) {
        if (!row.empty()) row += '.';
        row += std::to_string(vb.oid.ids[i]);
      }
      out.push_back(Event{ts_ms, EventKind::Measurement, e.measure + "." + row,
                          vb.value.int_val, config.source});
    }
  }

  if (!scalar_oids.empty()) {
    std::vector<VarBind> got = client.get(scalar_oids);
    for (std::size_t i = 0; i < scalars.size() && i < got.size(); ++i) {
      const SnmpValue& v = got[i].value;
      if (v.type == SnmpValue::Type::NoSuchObject ||
          v.type == SnmpValue::Type::NoSuchInstance || v.type == SnmpValue::Type::Null) {
        say("measure " + scalars[i]->measure + ": not exposed by agent");
        continue;
      }
      if (!v.is_numeric()) {
        say("measure " + scalars[i]->measure + ": non-numeric value");
        continue;
      }
      out.push_back(Event{ts_ms, EventKind::Measurement, scalars[i]->measure, v.int_val,
                          config.source});
    }
  }

  // Batch order follows the OID map, per-row entries first above; re-sort to
  // canonical map order for a deterministic batch layout.
  std::vector<Event> ordered;
  for (const auto& e : oid_map.entries)
    for (auto& ev : out)
      if (base_measure(ev.measure) == e.measure) ordered.push_back(std::move(ev));
  return ordered;
}

// Continuous poller: one acquisition per interval delivered to the sink as
// an atomic batch, in timestamp order. Transient failures skip the cycle;
// more than 10 consecutive failures terminate the run with a diagnostic.
class Poller {
 public:
  using Sink = std::function<void(std::vector<Event>)>;

  Poller(PollerConfig config, OidMap oid_map, Sink sink, WarnFn warn = {})
      : config_(std::move(config)),
        oid_map_(std::move(oid_map)),
        sink_(std::move(sink)),
        warn_(std::move(warn)) {
    config_.check();
  }

  ~Poller() { stop(); }

  void start() {
    if (thread_.joinable()) return;
    stop_requested_ = false;
    thread_ = std::thread([this] { run(); });
  }

  // Requests shutdown and waits for the loop to drain; no partial batch is
  // delivered.
  void stop() {
    {
      std::lock_guard lock(mu_);
      stop_requested_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable()) thread_.join();
  }

  bool failed() const { return failed_; }
  const std::string& diagnostic() const { return diagnostic_; }
  int cycles_completed() const { return cycles_completed_; }

  static constexpr int kMaxConsecutiveFailures = 10;

 private:
  PollerConfig config_;
  OidMap oid_map_;
  Sink sink_;
  WarnFn warn_;
  std::thread thread_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stop_requested_ = false;
  std::atomic<bool> failed_ = false;
  std::atomic<int> cycles_completed_ = 0;
  std::string diagnostic_;

  bool wait_until(std::chrono::steady_clock::time_point tp) {
    std::unique_lock lock(mu_);
    return !cv_.wait_until(lock, tp, [&] { return stop_requested_; });
  }

  bool stopping() {
    std::lock_guard lock(mu_);
    return stop_requested_;
  }

  void run() {
    std::optional<SnmpClient> client;
    try {
      client.emplace(config_.client_config());
    } catch (const SnmpError& e) {
      failed_ = true;
      diagnostic_ = std::string("cannot reach agent: ") + e.what();
      return;
    }
    int consecutive_failures = 0;
    std::int64_t last_ts = 0;
    auto next = std::chrono::steady_clock::now();
    while (!stopping()) {
      try {
        std::vector<Event> batch = poll_once(*client, oid_map_, config_, warn_);
        // Wall clock may step backwards; keep the sink's order contract.
        if (!batch.empty()) {
          std::int64_t ts = std::max(batch.front().ts_ms, last_ts);
          for (auto& e : batch) e.ts_ms = ts;
          last_ts = ts;
        }
        consecutive_failures = 0;
        if (stopping()) break;  // drain: no delivery after stop
        sink_(std::move(batch));
        ++cycles_completed_;
      } catch (const SnmpError& e) {
        ++consecutive_failures;
        if (warn_) warn_(std::string("poll cycle failed: ") + e.what());
        if (consecutive_failures > kMaxConsecutiveFailures) {
          failed_ = true;
          diagnostic_ = "aborted after " + std::to_string(consecutive_failures) +
                        " consecutive failed cycles: " + e.what();
          return;
        }
      }
      next += std::chrono::milliseconds(config_.poll_interval_ms);
      auto now = std::chrono::steady_clock::now();
      if (next < now) next = now;  // fell behind, realign
      if (!wait_until(next)) break;
    }
  }
};

}  // namespace snmpcep
