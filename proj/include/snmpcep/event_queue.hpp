#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

#include "snmpcep/event.hpp"

namespace snmpcep {

// Ordered handoff between the poller producer and the correlator consumer.
// A batch is appended atomically so the consumer never sees half a poll cycle.
class EventQueue {
 public:
  void push_batch(std::vector<Event> batch) {
    {
      std::lock_guard lock(mu_);
      if (closed_) return;
      for (auto& e : batch) items_.push_back(std::move(e));
    }
    cv_.notify_all();
  }

  // Next event, waiting up to timeout; nullopt on timeout or when closed
  // and drained.
  std::optional<Event> pop(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    Event e = std::move(items_.front());
    items_.pop_front();
    return e;
  }

  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  bool closed() const {
    std::lock_guard lock(mu_);
    return closed_;
  }

  bool drained() const {
    std::lock_guard lock(mu_);
    return closed_ && items_.empty();
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Event> items_;
  bool closed_ = false;
};

}  // namespace snmpcep
