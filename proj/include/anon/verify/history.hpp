#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "anon/sim/model.hpp"

namespace anon::verify {

/// One operation instance recovered from a trace.
struct OpRecord {
  int actor = -1;
  std::string object;
  std::string op;
  std::vector<Value> args;
  std::optional<Value> ret;
  std::uint64_t invoc = 0;
  std::optional<std::uint64_t> resp;  // nullopt while incomplete

  bool complete() const { return resp.has_value(); }
};

/**
 * A trace reorganized for analysis: matched invoke/respond pairs, the crash
 * record, and the register contents after every step, rebuilt from the
 * write/update events.
 *
 * Construction replays the memory events and compares every recorded read
 * and scan with the replayed contents; the first mismatch (or malformed
 * event) is kept in `replay_error()`.
 *
 * The view keeps a pointer to the trace, which must outlive it.
 */
class HistoryView {
 public:
  explicit HistoryView(const sim::Trace& trace);

  int n() const { return n_; }
  const sim::Trace& trace() const { return *trace_; }
  std::uint64_t last_step() const { return last_step_; }
  bool truncated() const { return trace_->truncated; }

  const std::vector<OpRecord>& ops() const { return ops_; }
  std::vector<const OpRecord*> ops_on(std::string_view object) const;
  std::vector<std::string> objects() const;

  bool crashed(int actor) const { return crash_step_[static_cast<std::size_t>(actor)].has_value(); }
  std::optional<std::uint64_t> crash_step(int actor) const { return crash_step_[static_cast<std::size_t>(actor)]; }
  int crashed_count() const;
  int actors() const { return static_cast<int>(crash_step_.size()); }

  /// Register contents after step `tau` (tau = 0 is the initial state).
  const std::vector<Value>& cells_at(std::uint64_t tau) const { return timeline_[tau]; }

  /// Memory events (read/write/scan/update) per actor, in order.
  const std::vector<std::vector<const sim::Event*>>& memory_events() const { return mem_by_actor_; }

  const std::optional<std::string>& replay_error() const { return replay_error_; }
  /// Register indices touched by memory events (a scan touches them all).
  const std::set<int>& touched_cells() const { return touched_; }

 private:
  void fail(std::string msg);

  const sim::Trace* trace_;
  int n_;
  std::uint64_t last_step_ = 0;
  std::vector<OpRecord> ops_;
  std::vector<std::optional<std::uint64_t>> crash_step_;
  std::vector<std::vector<Value>> timeline_;
  std::vector<std::vector<const sim::Event*>> mem_by_actor_;
  std::set<int> touched_;
  std::optional<std::string> replay_error_;
};

}  // namespace anon::verify
