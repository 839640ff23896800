#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "anon/value.hpp"

namespace anon::sim {

/// Raised for programming errors inside a simulation (bad register index,
/// protocol misuse). Aborts the run.
class SimulationFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a run is configured inconsistently (e.g. t >= n, more
/// crashing actors than t). Raised before any step executes.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ModelConfig {
  int n = 1;
  int t = 0;  // crash budget, 0 <= t < n
  std::uint64_t max_steps = 100000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Crash `actor` once at least `at_step` memory steps have executed. With a
/// non-empty `outside_op`, the crash is postponed while the actor is inside
/// an operation of that name (e.g. "propose").
struct CrashRule {
  int actor = 0;
  std::uint64_t at_step = 0;
  std::string outside_op;
};

struct CrashPlan {
  std::vector<CrashRule> rules;

  int distinct_actors() const;
  void validate(const ModelConfig& cfg) const;
};

enum class EventKind : std::uint8_t { invoke, respond, read, write, scan, update, crash, truncated };

std::string_view to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

bool is_memory_event(EventKind k);

/// One line of a trace. `actor` is the simulator-private process index; it
/// is recorded for the checkers and never shown to protocol code.
///
/// Operation events carry the step of the memory event they are attached
/// to: an invoke carries the step of the operation's first memory event,
/// a respond the step of its last one. A crash carries the number of steps
/// executed when it happened.
struct Event {
  std::uint64_t step = 0;
  int actor = -1;
  EventKind kind = EventKind::invoke;
  std::string object;
  std::string op;
  std::vector<Value> args;
  std::optional<Value> ret;

  friend bool operator==(const Event&, const Event&) = default;
};

struct Trace {
  int n = 0;
  std::vector<Event> events;
  bool truncated = false;

  std::uint64_t steps() const;
  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Name of the shared snapshot object / register array in traces.
inline constexpr std::string_view kMemoryObject = "R";

}  // namespace anon::sim
