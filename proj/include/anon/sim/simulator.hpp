#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anon/sim/automaton.hpp"
#include "anon/sim/memory.hpp"
#include "anon/sim/model.hpp"

namespace anon::sim {

enum class ProcessStatus : std::uint8_t { runnable, crashed, returned };

struct ProcessOutcome {
  ProcessStatus status = ProcessStatus::runnable;
  std::optional<Value> output;
};

/**
 * The global state of a run: shared memory plus one automaton per process.
 * Copying a System deep-copies the automata, which is what the explorer
 * uses to branch.
 */
class System {
 public:
  System(const ProcessProgram& program, const ModelConfig& cfg);
  System(const System& other);
  System& operator=(const System& other);
  System(System&&) noexcept = default;
  System& operator=(System&&) noexcept = default;
  ~System();

  int n() const { return static_cast<int>(procs_.size()); }
  std::uint64_t steps() const { return steps_; }
  int crashed_count() const;
  std::uint64_t completions() const { return completions_; }

  bool runnable(int actor) const;
  std::vector<int> runnable_actors() const;
  bool quiescent() const { return runnable_actors().empty(); }
  /// True if some runnable process has an operation in progress.
  bool has_pending_operations() const;
  /// True while `actor` is inside an invoked, not yet responded operation
  /// named `op`.
  bool inside(int actor, std::string_view op) const;

  /// Executes one atomic memory step of `actor`, appending its events.
  void step(int actor, std::vector<Event>& out);
  void crash(int actor, std::vector<Event>& out);

  const SharedMemory& memory() const { return memory_; }
  ProcessOutcome outcome(int actor) const;
  const Automaton& automaton(int actor) const;

  std::size_t hash() const;
  bool same_state(const System& other) const;

 private:
  struct Proc;
  class Recorder;

  SharedMemory memory_;
  std::vector<std::unique_ptr<Proc>> procs_;
  std::uint64_t steps_ = 0;
  std::uint64_t completions_ = 0;
};

struct SchedulerPolicy {
  enum class Kind { round_robin, seeded_random, scripted };
  Kind kind = Kind::round_robin;
  /// For `scripted`: actors to step in order. Entries naming a process that
  /// cannot step are skipped; when the script runs out the run continues
  /// round-robin.
  std::vector<int> script;

  static SchedulerPolicy round_robin() { return {Kind::round_robin, {}}; }
  static SchedulerPolicy seeded_random() { return {Kind::seeded_random, {}}; }
  static SchedulerPolicy scripted(std::vector<int> s) { return {Kind::scripted, std::move(s)}; }
};

std::string_view to_string(SchedulerPolicy::Kind k);

struct RunResult {
  Trace trace;
  std::vector<ProcessOutcome> outcomes;
};

/// Runs `program` to quiescence or until `cfg.max_steps` steps. A pure
/// function of its arguments: equal inputs give equal traces.
RunResult run(const ProcessProgram& program, const ModelConfig& cfg, const CrashPlan& plan,
              const SchedulerPolicy& policy);

}  // namespace anon::sim
