#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "anon/sim/simulator.hpp"

namespace anon::sim {

struct ExploreOptions {
  std::uint64_t depth = 40;         // memory steps per branch
  bool crash_choices = false;       // also branch on crashing each runnable actor (<= t)
  std::uint64_t node_budget = 200'000'000;
  bool stop_at_first_violation = false;
  /// At the depth bound, run the branch on round-robin until quiescent (or
  /// `completion_steps` more steps) instead of cutting it off.
  bool complete_bounded = false;
  std::uint64_t completion_steps = 100'000;
};

/// Returns a description of the violation, or nullopt if the history is fine.
using HistoryCheck = std::function<std::optional<std::string>(const Trace&)>;

struct ExplorationReport {
  std::uint64_t complete_histories = 0;  // every process returned or crashed
  std::uint64_t bounded_histories = 0;   // cut off at the depth bound
  std::uint64_t completed_after_bound = 0;  // finished round-robin past the bound (counted as complete)
  std::uint64_t violations = 0;
  std::uint64_t cycles = 0;              // repeated global state, no completion in between
  std::uint64_t nodes = 0;
  bool truncated = false;                // node budget exhausted
  std::optional<std::string> first_violation;
  std::optional<Trace> counterexample;
  std::optional<Trace> cycle_witness;

  std::uint64_t histories() const { return complete_histories + bounded_histories; }
};

/**
 * Depth-first enumeration of every interleaving of `program` up to
 * `opts.depth` steps (and, with crash choices, every placement of at most
 * t crashes). `check` runs on every leaf history, complete or cut off.
 *
 * Along each branch the global state is hashed; revisiting a state with
 * operations pending and no completion since the earlier visit is a lasso
 * the adversary can repeat forever, reported as a no-progress cycle.
 */
ExplorationReport explore(const ProcessProgram& program, const ModelConfig& cfg,
                          const ExploreOptions& opts, const HistoryCheck& check);

}  // namespace anon::sim
