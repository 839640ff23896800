#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anon/verify/history.hpp"
#include "anon/verify/report.hpp"
#include "anon/weakset/weak_set.hpp"

namespace anon::verify {

/// When a returned view V counts as "in every register": all registers
/// equal V, or V is a subset of every register.
enum class TauMode : std::uint8_t { equality, subset };

std::string_view to_string(TauMode m);

/// First step after which `v` is in every register.
std::optional<std::uint64_t> tau_value(const HistoryView& h, const Value& v);
/// First step after which every register equals (or contains) `view`.
std::optional<std::uint64_t> tau_view(const HistoryView& h, const Value& view, TauMode mode);

struct Linearization {
  Verdict verdict = Verdict::pass;
  std::string detail;
  std::optional<Window> window;
  /// Witness: linearized operations in order, with their points (the
  /// brute-force search leaves points empty).
  std::vector<const OpRecord*> order;
  std::vector<std::uint64_t> points;
};

/**
 * Linearizes every completed add(v) at max(tau_v, invoc) and every completed
 * get -> V at max(tau_V, invoc), then checks each point lies inside its
 * operation and that the resulting sequence obeys the weak-set sequential
 * specification. Coincident points order adds before gets, then by
 * invocation.
 *
 * An add that never responded is still linearized when its value reached
 * every register, since gets may already have returned it.
 */
Linearization linearize_tau(const HistoryView& h, TauMode mode = TauMode::equality,
                            std::string_view object = weakset::kPhysicalObject);

struct BruteForceOptions {
  std::uint64_t node_budget = 2'000'000;
  bool include_incomplete_adds = true;
};

/// Searches every order of the operations consistent with real-time
/// precedence for one satisfying the sequential specification. Completed
/// operations must all appear; adds that never responded may or may not.
/// Returns inconclusive when the budget runs out or the history is too long.
Linearization linearize_bruteforce(const HistoryView& h, const BruteForceOptions& opts = {},
                                   std::string_view object = weakset::kPhysicalObject);

/// Both checkers plus a cross-check of their verdicts.
CheckReport check_linearizability(const HistoryView& h, TauMode mode = TauMode::equality,
                                  const BruteForceOptions& opts = {});

/// The tau checker under both readings of "view in every register"; a
/// disagreement is reported as a failure.
CheckReport tau_mode_agreement(const HistoryView& h);

}  // namespace anon::verify
