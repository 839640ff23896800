#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "anon/sim/automaton.hpp"
#include "anon/sim/memory.hpp"
#include "anon/value.hpp"

namespace anon::weakset {

/// Name of the single physical weak set in traces.
inline constexpr std::string_view kPhysicalObject = "WS";

/// Deliberately broken variants, used to show the checkers catch bugs.
enum class Mutation : std::uint8_t {
  none,
  add_skips_final_scan,  // add returns once its own writes "should" cover R, without re-scanning
  get_guard_n_minus_1,   // get stops when n-1 registers equal View
  no_view_absorption,    // loop scans do not merge vals(Snap) into View
};

std::string_view to_string(Mutation m);
Mutation mutation_from_string(std::string_view s);

enum class OpKind : std::uint8_t { add, get };

/**
 * One process's side of the anonymous weak set over n registers.
 *
 * Holds the per-process locals (Snap, View, next) and the operation in
 * progress. add(v) scans, then keeps writing View into R[next] and
 * rescanning until v is in every register; get() does the same until
 * every register equals View. View only grows, across operations too.
 */
class WeakSetClient {
 public:
  explicit WeakSetClient(int n, Mutation mutation = Mutation::none);

  void begin_add(Value v, sim::OpLog& log);
  void begin_get(sim::OpLog& log);

  bool busy() const { return phase_ != Phase::idle; }
  sim::MemRequest request() const;

  struct Completion {
    OpKind kind;
    Value result;  // View for get, nil for add
  };
  /// Feeds the result of the pending request. Returns the completion when
  /// the operation responds.
  std::optional<Completion> deliver(const Value& observed, sim::OpLog& log);

  const Value& view() const { return view_; }
  int n() const { return n_; }

  std::size_t hash() const;
  friend bool operator==(const WeakSetClient&, const WeakSetClient&) = default;

 private:
  enum class Phase : std::uint8_t { idle, first_scan, scan, update };

  bool guard_satisfied() const;
  std::optional<Completion> after_scan(sim::OpLog& log);
  std::optional<Completion> finish(sim::OpLog& log);

  int n_;
  Mutation mutation_;
  Phase phase_ = Phase::idle;
  OpKind op_ = OpKind::add;
  Value arg_;
  Value snap_;  // last scan: tuple of n sets
  Value view_ = Value::empty_set();
  int next_ = 0;
};

}  // namespace anon::weakset
