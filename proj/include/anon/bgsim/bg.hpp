#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anon/agreement/safe_agreement.hpp"
#include "anon/sim/automaton.hpp"

namespace anon::bgsim {

inline constexpr std::string_view kBgObject = "bgsim";
inline constexpr std::string_view kBgSet = "BG.SET";

/// Safe agreement object that fixes simulated step `round` of P_i.
std::string grid_name(int round, int i);
/// Inverse of grid_name; nullopt if `object` is not a grid object.
std::optional<std::pair<int, int>> parse_grid_name(std::string_view object);

// ---- simulated states -----------------------------------------------------
// Round 0: ("in", input). Later rounds: ("view", (c_0, ..., c_{n-1})) where
// c_j is the latest state of P_j seen by the simulated scan, nil if none.

Value initial_state(const Value& input);
Value view_state(std::vector<Value> components);
bool is_initial_state(const Value& s);
bool is_view_state(const Value& s);
const Value& state_input(const Value& s);
/// Components of a view state.
std::span<const Value> state_components(const Value& s);

/// A write of the simulated execution, as stored in BG.SET: (i, state, round).
Value triple(int i, const Value& state, int round);
struct Triple {
  int i;
  Value state;
  int round;
};
std::optional<Triple> parse_triple(const Value& v);

/// Per component, the state with the largest round (nil if P_i is absent).
std::vector<Value> latest_views(const Value& snap, int n);
/// Largest round recorded for P_i, 0 if absent.
int latest_round(const Value& snap, int i);

/// Inputs of the simulated processes a state knows about, transitively.
Value known_inputs(const Value& s);
/// Indices of the simulated processes a state knows about, transitively.
Value known_processes(const Value& s);
/// Nesting depth: 0 for an initial state, 1 + max over components otherwise.
int state_depth(const Value& s);

/// The simulated full-information protocol.
struct SimulatedProcessSpec {
  std::string name;
  int n = 1;
  std::function<bool(const Value&)> terminal;
  std::function<Value(const Value&)> decide;
};

/// Decide min of the known inputs once at least n - t processes are known.
SimulatedProcessSpec full_information_set_agreement(int n, int t);
/// Decide the set of known inputs after `rounds` simulated rounds.
SimulatedProcessSpec flooding(int n, int rounds);
/// Looks up a built-in by name ("setagreement" or "flooding").
SimulatedProcessSpec builtin_spec(std::string_view name, int n, int t, int rounds);

/**
 * One anonymous simulator. Proposes its input as the initial state of every
 * simulated process, then repeatedly advances P_0..P_{n-1} round-robin:
 * resolve the process's current safe agreement; if the agreed state is
 * terminal, decide; if it is known, publish it in BG.SET, read BG.SET back
 * as the simulated scan and propose the resulting state for the next round.
 */
class BgSimulator final : public sim::AutomatonBase<BgSimulator> {
 public:
  BgSimulator(std::shared_ptr<const SimulatedProcessSpec> spec, Value input);

  void start(sim::OpLog& log) override;
  std::optional<sim::MemRequest> next_request() const override;
  void deliver(const Value& observed, sim::OpLog& log) override;
  std::optional<Value> output() const override { return decision_; }
  std::size_t hash() const override;

  friend bool operator==(const BgSimulator& a, const BgSimulator& b) {
    return a.port_ == b.port_ && a.sa_ == b.sa_ && a.round_ == b.round_ && a.input_ == b.input_ &&
           a.cursor_ == b.cursor_ && a.phase_ == b.phase_ && a.pending_ == b.pending_ &&
           a.decision_ == b.decision_;
  }

 private:
  enum class Phase : std::uint8_t { proposing, resolving, publishing, reading, advancing, done };

  int n() const { return spec_->n; }
  void resolve_current(sim::OpLog& log);
  void move_on(sim::OpLog& log);

  std::shared_ptr<const SimulatedProcessSpec> spec_;
  weakset::SetPort port_;
  std::vector<agreement::SafeAgreementClient> sa_;  // current object per simulated process
  std::vector<int> round_;
  Value input_;
  int cursor_ = 0;
  Phase phase_ = Phase::proposing;
  Value pending_;  // agreed state being published
  std::optional<Value> decision_;
};

sim::ProcessProgram bg_program(std::shared_ptr<const SimulatedProcessSpec> spec, std::vector<Value> inputs);

}  // namespace anon::bgsim
