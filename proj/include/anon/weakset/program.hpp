#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "anon/sim/automaton.hpp"
#include "anon/weakset/multiplex.hpp"

namespace anon::weakset {

/// One scripted weak-set call. An empty `object` means the physical set.
struct ScriptedOp {
  OpKind kind = OpKind::add;
  Value arg;
  std::string object;

  friend bool operator==(const ScriptedOp&, const ScriptedOp&) = default;
};

/// Script encoding used as a process input:
/// tuple of ("add", v[, object]) and ("get"[, object]) tuples.
Value encode_script(const std::vector<ScriptedOp>& ops);
std::vector<ScriptedOp> decode_script(const Value& input);

ScriptedOp add_op(Value v, std::string object = {});
ScriptedOp get_op(std::string object = {});

/**
 * Runs a fixed sequence of weak-set calls, one after the other. Output is
 * the tuple of the views returned by its gets, in order.
 */
class WeakSetProgram final : public sim::AutomatonBase<WeakSetProgram> {
 public:
  WeakSetProgram(int n, std::vector<ScriptedOp> ops, Mutation mutation = Mutation::none);

  void start(sim::OpLog& log) override;
  std::optional<sim::MemRequest> next_request() const override;
  void deliver(const Value& observed, sim::OpLog& log) override;
  std::optional<Value> output() const override;
  std::size_t hash() const override;

  friend bool operator==(const WeakSetProgram&, const WeakSetProgram&) = default;

 private:
  void launch(sim::OpLog& log);

  SetPort port_;
  std::vector<ScriptedOp> ops_;
  std::size_t pc_ = 0;
  std::vector<Value> results_;
};

/// Every process runs the script it is given as input.
sim::ProcessProgram weak_set_program(int n, std::vector<std::vector<ScriptedOp>> scripts,
                                     Mutation mutation = Mutation::none);

/// Default workload: process i runs add(i); get().
sim::ProcessProgram default_weak_set_program(int n, Mutation mutation = Mutation::none);

}  // namespace anon::weakset
