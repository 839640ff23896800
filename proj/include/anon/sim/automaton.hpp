#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <typeinfo>
#include <vector>

#include "anon/sim/memory.hpp"
#include "anon/value.hpp"

namespace anon::sim {

/**
 * Protocol-facing recorder of operation boundaries.
 *
 * This, the memory request, and the observed value are the entire surface a
 * protocol sees. None of them carries a process index: processes are
 * anonymous and the simulator attaches identities to events privately.
 */
class OpLog {
 public:
  virtual ~OpLog() = default;
  virtual void invoke(std::string_view object, std::string_view op, std::vector<Value> args) = 0;
  virtual void respond(std::string_view object, std::string_view op, std::optional<Value> ret) = 0;
};

/// Discards everything. Handy for driving a protocol by hand in tests.
class NullOpLog final : public OpLog {
 public:
  void invoke(std::string_view, std::string_view, std::vector<Value>) override {}
  void respond(std::string_view, std::string_view, std::optional<Value>) override {}
};

/**
 * A deterministic process automaton. Between steps it sits on exactly one
 * pending memory request (or has finished); the simulator performs the
 * request atomically and hands back what was observed.
 *
 * Automata have value semantics: clone() gives an independent copy and
 * hash()/equals() cover the whole local state, program counter included.
 * The explorer relies on both.
 */
class Automaton {
 public:
  virtual ~Automaton() = default;

  virtual std::unique_ptr<Automaton> clone() const = 0;
  virtual void start(OpLog& log) = 0;
  /// nullopt once the automaton has finished its program.
  virtual std::optional<MemRequest> next_request() const = 0;
  virtual void deliver(const Value& observed, OpLog& log) = 0;
  virtual std::optional<Value> output() const = 0;

  virtual std::size_t hash() const = 0;
  virtual bool equals(const Automaton& other) const = 0;
};

/// Implements clone/equals from the derived type's copy constructor and
/// operator==.
template <class Derived>
class AutomatonBase : public Automaton {
 public:
  std::unique_ptr<Automaton> clone() const override {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
  }
  bool equals(const Automaton& other) const override {
    if (typeid(other) != typeid(Derived)) return false;
    return static_cast<const Derived&>(*this) == static_cast<const Derived&>(other);
  }

 protected:
  friend bool operator==(const AutomatonBase&, const AutomatonBase&) { return true; }
};

/// Builds one process automaton from that process's input. The factory is
/// the same for every process, so processes run identical code.
using AutomatonFactory = std::function<std::unique_ptr<Automaton>(const Value& input)>;

struct ProcessProgram {
  std::string name;
  AutomatonFactory make;
  std::vector<Value> inputs;  // one per process
};

}  // namespace anon::sim
