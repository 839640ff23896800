#pragma once

#include <optional>
#include <vector>

#include "anon/sim/automaton.hpp"

namespace anon::sim {

/**
 * Issues a fixed list of raw memory requests, one per step. Output is the
 * tuple of everything observed (nil for writes and updates).
 *
 * Input encoding: tuple of ("read", i), ("write", i, set), ("scan") and
 * ("update", i, set) tuples.
 */
class RegisterScript final : public AutomatonBase<RegisterScript> {
 public:
  explicit RegisterScript(std::vector<MemRequest> requests);

  void start(OpLog&) override {}
  std::optional<MemRequest> next_request() const override;
  void deliver(const Value& observed, OpLog& log) override;
  std::optional<Value> output() const override;
  std::size_t hash() const override;

  friend bool operator==(const RegisterScript&, const RegisterScript&) = default;

 private:
  std::vector<MemRequest> requests_;
  std::vector<Value> observed_;
};

Value encode_requests(const std::vector<MemRequest>& requests);
std::vector<MemRequest> decode_requests(const Value& input);

ProcessProgram register_program(std::vector<std::vector<MemRequest>> scripts);

}  // namespace anon::sim
