#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "anon/weakset/multiplex.hpp"

namespace anon::agreement {

/// Name of the k-th safe agreement object of a program.
std::string sa_name(int k);

/**
 * One process's handle on a safe agreement object built from n logical
 * weak sets `<name>.SET[0..n-1]`, all multiplexed over the process's port.
 *
 * propose(v) walks the sets: add the current view to SET[i], read SET[i]
 * back, return early if at least two values are there and ours is the
 * smallest, otherwise adopt the smallest and move on. resolve() reads
 * SET[n-1] and returns its minimum, or nil (bottom) while it is empty.
 *
 * propose is one-shot per handle; resolve may be called any number of
 * times.
 */
class SafeAgreementClient {
 public:
  SafeAgreementClient() = default;
  SafeAgreementClient(std::string name, int n);

  const std::string& name() const { return name_; }
  bool busy() const { return phase_ != Phase::idle; }
  bool proposed() const { return proposed_; }

  void begin_propose(Value v, weakset::SetPort& port, sim::OpLog& log);
  void begin_resolve(weakset::SetPort& port, sim::OpLog& log);

  enum class Op : std::uint8_t { propose, resolve };
  struct Result {
    Op op;
    Value value;  // resolve: decided value or nil; propose: nil
  };
  /// Feeds a completed weak-set call made on this object's behalf.
  std::optional<Result> on_completion(const weakset::SetPort::Completion& c, weakset::SetPort& port,
                                      sim::OpLog& log);

  std::size_t hash() const;
  friend bool operator==(const SafeAgreementClient&, const SafeAgreementClient&) = default;

 private:
  enum class Phase : std::uint8_t { idle, adding, reading, resolving };

  weakset::LogicalSet set(int i) const;
  Result finish_propose(sim::OpLog& log);

  std::string name_;
  int n_ = 1;
  Phase phase_ = Phase::idle;
  Value view_;
  int i_ = 0;
  bool proposed_ = false;
};

}  // namespace anon::agreement
