#pragma once

#include <optional>
#include <vector>

#include "anon/agreement/safe_agreement.hpp"
#include "anon/sim/automaton.hpp"

namespace anon::agreement {

inline constexpr std::string_view kSetAgreementObject = "setagree";
inline constexpr std::string_view kBaryObject = "bary";

/**
 * (t+1)-set agreement: propose the input to SA[0..t] in turn, then resolve
 * them round-robin until one answers with a value.
 */
class SetAgreementMachine {
 public:
  SetAgreementMachine() = default;
  SetAgreementMachine(int n, int t);

  void begin(Value v, weakset::SetPort& port, sim::OpLog& log);
  std::optional<Value> on_completion(const weakset::SetPort::Completion& c, weakset::SetPort& port,
                                     sim::OpLog& log);
  bool busy() const { return busy_; }

  std::size_t hash() const;
  friend bool operator==(const SetAgreementMachine&, const SetAgreementMachine&) = default;

 private:
  std::vector<SafeAgreementClient> sa_;
  Value input_;
  int k_ = 0;
  bool resolving_ = false;
  bool busy_ = false;
};

/// b rounds of: add view to BARY.SET[r], view <- get BARY.SET[r].
class BaryMachine {
 public:
  BaryMachine() = default;
  explicit BaryMachine(int b) : b_(b) {}

  /// Returns the output at once when b = 0.
  std::optional<Value> begin(Value v, weakset::SetPort& port, sim::OpLog& log);
  std::optional<Value> on_completion(const weakset::SetPort::Completion& c, weakset::SetPort& port,
                                     sim::OpLog& log);

  std::size_t hash() const;
  friend bool operator==(const BaryMachine&, const BaryMachine&) = default;

 private:
  static weakset::LogicalSet round_set(int r);

  int b_ = 1;
  int r_ = 0;
  bool reading_ = false;
  Value view_;
};

std::string bary_set_name(int round);

/// Input: tuple(value to propose or nil, maximum number of resolves).
/// Proposes (if asked) to SA[0], then resolves until a value comes back or
/// the resolve budget runs out. Output: the last resolve result.
class SafeAgreementProgram final : public sim::AutomatonBase<SafeAgreementProgram> {
 public:
  SafeAgreementProgram(int n, const Value& input);

  void start(sim::OpLog& log) override;
  std::optional<sim::MemRequest> next_request() const override;
  void deliver(const Value& observed, sim::OpLog& log) override;
  std::optional<Value> output() const override;
  std::size_t hash() const override;
  friend bool operator==(const SafeAgreementProgram&, const SafeAgreementProgram&) = default;

 private:
  void resolve_or_stop(sim::OpLog& log);

  weakset::SetPort port_;
  SafeAgreementClient sa_;
  std::optional<Value> proposal_;
  int resolves_left_ = 0;
  std::optional<Value> last_;
  bool done_ = false;
};

class SetAgreementProgram final : public sim::AutomatonBase<SetAgreementProgram> {
 public:
  SetAgreementProgram(int n, int t, Value input);

  void start(sim::OpLog& log) override;
  std::optional<sim::MemRequest> next_request() const override;
  void deliver(const Value& observed, sim::OpLog& log) override;
  std::optional<Value> output() const override { return decision_; }
  std::size_t hash() const override;
  friend bool operator==(const SetAgreementProgram&, const SetAgreementProgram&) = default;

 private:
  weakset::SetPort port_;
  SetAgreementMachine machine_;
  Value input_;
  std::optional<Value> decision_;
};

class BaryProgram final : public sim::AutomatonBase<BaryProgram> {
 public:
  BaryProgram(int n, int b, Value input);

  void start(sim::OpLog& log) override;
  std::optional<sim::MemRequest> next_request() const override;
  void deliver(const Value& observed, sim::OpLog& log) override;
  std::optional<Value> output() const override { return out_; }
  std::size_t hash() const override;
  friend bool operator==(const BaryProgram&, const BaryProgram&) = default;

 private:
  weakset::SetPort port_;
  BaryMachine machine_;
  Value input_;
  std::optional<Value> out_;
};

Value safe_agreement_input(const Value& proposal, int max_resolves);

sim::ProcessProgram safe_agreement_program(int n, std::vector<Value> inputs);
sim::ProcessProgram set_agreement_program(int n, int t, std::vector<Value> inputs);
sim::ProcessProgram bary_program(int n, int b, std::vector<Value> inputs);

}  // namespace anon::agreement
