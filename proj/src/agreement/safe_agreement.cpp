#include "anon/agreement/safe_agreement.hpp"

namespace anon::agreement {

std::string sa_name(int k) { return "SA[" + std::to_string(k) + "]"; }

SafeAgreementClient::SafeAgreementClient(std::string name, int n) : name_(std::move(name)), n_(n) {}

weakset::LogicalSet SafeAgreementClient::set(int i) const {
  return weakset::multiplex(weakset::sub_set_name(name_, i));
}

void SafeAgreementClient::begin_propose(Value v, weakset::SetPort& port, sim::OpLog& log) {
  if (proposed_) throw sim::SimulationFault("second propose on " + name_ + " by one process");
  if (busy()) throw sim::SimulationFault("overlapping operations on " + name_);
  proposed_ = true;
  log.invoke(name_, "propose", {v});
  view_ = std::move(v);
  i_ = 0;
  phase_ = Phase::adding;
  port.add(set(0), view_, log);
}

void SafeAgreementClient::begin_resolve(weakset::SetPort& port, sim::OpLog& log) {
  if (busy()) throw sim::SimulationFault("overlapping operations on " + name_);
  log.invoke(name_, "resolve", {});
  phase_ = Phase::resolving;
  port.get(set(n_ - 1), log);
}

SafeAgreementClient::Result SafeAgreementClient::finish_propose(sim::OpLog& log) {
  phase_ = Phase::idle;
  log.respond(name_, "propose", std::nullopt);
  return {Op::propose, Value::nil()};
}

std::optional<SafeAgreementClient::Result> SafeAgreementClient::on_completion(
    const weakset::SetPort::Completion& c, weakset::SetPort& port, sim::OpLog& log) {
  switch (phase_) {
    case Phase::adding:
      phase_ = Phase::reading;
      port.get(set(i_), log);
      return std::nullopt;
    case Phase::reading: {
      const Value& snap = c.result;
      if (snap.size() == 0) throw sim::SimulationFault(name_ + ": empty read right after an add");
      const Value& smallest = set_min(snap);
      if (snap.size() >= 2 && view_ == smallest) return finish_propose(log);
      view_ = smallest;
      if (++i_ == n_) return finish_propose(log);
      phase_ = Phase::adding;
      port.add(set(i_), view_, log);
      return std::nullopt;
    }
    case Phase::resolving: {
      phase_ = Phase::idle;
      Value out = c.result.size() == 0 ? Value::nil() : set_min(c.result);
      log.respond(name_, "resolve", out);
      return Result{Op::resolve, out};
    }
    case Phase::idle:
      break;
  }
  throw sim::SimulationFault(name_ + ": completion while idle");
}

std::size_t SafeAgreementClient::hash() const {
  std::size_t h = std::hash<std::string>{}(name_);
  h = hash_combine(h, static_cast<std::size_t>(phase_));
  h = hash_combine(h, view_.hash());
  h = hash_combine(h, static_cast<std::size_t>(i_) * 2 + (proposed_ ? 1 : 0));
  return h;
}

}  // namespace anon::agreement
