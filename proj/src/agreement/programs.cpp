#include "anon/agreement/programs.hpp"

#include <stdexcept>

namespace anon::agreement {

// ---- set agreement --------------------------------------------------------

SetAgreementMachine::SetAgreementMachine(int n, int t) {
  for (int k = 0; k <= t; ++k) sa_.emplace_back(sa_name(k), n);
}

void SetAgreementMachine::begin(Value v, weakset::SetPort& port, sim::OpLog& log) {
  log.invoke(kSetAgreementObject, "set_agree", {v});
  busy_ = true;
  k_ = 0;
  resolving_ = false;
  input_ = v;
  sa_[0].begin_propose(std::move(v), port, log);
}

std::optional<Value> SetAgreementMachine::on_completion(const weakset::SetPort::Completion& c,
                                                        weakset::SetPort& port, sim::OpLog& log) {
  auto& cur = sa_[static_cast<std::size_t>(k_)];
  auto res = cur.on_completion(c, port, log);
  if (!res) return std::nullopt;
  const int m = static_cast<int>(sa_.size());
  if (!resolving_) {
    if (++k_ < m) {
      sa_[static_cast<std::size_t>(k_)].begin_propose(input_, port, log);
      return std::nullopt;
    }
    resolving_ = true;
    k_ = 0;
    sa_[0].begin_resolve(port, log);
    return std::nullopt;
  }
  if (!res->value.is_nil()) {
    busy_ = false;
    log.respond(kSetAgreementObject, "set_agree", res->value);
    return res->value;
  }
  k_ = (k_ + 1) % m;
  sa_[static_cast<std::size_t>(k_)].begin_resolve(port, log);
  return std::nullopt;
}

std::size_t SetAgreementMachine::hash() const {
  std::size_t h = static_cast<std::size_t>(k_) * 4 + (resolving_ ? 2 : 0) + (busy_ ? 1 : 0);
  h = hash_combine(h, input_.hash());
  for (const auto& s : sa_) h = hash_combine(h, s.hash());
  return h;
}

// ---- barycentric agreement ------------------------------------------------

std::string bary_set_name(int round) { return "BARY.SET[" + std::to_string(round) + "]"; }

weakset::LogicalSet BaryMachine::round_set(int r) { return weakset::multiplex(bary_set_name(r)); }

std::optional<Value> BaryMachine::begin(Value v, weakset::SetPort& port, sim::OpLog& log) {
  log.invoke(kBaryObject, "bary_agree", {v});
  view_ = std::move(v);
  r_ = 0;
  reading_ = false;
  if (b_ == 0) {
    log.respond(kBaryObject, "bary_agree", view_);
    return view_;
  }
  port.add(round_set(0), view_, log);
  return std::nullopt;
}

std::optional<Value> BaryMachine::on_completion(const weakset::SetPort::Completion& c,
                                                weakset::SetPort& port, sim::OpLog& log) {
  if (!reading_) {
    reading_ = true;
    port.get(round_set(r_), log);
    return std::nullopt;
  }
  view_ = c.result;
  reading_ = false;
  if (++r_ == b_) {
    log.respond(kBaryObject, "bary_agree", view_);
    return view_;
  }
  port.add(round_set(r_), view_, log);
  return std::nullopt;
}

std::size_t BaryMachine::hash() const {
  std::size_t h = static_cast<std::size_t>(r_) * 2 + (reading_ ? 1 : 0);
  return hash_combine(hash_combine(h, static_cast<std::size_t>(b_)), view_.hash());
}

// ---- program automata -----------------------------------------------------

Value safe_agreement_input(const Value& proposal, int max_resolves) {
  return Value::tuple({proposal, Value(max_resolves)});
}

SafeAgreementProgram::SafeAgreementProgram(int n, const Value& input)
    : port_(n), sa_(sa_name(0), n) {
  if (!input.is_tuple() || input.size() != 2 || !input[1].is_int())
    throw std::invalid_argument("safe agreement input must be (proposal|nil, resolves)");
  resolves_left_ = static_cast<int>(input[1].as_int());
  if (!input[0].is_nil()) proposal_ = input[0];
}

void SafeAgreementProgram::start(sim::OpLog& log) {
  if (proposal_) return sa_.begin_propose(*proposal_, port_, log);
  resolve_or_stop(log);
}

void SafeAgreementProgram::resolve_or_stop(sim::OpLog& log) {
  if (resolves_left_ <= 0 || (last_ && !last_->is_nil())) {
    done_ = true;
    return;
  }
  --resolves_left_;
  sa_.begin_resolve(port_, log);
}

std::optional<sim::MemRequest> SafeAgreementProgram::next_request() const {
  if (!port_.busy()) return std::nullopt;
  return port_.request();
}

void SafeAgreementProgram::deliver(const Value& observed, sim::OpLog& log) {
  auto c = port_.deliver(observed, log);
  if (!c) return;
  auto res = sa_.on_completion(*c, port_, log);
  if (!res) return;
  if (res->op == SafeAgreementClient::Op::resolve) last_ = res->value;
  resolve_or_stop(log);
}

std::optional<Value> SafeAgreementProgram::output() const {
  if (!done_) return std::nullopt;
  return last_.value_or(Value::nil());
}

std::size_t SafeAgreementProgram::hash() const {
  std::size_t h = hash_combine(port_.hash(), sa_.hash());
  h = hash_combine(h, static_cast<std::size_t>(resolves_left_) * 2 + (done_ ? 1 : 0));
  return hash_combine(h, last_ ? last_->hash() + 1 : 0);
}

SetAgreementProgram::SetAgreementProgram(int n, int t, Value input)
    : port_(n), machine_(n, t), input_(std::move(input)) {}

void SetAgreementProgram::start(sim::OpLog& log) { machine_.begin(input_, port_, log); }

std::optional<sim::MemRequest> SetAgreementProgram::next_request() const {
  if (!port_.busy()) return std::nullopt;
  return port_.request();
}

void SetAgreementProgram::deliver(const Value& observed, sim::OpLog& log) {
  auto c = port_.deliver(observed, log);
  if (!c) return;
  if (auto d = machine_.on_completion(*c, port_, log)) decision_ = std::move(d);
}

std::size_t SetAgreementProgram::hash() const {
  std::size_t h = hash_combine(port_.hash(), machine_.hash());
  return hash_combine(h, decision_ ? decision_->hash() + 1 : 0);
}

BaryProgram::BaryProgram(int n, int b, Value input) : port_(n), machine_(b), input_(std::move(input)) {
  if (b < 0) throw std::invalid_argument("bary needs b >= 0");
}

void BaryProgram::start(sim::OpLog& log) { out_ = machine_.begin(input_, port_, log); }

std::optional<sim::MemRequest> BaryProgram::next_request() const {
  if (!port_.busy()) return std::nullopt;
  return port_.request();
}

void BaryProgram::deliver(const Value& observed, sim::OpLog& log) {
  auto c = port_.deliver(observed, log);
  if (!c) return;
  if (auto o = machine_.on_completion(*c, port_, log)) out_ = std::move(o);
}

std::size_t BaryProgram::hash() const {
  std::size_t h = hash_combine(port_.hash(), machine_.hash());
  return hash_combine(h, out_ ? out_->hash() + 1 : 0);
}

sim::ProcessProgram safe_agreement_program(int n, std::vector<Value> inputs) {
  sim::ProcessProgram p{"safeagreement", {}, std::move(inputs)};
  p.make = [n](const Value& in) { return std::make_unique<SafeAgreementProgram>(n, in); };
  return p;
}

sim::ProcessProgram set_agreement_program(int n, int t, std::vector<Value> inputs) {
  sim::ProcessProgram p{"setagreement", {}, std::move(inputs)};
  p.make = [n, t](const Value& in) { return std::make_unique<SetAgreementProgram>(n, t, in); };
  return p;
}

sim::ProcessProgram bary_program(int n, int b, std::vector<Value> inputs) {
  if (b < 1) throw std::invalid_argument("bary program needs b >= 1");
  sim::ProcessProgram p{"bary", {}, std::move(inputs)};
  p.make = [n, b](const Value& in) { return std::make_unique<BaryProgram>(n, b, in); };
  return p;
}

}  // namespace anon::agreement
