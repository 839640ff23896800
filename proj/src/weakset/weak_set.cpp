#include "anon/weakset/weak_set.hpp"

#include <stdexcept>

namespace anon::weakset {

std::string_view to_string(Mutation m) {
  switch (m) {
    case Mutation::none: return "none";
    case Mutation::add_skips_final_scan: return "add-skips-final-scan";
    case Mutation::get_guard_n_minus_1: return "get-guard-n-minus-1";
    case Mutation::no_view_absorption: return "no-view-absorption";
  }
  return "?";
}

Mutation mutation_from_string(std::string_view s) {
  for (auto m : {Mutation::none, Mutation::add_skips_final_scan, Mutation::get_guard_n_minus_1,
                 Mutation::no_view_absorption})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown weak-set mutation: " + std::string(s));
}

WeakSetClient::WeakSetClient(int n, Mutation mutation) : n_(n), mutation_(mutation) {
  if (n < 1) throw std::invalid_argument("weak set needs n >= 1");
}

void WeakSetClient::begin_add(Value v, sim::OpLog& log) {
  if (busy()) throw sim::SimulationFault("weak set operations may not overlap within a process");
  log.invoke(kPhysicalObject, "add", {v});
  op_ = OpKind::add;
  arg_ = std::move(v);
  next_ = 0;
  phase_ = Phase::first_scan;
}

void WeakSetClient::begin_get(sim::OpLog& log) {
  if (busy()) throw sim::SimulationFault("weak set operations may not overlap within a process");
  log.invoke(kPhysicalObject, "get", {});
  op_ = OpKind::get;
  arg_ = Value::nil();
  next_ = 0;
  phase_ = Phase::first_scan;
}

sim::MemRequest WeakSetClient::request() const {
  switch (phase_) {
    case Phase::first_scan:
    case Phase::scan:
      return sim::MemRequest::scan();
    case Phase::update:
      return sim::MemRequest::update(next_, view_);
    case Phase::idle:
      break;
  }
  throw sim::SimulationFault("weak set client has no pending request");
}

bool WeakSetClient::guard_satisfied() const {
  int hits = 0;
  for (const auto& cell : snap_.items()) {
    if (op_ == OpKind::add ? cell.contains(arg_) : cell == view_) ++hits;
  }
  const int needed = (op_ == OpKind::get && mutation_ == Mutation::get_guard_n_minus_1) ? n_ - 1 : n_;
  return hits >= needed;
}

std::optional<WeakSetClient::Completion> WeakSetClient::deliver(const Value& observed,
                                                                sim::OpLog& log) {
  switch (phase_) {
    case Phase::first_scan:
      snap_ = observed;
      view_ = set_union(view_, union_of(snap_.items()));
      if (op_ == OpKind::add) view_ = set_insert(view_, arg_);
      return after_scan(log);
    case Phase::scan:
      snap_ = observed;
      if (mutation_ != Mutation::no_view_absorption) view_ = set_union(view_, union_of(snap_.items()));
      return after_scan(log);
    case Phase::update: {
      const int written = next_;
      next_ = (next_ + 1) % n_;
      if (mutation_ == Mutation::add_skips_final_scan && op_ == OpKind::add) {
        // Trust our own write instead of looking again.
        std::vector<Value> assumed(snap_.items().begin(), snap_.items().end());
        assumed[static_cast<std::size_t>(written)] = view_;
        snap_ = Value::tuple(std::move(assumed));
        if (guard_satisfied()) return finish(log);
      }
      phase_ = Phase::scan;
      return std::nullopt;
    }
    case Phase::idle:
      break;
  }
  throw sim::SimulationFault("weak set client received a result while idle");
}

std::optional<WeakSetClient::Completion> WeakSetClient::after_scan(sim::OpLog& log) {
  if (guard_satisfied()) return finish(log);
  phase_ = Phase::update;
  return std::nullopt;
}

std::optional<WeakSetClient::Completion> WeakSetClient::finish(sim::OpLog& log) {
  phase_ = Phase::idle;
  if (op_ == OpKind::add) {
    log.respond(kPhysicalObject, "add", std::nullopt);
    return Completion{OpKind::add, Value::nil()};
  }
  log.respond(kPhysicalObject, "get", view_);
  return Completion{OpKind::get, view_};
}

std::size_t WeakSetClient::hash() const {
  std::size_t h = static_cast<std::size_t>(phase_) * 31 + static_cast<std::size_t>(op_);
  h = hash_combine(h, arg_.hash());
  h = hash_combine(h, snap_.hash());
  h = hash_combine(h, view_.hash());
  return hash_combine(h, static_cast<std::size_t>(next_));
}

}  // namespace anon::weakset
