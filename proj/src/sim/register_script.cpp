#include "anon/sim/register_script.hpp"

#include <stdexcept>

namespace anon::sim {

RegisterScript::RegisterScript(std::vector<MemRequest> requests) : requests_(std::move(requests)) {}

std::optional<MemRequest> RegisterScript::next_request() const {
  if (observed_.size() >= requests_.size()) return std::nullopt;
  return requests_[observed_.size()];
}

void RegisterScript::deliver(const Value& observed, OpLog&) { observed_.push_back(observed); }

std::optional<Value> RegisterScript::output() const {
  if (next_request()) return std::nullopt;
  return Value::tuple(observed_);
}

std::size_t RegisterScript::hash() const {
  std::size_t h = observed_.size();
  for (const auto& v : observed_) h = hash_combine(h, v.hash());
  return h;
}

Value encode_requests(const std::vector<MemRequest>& requests) {
  std::vector<Value> out;
  for (const auto& r : requests) {
    const auto name = Value::str(std::string(to_string(r.kind)));
    switch (r.kind) {
      case EventKind::read: out.push_back(Value::tuple({name, Value(r.index)})); break;
      case EventKind::scan: out.push_back(Value::tuple({name})); break;
      default: out.push_back(Value::tuple({name, Value(r.index), r.value})); break;
    }
  }
  return Value::tuple(std::move(out));
}

std::vector<MemRequest> decode_requests(const Value& input) {
  std::vector<MemRequest> out;
  for (const auto& e : input.items()) {
    if (!e.is_tuple() || e.size() == 0 || !e[0].is_str())
      throw std::invalid_argument("bad memory request: " + e.text());
    const auto kind = event_kind_from_string(e[0].as_str());
    if (kind == EventKind::scan && e.size() == 1) {
      out.push_back(MemRequest::scan());
    } else if (kind == EventKind::read && e.size() == 2) {
      out.push_back(MemRequest::read(static_cast<int>(e[1].as_int())));
    } else if ((kind == EventKind::write || kind == EventKind::update) && e.size() == 3) {
      out.push_back({kind, static_cast<int>(e[1].as_int()), e[2]});
    } else {
      throw std::invalid_argument("bad memory request: " + e.text());
    }
  }
  return out;
}

ProcessProgram register_program(std::vector<std::vector<MemRequest>> scripts) {
  ProcessProgram p;
  p.name = "registers";
  for (const auto& s : scripts) p.inputs.push_back(encode_requests(s));
  p.make = [](const Value& input) { return std::make_unique<RegisterScript>(decode_requests(input)); };
  return p;
}

}  // namespace anon::sim
