#include "anon/weakset/program.hpp"

#include <stdexcept>

namespace anon::weakset {

ScriptedOp add_op(Value v, std::string object) { return {OpKind::add, std::move(v), std::move(object)}; }
ScriptedOp get_op(std::string object) { return {OpKind::get, Value::nil(), std::move(object)}; }

Value encode_script(const std::vector<ScriptedOp>& ops) {
  std::vector<Value> out;
  for (const auto& op : ops) {
    std::vector<Value> entry;
    if (op.kind == OpKind::add) {
      entry = {Value::str("add"), op.arg};
    } else {
      entry = {Value::str("get")};
    }
    if (!op.object.empty()) entry.push_back(Value::str(op.object));
    out.push_back(Value::tuple(std::move(entry)));
  }
  return Value::tuple(std::move(out));
}

std::vector<ScriptedOp> decode_script(const Value& input) {
  if (!input.is_tuple()) throw std::invalid_argument("weak-set script must be a tuple of calls");
  std::vector<ScriptedOp> ops;
  for (const auto& e : input.items()) {
    if (!e.is_tuple() || e.size() == 0 || !e[0].is_str())
      throw std::invalid_argument("bad weak-set call: " + e.text());
    const auto& name = e[0].as_str();
    if (name == "add" && (e.size() == 2 || e.size() == 3)) {
      ops.push_back(add_op(e[1], e.size() == 3 ? e[2].as_str() : std::string{}));
    } else if (name == "get" && (e.size() == 1 || e.size() == 2)) {
      ops.push_back(get_op(e.size() == 2 ? e[1].as_str() : std::string{}));
    } else {
      throw std::invalid_argument("bad weak-set call: " + e.text());
    }
  }
  return ops;
}

WeakSetProgram::WeakSetProgram(int n, std::vector<ScriptedOp> ops, Mutation mutation)
    : port_(n, mutation), ops_(std::move(ops)) {}

void WeakSetProgram::start(sim::OpLog& log) { launch(log); }

void WeakSetProgram::launch(sim::OpLog& log) {
  if (pc_ >= ops_.size()) return;
  const auto& op = ops_[pc_];
  if (op.object.empty()) {
    if (op.kind == OpKind::add) port_.add_physical(op.arg, log);
    else port_.get_physical(log);
  } else {
    if (op.kind == OpKind::add) port_.add(multiplex(op.object), op.arg, log);
    else port_.get(multiplex(op.object), log);
  }
}

std::optional<sim::MemRequest> WeakSetProgram::next_request() const {
  if (!port_.busy()) return std::nullopt;
  return port_.request();
}

void WeakSetProgram::deliver(const Value& observed, sim::OpLog& log) {
  auto done = port_.deliver(observed, log);
  if (!done) return;
  if (done->kind == OpKind::get) results_.push_back(done->result);
  ++pc_;
  launch(log);
}

std::optional<Value> WeakSetProgram::output() const {
  if (port_.busy() || pc_ < ops_.size()) return std::nullopt;
  return Value::tuple(results_);
}

std::size_t WeakSetProgram::hash() const {
  std::size_t h = hash_combine(port_.hash(), pc_);
  for (const auto& r : results_) h = hash_combine(h, r.hash());
  return h;
}

sim::ProcessProgram weak_set_program(int n, std::vector<std::vector<ScriptedOp>> scripts,
                                     Mutation mutation) {
  sim::ProcessProgram p;
  p.name = "weakset";
  for (const auto& s : scripts) p.inputs.push_back(encode_script(s));
  p.make = [n, mutation](const Value& input) {
    return std::make_unique<WeakSetProgram>(n, decode_script(input), mutation);
  };
  return p;
}

sim::ProcessProgram default_weak_set_program(int n, Mutation mutation) {
  std::vector<std::vector<ScriptedOp>> scripts;
  for (int i = 0; i < n; ++i) scripts.push_back({add_op(Value(i)), get_op()});
  return weak_set_program(n, std::move(scripts), mutation);
}

}  // namespace anon::weakset
