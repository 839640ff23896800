#include "anon/weakset/multiplex.hpp"

namespace anon::weakset {

Value LogicalSet::tag(const Value& v) const { return Value::tuple({Value::str(name), v}); }

Value LogicalSet::project(const Value& physical_view) const {
  std::vector<Value> out;
  for (const auto& e : physical_view.items()) {
    if (e.is_tuple() && e.size() == 2 && e[0].is_str() && e[0].as_str() == name)
      out.push_back(e[1]);
  }
  return Value::set(std::move(out));
}

std::string sub_set_name(std::string_view owner, int index) {
  return std::string(owner) + ".SET[" + std::to_string(index) + "]";
}

void SetPort::add(const LogicalSet& set, Value v, sim::OpLog& log) {
  log.invoke(set.name, "add", {v});
  current_ = set;
  client_.begin_add(set.tag(v), log);
}

void SetPort::get(const LogicalSet& set, sim::OpLog& log) {
  log.invoke(set.name, "get", {});
  current_ = set;
  client_.begin_get(log);
}

void SetPort::add_physical(Value v, sim::OpLog& log) {
  current_.reset();
  client_.begin_add(std::move(v), log);
}

void SetPort::get_physical(sim::OpLog& log) {
  current_.reset();
  client_.begin_get(log);
}

std::optional<SetPort::Completion> SetPort::deliver(const Value& observed, sim::OpLog& log) {
  auto done = client_.deliver(observed, log);
  if (!done) return std::nullopt;
  if (!current_) return Completion{{}, done->kind, done->result};

  Completion c{current_->name, done->kind, Value::nil()};
  if (done->kind == OpKind::get) {
    c.result = current_->project(done->result);
    log.respond(current_->name, "get", c.result);
  } else {
    log.respond(current_->name, "add", std::nullopt);
  }
  current_.reset();
  return c;
}

std::size_t SetPort::hash() const {
  std::size_t h = client_.hash();
  if (current_) h = hash_combine(h, std::hash<std::string>{}(current_->name));
  return h;
}

}  // namespace anon::weakset
