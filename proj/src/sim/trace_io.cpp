#include "anon/sim/trace_io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace anon::sim {

using nlohmann::ordered_json;

ordered_json event_to_json(const Event& e) {
  ordered_json j;
  j["step"] = e.step;
  j["actor"] = e.actor;
  j["kind"] = std::string(to_string(e.kind));
  j["object"] = e.object;
  j["op"] = e.op;
  ordered_json args = ordered_json::array();
  for (const auto& a : e.args) args.push_back(to_json(a));
  j["args"] = std::move(args);
  j["ret"] = e.ret ? to_json(*e.ret) : ordered_json(nullptr);
  return j;
}

Event event_from_json(const ordered_json& j) {
  Event e;
  e.step = j.at("step").get<std::uint64_t>();
  e.actor = j.at("actor").get<int>();
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  e.object = j.value("object", std::string{});
  e.op = j.value("op", std::string{});
  if (j.contains("args"))
    for (const auto& a : j.at("args")) e.args.push_back(value_from_json(a));
  if (j.contains("ret") && !j.at("ret").is_null()) e.ret = value_from_json(j.at("ret"));
  return e;
}

void write_jsonl(std::ostream& os, const Trace& trace) {
  for (const auto& e : trace.events) os << event_to_json(e).dump() << '\n';
}

std::string to_jsonl(const Trace& trace) {
  std::ostringstream os;
  write_jsonl(os, trace);
  return os.str();
}

Trace read_jsonl(std::istream& is, int n_hint) {
  Trace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      trace.events.push_back(event_from_json(ordered_json::parse(line)));
    } catch (const std::exception& ex) {
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": " + ex.what());
    }
    if (trace.events.back().kind == EventKind::truncated) trace.truncated = true;
  }
  if (n_hint > 0) {
    trace.n = n_hint;
    return trace;
  }
  int widest = 0;
  for (const auto& e : trace.events) {
    if (e.kind == EventKind::scan && e.ret) {
      trace.n = static_cast<int>(e.ret->size());
      return trace;
    }
    widest = std::max(widest, e.actor + 1);
    if ((e.kind == EventKind::update || e.kind == EventKind::write || e.kind == EventKind::read) &&
        !e.args.empty() && e.args[0].is_int())
      widest = std::max<int>(widest, static_cast<int>(e.args[0].as_int()) + 1);
  }
  trace.n = widest;
  return trace;
}

}  // namespace anon::sim
