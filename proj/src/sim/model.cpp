#include "anon/sim/model.hpp"

#include <set>

namespace anon::sim {

void ModelConfig::validate() const {
  if (n < 1) throw ConfigError("n must be positive");
  if (t < 0 || t >= n) throw ConfigError("t must satisfy 0 <= t < n");
  if (max_steps == 0) throw ConfigError("max_steps must be positive");
}

int CrashPlan::distinct_actors() const {
  std::set<int> actors;
  for (const auto& r : rules) actors.insert(r.actor);
  return static_cast<int>(actors.size());
}

void CrashPlan::validate(const ModelConfig& cfg) const {
  for (const auto& r : rules) {
    if (r.actor < 0 || r.actor >= cfg.n)
      throw ConfigError("crash rule names actor " + std::to_string(r.actor) + " outside 0..n-1");
  }
  if (distinct_actors() > cfg.t)
    throw ConfigError("crash plan crashes " + std::to_string(distinct_actors()) +
                      " actors but t = " + std::to_string(cfg.t));
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::invoke: return "invoke";
    case EventKind::respond: return "respond";
    case EventKind::read: return "read";
    case EventKind::write: return "write";
    case EventKind::scan: return "scan";
    case EventKind::update: return "update";
    case EventKind::crash: return "crash";
    case EventKind::truncated: return "truncated";
  }
  return "?";
}

EventKind event_kind_from_string(std::string_view s) {
  for (auto k : {EventKind::invoke, EventKind::respond, EventKind::read, EventKind::write,
                 EventKind::scan, EventKind::update, EventKind::crash, EventKind::truncated}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown event kind: " + std::string(s));
}

bool is_memory_event(EventKind k) {
  return k == EventKind::read || k == EventKind::write || k == EventKind::scan ||
         k == EventKind::update;
}

std::uint64_t Trace::steps() const {
  std::uint64_t s = 0;
  for (const auto& e : events)
    if (is_memory_event(e.kind)) s = e.step;
  return s;
}

}  // namespace anon::sim
